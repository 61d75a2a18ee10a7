"""Shared reference points and frozen expected values.

The numeric expectations below were computed independently at 40 significant
digits (mpmath; see scripts/reference_values.py) and frozen here, so the
tests compare the float implementation against an external oracle rather
than against itself.
"""

import numpy as np
import pytest

from ivtree import TransferWeights, couplings, derive_weights

# (J, Jp, T) with three positive fixed points: two stable measures coexist
THREE_ROOT_POINT = (-1.7, 6.5, 13.0)
THREE_ROOT_EXPECTED = {
    "a": 0.877420232621723477,
    "b": 1.64872127070012815,
    "c": 0.769866264613959339,
    "d": 2.71828182845904524,
    "roots": (0.0710989843873347339, 2.85304542629058773, 7.93107324501629186),
    "derivatives": (0.329339102607707622, 1.2288824614792192, 0.753671967201859083),
    "eta1": 0.557038806988511887,
    "eta2": 1.06400857167366853,
    "x_crit": (0.351596962950149009, 4.79870780358037073),
}

# J = Jp < 0 with d < 1: g is strictly decreasing, one fixed point
DECREASING_POINT = (-1.045, -1.045, 6.55)
DECREASING_EXPECTED = {
    "cd": 0.726814516517350984,
    "root": 1.10786343236430422,
    "derivative": -0.469216760397701558,
}

# negative temperature, d < 1: again a unique fixed point
NEGATIVE_T_POINT = (6.75, 1.95, -5.75)
NEGATIVE_T_EXPECTED = {
    "c": 0.0955767119970859725,
    "d": 0.507498831990590048,
    "root": 3.00017921740009711,
    "derivative": -0.701981300304565362,
}

# (c, d) tuned so the lower tangent slope through the origin equals 1:
# the map is tangent to the diagonal and the count drops from 3 to 1
TANGENT_CASE = {
    "c": 1.2305654516899863,
    "d": 2.5,
    "x_tangent": 0.264290933136957437,
    "x_transversal": 9.78668780826017062,
}


@pytest.fixture
def three_root_weights() -> TransferWeights:
    return derive_weights(couplings(*THREE_ROOT_POINT))


@pytest.fixture
def three_root_params():
    return couplings(*THREE_ROOT_POINT)


def assert_close(actual, expected, rtol, label=""):
    """Relative comparison with a readable failure message."""
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    err = np.abs(actual - expected) / np.maximum(np.abs(expected), 1e-300)
    assert np.all(err <= rtol), (
        f"{label or 'value'}: {actual} vs expected {expected} "
        f"(max rel err {err.max():.3e} > {rtol:.1e})"
    )
