"""Fixed points of the scalar map g, their stability, and count prediction.

Positive fixed points of g(x) = ((1+cdx)/(d+cx))^3 are located by two
independent routes that must agree: sign-change bracketing of log g(x) - log x
on a log-uniform grid (refined by bisection and polished by Newton), and the
positive real roots of the equivalent quartic polynomial via its companion
matrix.  Multiplicity structure follows from the slopes eta_1, eta_2 of the
two tangent lines through the origin: for d > 2 there are three fixed points
exactly when eta_1 < 1 < eta_2, and for d < 1 the map is strictly decreasing
so the fixed point is unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import TransferWeights
from .recurrence import scalar_map_g, scalar_map_dg

STABILITY_TOL = 1e-9

# |log g(x) - log x| below this at a slope-1 point counts as a tangency root
_TANGENCY_TOL = 1e-10

_GRID_POINTS = 400
_GRID_LO = 1e-8
_GRID_HI = 1e8


@dataclass(frozen=True)
class FixedPointReport:
    """Positive fixed points in ascending order with stability data.

    quartic_roots holds the raw companion-matrix route for cross-checking;
    roots holds the bracketing route after polish.
    """

    roots: tuple[float, ...]
    stability: tuple[str, ...]
    derivative: tuple[float, ...]
    count: int
    quartic_roots: tuple[float, ...] = ()


@dataclass(frozen=True)
class ThresholdReport:
    """Critical tangency data of g.

    x_crit_1, x_crit_2 solve c^2 d x^2 - 2c(d^2-2)x + d = 0 (real, positive
    only when d >= 2); eta_i = g(x_crit_i)/x_crit_i are the tangent slopes
    through the origin, evaluated both directly and from their closed forms.
    """

    eta1: float | None
    eta2: float | None
    x_crit_1: float | None
    x_crit_2: float | None
    regime: str
    eta1_closed_form: float | None = None
    eta2_closed_form: float | None = None
    closed_form_agrees: bool | None = None


def quartic_coefficients(w: TransferWeights) -> np.ndarray:
    """Coefficients of x(d+cx)^3 - (1+cdx)^3 in descending powers.

    Positive roots of this quartic are exactly the positive fixed points of g.
    The leading coefficient c^3 > 0 and constant term -1 < 0 force at least
    one positive real root.
    """
    c, d = w.c, w.d
    return np.array([
        c**3,
        3.0 * c**2 * d - c**3 * d**3,
        3.0 * c * d**2 - 3.0 * c**2 * d**2,
        d**3 - 3.0 * c * d,
        -1.0,
    ])


def _log_gap(t: float, lc: float, ld: float) -> float:
    """log g(e^t) - t, computed in log space so any weight magnitude is safe."""
    return 3.0 * (np.logaddexp(0.0, lc + ld + t) - np.logaddexp(ld, lc + t)) - t


def _log_gap_deriv(t: float, lc: float, ld: float) -> float:
    # d/dt of logaddexp(A, B + t) is the sigmoid of (B + t - A)
    s1 = 1.0 / (1.0 + math.exp(-(lc + ld + t)))
    s2 = 1.0 / (1.0 + math.exp(-(lc + t - ld)))
    return 3.0 * (s1 - s2) - 1.0


def _slope_one_points(w: TransferWeights) -> list[float]:
    """Positive real solutions of g'(x) = 1 (candidate tangency locations)."""
    c, d = w.c, w.d
    if d <= 1.0:
        return []
    coeffs = np.array([
        c**4,
        4.0 * c**3 * d,
        6.0 * c**2 * d**2 - 3.0 * c**3 * d**2 * (d * d - 1.0),
        4.0 * c * d**3 - 6.0 * c**2 * d * (d * d - 1.0),
        d**4 - 3.0 * c * (d * d - 1.0),
    ])
    if not np.all(np.isfinite(coeffs)):
        return []
    roots = np.roots(coeffs)
    keep = roots[(np.abs(roots.imag) <= 1e-8 * (1.0 + np.abs(roots.real))) & (roots.real > 0)]
    return sorted(keep.real.tolist())


def _bisect_polish(t_lo: float, t_hi: float, lc: float, ld: float) -> float:
    f_lo = _log_gap(t_lo, lc, ld)
    for _ in range(200):
        if t_hi - t_lo <= 1e-15 * max(1.0, abs(t_lo), abs(t_hi)):
            break
        t_mid = 0.5 * (t_lo + t_hi)
        f_mid = _log_gap(t_mid, lc, ld)
        if f_mid == 0.0:
            return t_mid
        if (f_lo < 0) == (f_mid < 0):
            t_lo, f_lo = t_mid, f_mid
        else:
            t_hi = t_mid
    t = 0.5 * (t_lo + t_hi)
    for _ in range(4):
        f = _log_gap(t, lc, ld)
        df = _log_gap_deriv(t, lc, ld)
        if df == 0.0 or not math.isfinite(df):
            break
        step = f / df
        if abs(step) > 1.0:
            break
        t -= step
    return t


def find_positive_fixed_points(w: TransferWeights) -> FixedPointReport:
    """All positive solutions of g(x) = x, bracketed, polished, cross-checked.

    The grid spans [1e-8, 1e8] extended to cover [d^-3, d^3] (every fixed
    point lies between g(0) and g(inf)), and is augmented with the slope-1
    points of g so tangency pairs are not stepped over.
    """
    c, d = w.c, w.d
    lc, ld = math.log(c), math.log(d)

    span = 3.0 * abs(ld)
    t_lo = min(math.log(_GRID_LO), -span - 1.0)
    t_hi = max(math.log(_GRID_HI), span + 1.0)
    ts = np.linspace(t_lo, t_hi, _GRID_POINTS)

    slope_one = _slope_one_points(w)
    if slope_one:
        extra = np.log(slope_one)
        ts = np.unique(np.concatenate([ts, extra - 1e-4, extra, extra + 1e-4]))

    gaps = 3.0 * (np.logaddexp(0.0, lc + ld + ts) - np.logaddexp(ld, lc + ts)) - ts

    roots_t: list[float] = []
    zero_hits = np.flatnonzero(gaps == 0.0)
    roots_t.extend(ts[zero_hits].tolist())
    sign_change = np.flatnonzero((gaps[:-1] * gaps[1:]) < 0.0)
    for k in sign_change:
        roots_t.append(_bisect_polish(ts[k], ts[k + 1], lc, ld))

    # a tangency touches zero without a sign change; catch it at slope-1 points
    for x0 in slope_one:
        t0 = math.log(x0)
        if abs(_log_gap(t0, lc, ld)) < _TANGENCY_TOL:
            roots_t.append(t0)

    roots_t.sort()
    merged: list[float] = []
    for t in roots_t:
        if not merged or t - merged[-1] > 1e-8:
            merged.append(t)
    roots = tuple(math.exp(t) for t in merged)

    coeffs = quartic_coefficients(w)
    quartic: tuple[float, ...] = ()
    if np.all(np.isfinite(coeffs)):
        qr = np.roots(coeffs)
        qr = qr[(np.abs(qr.imag) <= 1e-7 * (1.0 + np.abs(qr.real))) & (qr.real > 0)]
        q = np.sort(qr.real)
        kept: list[float] = []
        for x in q:
            if not kept or x - kept[-1] > 1e-7 * max(1.0, x):
                kept.append(float(x))
        quartic = tuple(kept)

    report = FixedPointReport(
        roots=roots,
        stability=("",) * len(roots),
        derivative=(0.0,) * len(roots),
        count=len(roots),
        quartic_roots=quartic,
    )
    return classify_stability(report, w)


def classify_stability(report: FixedPointReport, w: TransferWeights) -> FixedPointReport:
    """Label each root by |g'|: stable below 1, unstable above, marginal at 1."""
    derivs = tuple(scalar_map_dg(r, w) for r in report.roots)
    labels = []
    for dg in derivs:
        if abs(dg) < 1.0 - STABILITY_TOL:
            labels.append("stable")
        elif abs(dg) > 1.0 + STABILITY_TOL:
            labels.append("unstable")
        else:
            labels.append("marginal")
    return replace(report, stability=tuple(labels), derivative=derivs)


def _eta_closed_forms(c: float, d: float) -> tuple[float, float]:
    """Closed-form tangent slopes (the direct route is g(x*)/x*)."""
    s = math.sqrt(4.0 - 5.0 * d * d + d**4)
    d2 = d * d
    eta1 = -(c * d**4 * (1.0 - d2 + s) ** 3) / ((2.0 - 2.0 * d2 + s) ** 3 * (2.0 - d2 + s))
    eta2 = (c * d**4 * (-1.0 + d2 + s) ** 3) / ((-2.0 + d2 + s) * (-2.0 + 2.0 * d2 + s) ** 3)
    return eta1, eta2


def critical_points(w: TransferWeights) -> ThresholdReport:
    """Tangency points and threshold slopes; regime label for the count rule.

    The tangency abscissas are real and positive only for d >= 2 (the
    discriminant (d^2-1)(d^2-4) is negative on 1 < d < 2, and for d < 1 both
    quadratic roots are negative).
    """
    c, d = w.c, w.d
    regime = "multi-capable" if d > 2.0 else "unique"
    disc = (d * d - 1.0) * (d * d - 4.0)
    if disc < 0.0 or d <= math.sqrt(2.0):
        return ThresholdReport(eta1=None, eta2=None, x_crit_1=None, x_crit_2=None,
                               regime=regime)
    s = math.sqrt(disc)
    x1 = ((d * d - 2.0) - s) / (c * d)
    x2 = ((d * d - 2.0) + s) / (c * d)
    eta1 = scalar_map_g(x1, w) / x1
    eta2 = scalar_map_g(x2, w) / x2
    cf1, cf2 = _eta_closed_forms(c, d)
    agrees = (abs(cf1 / eta1 - 1.0) < 1e-9) and (abs(cf2 / eta2 - 1.0) < 1e-9)
    return ThresholdReport(eta1=eta1, eta2=eta2, x_crit_1=x1, x_crit_2=x2,
                           regime=regime, eta1_closed_form=cf1,
                           eta2_closed_form=cf2, closed_form_agrees=agrees)


def predict_count(w: TransferWeights) -> tuple[int, str]:
    """Fixed-point count from the threshold rule, with the regime used.

    d < 1 gives one (decreasing map); d > 2 gives three when eta_1 < 1 < eta_2,
    two at tangency (equality within 1e-9), one otherwise.  In the band
    1 <= d <= 2 no closed-form rule applies and the direct root search decides
    (on 1 < d < 2 the negative discriminant already forbids tangencies).
    """
    d = w.d
    if d < 1.0:
        return 1, "unique: d < 1, g strictly decreasing"
    if d > 2.0:
        th = critical_points(w)
        if min(abs(th.eta1 - 1.0), abs(th.eta2 - 1.0)) <= STABILITY_TOL:
            return 2, "tangency: an eta threshold equals 1 within 1e-9"
        if th.eta1 < 1.0 < th.eta2:
            return 3, "multi-capable: eta1 < 1 < eta2"
        return 1, "multi-capable regime but 1 outside (eta1, eta2)"
    count = find_positive_fixed_points(w).count
    return count, "intermediate band 1 <= d <= 2: count from direct root search"


@dataclass(frozen=True)
class IterationResult:
    trajectory: tuple[float, ...]
    limit: float
    converged: bool
    matched_root: float | None


def iterate_map(x0: float, w: TransferWeights, max_iter: int = 200,
                tol: float = 1e-12) -> IterationResult:
    """Iterate x -> g(x) from x0 and report the limit and its matching root.

    Stops when successive iterates differ by less than tol*max(1, x); a run
    that exhausts max_iter is reported as non-converged rather than raising.
    The limit is matched against the fixed points within 1e-6 relative.
    """
    if not (x0 > 0 and math.isfinite(x0)):
        raise ValueError("x0 must be positive finite")
    traj = [float(x0)]
    x = float(x0)
    converged = False
    for _ in range(max_iter):
        x_next = scalar_map_g(x, w)
        traj.append(x_next)
        if abs(x_next - x) < tol * max(1.0, abs(x)):
            x = x_next
            converged = True
            break
        x = x_next
    matched = None
    for r in find_positive_fixed_points(w).roots:
        if abs(x - r) <= 1e-6 * max(1.0, r):
            matched = r
            break
    return IterationResult(trajectory=tuple(traj), limit=x,
                           converged=converged, matched_root=matched)
