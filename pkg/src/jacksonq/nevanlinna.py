"""Numerical Nevanlinna functionals and desk-scale growth checks.

Normalisations:

    m(r,f) = (1/2pi) int_0^{2pi} log+ |f(r e^{i th})| d th
    N(r,f) = sum_{0<|z_j|<=r} m_j log(r/|z_j|) + n(0) log r     (poles z_j)
    T(r,f) = m(r,f) + N(r,f)

Counting integrals are evaluated in closed form from sorted zero/pole
moduli, never by numerical t-integration. The proximity integral is a
composite trapezoid on equally spaced angles (spectrally accurate for
circles that keep away from zeros and poles), with the step-halving
difference reported as its error estimate.

Limit quantities (logarithmic order, defects, the second-fundamental-
theorem margin, Wiman-Valiron ratios) are reported as finite-radius
regression proxies with confidence half-widths; nothing here asserts an
actual limsup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DomainError,
    InsufficientGrid,
    MaxModulusAmbiguous,
    PoleOnCircle,
    TargetUnsupported,
    TruncationTooShort,
)
from .polyroots import poly_eval, roots_with_multiplicity
from .qcore import QParam, TruncatedSeries
from .qode import RationalFunction, dq_rational, dqk_rational
from .qoperator import Sampler, dqk_closed_form

INF = math.inf

_NUDGE_MARGIN = 1e-6
_NUDGE_STEP = 1e-5


# ---------------------------------------------------------------------------
# Grids and models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing radii plus the angular node count for circle
    quadrature."""

    radii: tuple
    angular_nodes: int = 256

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if any(r <= 0 for r in radii):
            raise DomainError("radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise DomainError("radii must be strictly increasing")
        if self.angular_nodes < 64:
            raise DomainError("need at least 64 angular nodes")

    @classmethod
    def log_spaced(cls, rmin: float, rmax: float, points: int,
                   angular_nodes: int = 256) -> "RadialGrid":
        if points < 2 or rmax <= rmin:
            raise DomainError("need rmax > rmin and at least 2 points")
        radii = np.logspace(math.log10(rmin), math.log10(rmax), points)
        return cls(tuple(float(r) for r in radii), angular_nodes)

    def avoiding(self, moduli) -> "RadialGrid":
        """Nudge radii sitting within relative 1e-6 of any given modulus
        outward by relative 1e-5 (repeatedly, until clear)."""
        mods = sorted(m for m in moduli if m > 0)
        out = []
        for r in self.radii:
            rr = r
            for _ in range(64):
                if all(abs(rr / m - 1.0) > _NUDGE_MARGIN for m in mods):
                    break
                rr *= 1.0 + _NUDGE_STEP
            out.append(rr)
        return RadialGrid(tuple(out), self.angular_nodes)


class MeroModel:
    """A meromorphic function in one of four evaluable shapes.

    rational       exact zero/pole lists from the coefficient arrays
    entire_series  TruncatedSeries with a certified evaluation radius;
                   zeros located by argument-principle winding
    q_product      entire product with an exact zero lattice and an
                   overflow-free log evaluator
    sampler        black box; proximity only (declared entire when the
                   caller knows there are no poles)
    """

    def __init__(self, kind: str, qp: Optional[QParam] = None, **parts):
        self.kind = kind
        self.qp = qp
        self._parts = parts

    # -- factories -----------------------------------------------------------

    @classmethod
    def from_rational(cls, rf: RationalFunction,
                      qp: Optional[QParam] = None) -> "MeroModel":
        return cls("rational", qp, rational=rf)

    @classmethod
    def from_series(cls, ts: TruncatedSeries,
                    qp: Optional[QParam] = None) -> "MeroModel":
        return cls("entire_series", qp, series=ts)

    @classmethod
    def from_q_product(cls, zeros_up_to: Callable[[float], list],
                       log_eval: Callable[[complex], complex],
                       eval_fn: Optional[Callable[[complex], complex]] = None,
                       origin_value: complex = 1.0,
                       qp: Optional[QParam] = None) -> "MeroModel":
        return cls("q_product", qp, zeros_up_to=zeros_up_to,
                   log_eval=log_eval, eval_fn=eval_fn,
                   origin_value=complex(origin_value))

    @classmethod
    def from_sampler(cls, sampler: Sampler, entire: bool = False,
                     qp: Optional[QParam] = None) -> "MeroModel":
        return cls("sampler", qp, sampler=sampler, entire=entire)

    # -- evaluation -----------------------------------------------------------

    @property
    def rational(self) -> RationalFunction:
        return self._parts["rational"]

    @property
    def series(self) -> TruncatedSeries:
        return self._parts["series"]

    def eval(self, z):
        if self.kind == "rational":
            return self.rational.eval(z)
        if self.kind == "entire_series":
            return self.series.eval(z)
        if self.kind == "q_product":
            fn = self._parts.get("eval_fn")
            if fn is not None:
                return fn(z) if np.ndim(z) == 0 else np.array([fn(w) for w in np.ravel(z)]).reshape(np.shape(z))
            return np.exp(self._log_eval_vec(z))
        s = self._parts["sampler"]
        if np.ndim(z) == 0:
            return s(z)
        return np.array([s(w) for w in np.ravel(z)]).reshape(np.shape(z))

    def sampler(self) -> Sampler:
        if self.kind == "sampler":
            return self._parts["sampler"]
        if self.kind == "rational":
            rf = self.rational
            return Sampler(rf.eval, None, tuple(rf.poles()))
        if self.kind == "entire_series":
            from .qoperator import series_sampler

            return series_sampler(self.series)
        fn = self._parts.get("eval_fn")
        log_eval = self._parts["log_eval"]
        return Sampler(fn if fn is not None else (lambda z: np.exp(log_eval(z))))

    def _log_eval_vec(self, zs):
        log_eval = self._parts["log_eval"]
        flat = np.ravel(np.asarray(zs, dtype=np.complex128))
        out = np.array([log_eval(z) for z in flat], dtype=np.complex128)
        return out.reshape(np.shape(zs))

    def log_abs(self, zs) -> np.ndarray:
        """log|f| at an array of points, overflow-free where the model
        allows it."""
        if self.kind == "rational":
            rf = self.rational
            zs = np.asarray(zs, dtype=np.complex128)
            with np.errstate(divide="ignore"):
                return (np.log(np.abs(poly_eval(rf.num, zs)))
                        - np.log(np.abs(poly_eval(rf.den, zs))))
        if self.kind == "q_product":
            return np.real(self._log_eval_vec(zs))
        vals = self.eval(np.asarray(zs, dtype=np.complex128))
        with np.errstate(divide="ignore"):
            return np.log(np.abs(vals))

    # -- structure ------------------------------------------------------------

    def is_entire(self) -> bool:
        if self.kind in ("entire_series", "q_product"):
            return True
        if self.kind == "rational":
            return self.rational.den_degree == 0
        return bool(self._parts.get("entire"))

    def zeros_up_to(self, r: float):
        """(location, multiplicity) pairs of zeros with |z| <= r; for the
        series kind only moduli are known, reported as (modulus, mult)."""
        if self.kind == "rational":
            return [(z, m) for z, m in self.rational.zeros() if abs(z) <= r]
        if self.kind == "q_product":
            return [p for p in self._parts["zeros_up_to"](r)]
        if self.kind == "entire_series":
            lam = _origin_multiplicity(self.series.coeffs)
            mods = series_zero_moduli(self.series, r)
            out = [(0.0, lam)] if lam else []
            return out + [(m, c) for m, c in mods]
        raise TargetUnsupported("sampler models expose no zero structure")

    def poles_up_to(self, r: float):
        if self.kind == "rational":
            return [(z, m) for z, m in self.rational.poles() if abs(z) <= r]
        if self.is_entire():
            return []
        raise TargetUnsupported("sampler models expose no pole structure")

    def known_moduli(self, r: float):
        """Moduli of stored zeros/poles up to r, for grid nudging."""
        out = []
        try:
            out += [abs(z) if not isinstance(z, float) else z
                    for z, _ in self.zeros_up_to(r)]
        except TargetUnsupported:
            pass
        try:
            out += [abs(z) for z, _ in self.poles_up_to(r)]
        except TargetUnsupported:
            pass
        return [m for m in out if m > 0]

    def origin_leading(self):
        """(lam, c_lam) of the local behaviour c_lam z^lam at the origin."""
        if self.kind == "rational":
            return self.rational.origin_leading()
        if self.kind == "entire_series":
            lam = _origin_multiplicity(self.series.coeffs)
            return lam, complex(self.series.coeffs[lam])
        if self.kind == "q_product":
            return 0, self._parts["origin_value"]
        raise TargetUnsupported("sampler models expose no origin data")


def _origin_multiplicity(coeffs: np.ndarray) -> int:
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if nz.size == 0:
        raise DomainError("zero series has no origin multiplicity")
    return int(nz[0])


# ---------------------------------------------------------------------------
# Winding-number zero location for series models
# ---------------------------------------------------------------------------


def winding_number(eval_vec: Callable[[np.ndarray], np.ndarray], r: float,
                   nodes: int = 512, max_nodes: int = 65536) -> int:
    """Winding of f around 0 along |z| = r, by summing angle increments.

    The node count doubles until every increment is below pi/2 and the
    total is within 1e-2 of an integer."""
    M = nodes
    while True:
        th = np.linspace(0.0, 2.0 * np.pi, M, endpoint=False)
        vals = np.asarray(eval_vec(r * np.exp(1j * th)))
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            raise PoleOnCircle(f"zero/invalid value on circle r = {r:g}")
        rolled = np.roll(vals, -1)
        inc = np.angle(rolled / vals)
        total = float(np.sum(inc)) / (2.0 * np.pi)
        if np.max(np.abs(inc)) < 0.5 * np.pi and abs(total - round(total)) < 1e-2:
            return int(round(total))
        M *= 2
        if M > max_nodes:
            raise DomainError(
                f"winding number did not stabilise at r = {r:g}")


def series_zero_moduli(ts: TruncatedSeries, r: float,
                       rel_tol: float = 1e-4) -> list:
    """Moduli of the nonzero-origin zeros of a series model inside radius
    r, located by bisecting jumps of the winding number on sub-circles.
    Returns (modulus, count) pairs; multiplicities at the same modulus
    arrive merged."""
    if ts.safe_radius is not None and r > ts.safe_radius:
        raise DomainError("radius beyond certified evaluation disc")
    lam = _origin_multiplicity(ts.coeffs)
    ev = ts.eval
    t0 = r * 1e-9
    w0 = lam
    w1 = winding_number(ev, r)
    out = []

    def split(a: float, wa: int, b: float, wb: int):
        if wb == wa:
            return
        if (b - a) <= rel_tol * b:
            out.append((0.5 * (a + b), wb - wa))
            return
        mid = math.sqrt(a * b)
        wm = winding_number(ev, mid)
        split(a, wa, mid, wm)
        split(mid, wm, b, wb)

    split(t0, w0, r, w1)
    return out


# ---------------------------------------------------------------------------
# Core functionals
# ---------------------------------------------------------------------------


def _circle_mean(model: MeroModel, r: float, M: int, positive_part: bool):
    """Trapezoid mean of log|f| (or log+|f|) over |z| = r, plus the
    step-halving error estimate (floored near machine precision)."""
    th = np.linspace(0.0, 2.0 * np.pi, M, endpoint=False)
    la = model.log_abs(r * np.exp(1j * th))
    if np.any(np.isposinf(la)) or np.any(np.isnan(la)):
        raise PoleOnCircle(f"pole on quadrature circle r = {r:g}")
    vals = np.maximum(la, 0.0) if positive_part else la
    if not positive_part and np.any(np.isneginf(vals)):
        raise PoleOnCircle(f"zero on quadrature circle r = {r:g}")
    full = float(np.mean(vals))
    half = float(np.mean(vals[::2]))
    err = abs(full - half) + 16.0 * np.finfo(float).eps * (1.0 + abs(full))
    return full, err


def proximity(model: MeroModel, r: float, M: int = 4096) -> float:
    """m(r,f): circle average of log+|f|."""
    return _circle_mean(model, r, M, positive_part=True)[0]


def proximity_with_error(model: MeroModel, r: float, M: int = 4096):
    return _circle_mean(model, r, M, positive_part=True)


def _integrated_counting(origin_mult: int, moduli_mults, r: float) -> float:
    """N(r) = n(0) log r + sum_{0<|z|<=r} m log(r/|z|)."""
    total = origin_mult * math.log(r)
    for mod, mult in moduli_mults:
        if 0.0 < mod <= r:
            total += mult * math.log(r / mod)
    return total


def counting_N(model: MeroModel, r: float, target=0.0) -> float:
    """Integrated counting function N(r, f=target).

    rational models resolve any finite target (roots of num - a den) and
    infinity (poles); q_product and series models resolve target 0 (and
    infinity trivially, being entire)."""
    if target == INF:
        if model.is_entire():
            return 0.0
        pts = model.poles_up_to(r)
        origin = sum(m for z, m in pts if abs(z) == 0.0)
        rest = [(abs(z), m) for z, m in pts if abs(z) > 0.0]
        return _integrated_counting(origin, rest, r)
    if model.kind == "rational":
        rf = model.rational if target == 0 else model.rational.subtract_const(target)
        origin, rest = _rational_zero_data(rf)
        return _integrated_counting(origin, [(abs(z), m) for z, m in rest], r)
    if model.kind in ("q_product", "entire_series"):
        if target != 0:
            raise TargetUnsupported(
                f"{model.kind} models count only target 0 and infinity")
        pts = model.zeros_up_to(r)
        origin = sum(m for z, m in pts
                     if (z == 0.0 if isinstance(z, float) else abs(z) == 0.0))
        rest = [((z if isinstance(z, float) else abs(z)), m)
                for z, m in pts if (z if isinstance(z, float) else abs(z)) > 0]
        return _integrated_counting(origin, rest, r)
    raise TargetUnsupported("sampler models cannot count")


def _rational_zero_data(rf: RationalFunction, strict: bool = False):
    """Origin multiplicity and nonzero zeros of a rational function, with
    the origin order read exactly off the coefficients."""
    num = rf.num
    scale = float(np.max(np.abs(num)))
    if scale == 0.0:
        raise DomainError("zero function has no zero-counting data")
    lam = int(np.flatnonzero(np.abs(num) > 1e-13 * scale)[0])
    deflated = num[lam:]
    roots = (roots_with_multiplicity(deflated, strict_ambiguity=strict)
             if deflated.size > 1 else [])
    return lam, roots


@dataclass
class NevanlinnaSample:
    """One radius worth of functionals; nJ columns are NaN for models
    where the Jackson truncated counting is not computable."""

    r: float
    m: float
    N0: float
    Ninf: float
    T: float
    nJ0: float = math.nan
    nJinf: float = math.nan
    quad_err: float = 0.0


def characteristic(model: MeroModel, r: float, M: int = 4096) -> NevanlinnaSample:
    """T(r,f) = m(r,f) + N(r,f), with the supporting columns recorded."""
    mval, err = proximity_with_error(model, r, M)
    Ninf = counting_N(model, r, INF)
    try:
        N0 = counting_N(model, r, 0.0)
    except (TargetUnsupported, DomainError):
        N0 = math.nan
    sample = NevanlinnaSample(r=r, m=mval, N0=N0, Ninf=Ninf, T=mval + Ninf,
                              quad_err=err)
    if model.kind == "rational" and model.qp is not None:
        nt0, Nt0 = jackson_truncated_counting(model, r, 0.0, model.qp)
        ntinf, Ntinf = jackson_truncated_counting(model, r, INF, model.qp)
        sample.nJ0 = Nt0
        sample.nJinf = Ntinf
    return sample


def jensen_residual(model: MeroModel, r: float, M: int = 4096) -> float:
    """Absolute defect in the Jensen identity

        (1/2pi) int log|f| = log|c_lam| + N(r, 1/f) - N(r, f),

    where c_lam z^lam is the leading origin behaviour (the log|c_lam|
    term covers functions with f(0) in {0, inf} after the z^lam
    peel-off, whose log r contribution sits inside the N terms)."""
    quad, _ = _circle_mean(model, r, M, positive_part=False)
    lam, c_lam = model.origin_leading()
    n_zero = counting_N(model, r, 0.0)
    n_pole = counting_N(model, r, INF)
    return abs(quad - math.log(abs(c_lam)) - n_zero + n_pole)


# ---------------------------------------------------------------------------
# Jackson truncated counting
# ---------------------------------------------------------------------------


def _match_multiplicity(point: complex, zero_list, scale: float) -> int:
    for z, m in zero_list:
        if abs(point - z) <= 1e-6 * max(1.0, scale):
            return m
    return 0


def jackson_truncated_counting(model: MeroModel, r: float, target,
                               qp: QParam):
    """Jackson-type truncated counting for a rational model.

    Every point with f = target (multiplicity h) contributes
    h - min(h, k'), where k' is the multiplicity of the zero of D_q f at
    the point (for target = infinity: of D_q(1/f) at the pole). Returns
    the pair (ntilde at radius r, integrated Ntilde at radius r).

    Root clusters at the edge of the merging tolerance raise
    MultiplicityAmbiguous: the h and k' bookkeeping would depend on the
    tolerance there.
    """
    if model.kind != "rational":
        raise TargetUnsupported("Jackson truncated counting needs exact "
                                "zero/pole structure (rational model)")
    rf = model.rational
    if target == INF:
        points = rf.poles()
        dq_zero_list = _dq_zero_list(rf.reciprocal(), qp)
    else:
        shifted = rf if target == 0 else rf.subtract_const(target)
        lam, rest = _rational_zero_data(shifted, strict=True)
        points = ([(0.0 + 0.0j, lam)] if lam else []) + rest
        dq_zero_list = _dq_zero_list(rf, qp)
    scale = max([1.0] + [abs(z) for z, _ in points])
    ntilde_r = 0.0
    contributions = []
    for z, h in points:
        kprime = _match_multiplicity(z, dq_zero_list, scale)
        weight = h - min(h, kprime)
        if weight:
            contributions.append((abs(z), weight))
            if abs(z) < r:
                ntilde_r += weight
    origin = sum(w for mod, w in contributions if mod == 0.0)
    rest = [(mod, w) for mod, w in contributions if mod > 0.0]
    Ntilde = _integrated_counting(origin, rest, r)
    return ntilde_r, Ntilde


def _dq_zero_list(rf: RationalFunction, qp: QParam):
    df = dq_rational(rf, qp)
    if df.is_zero:
        raise DomainError("D_q f vanishes identically; f is constant")
    lam, rest = _rational_zero_data(df)
    return ([(0.0 + 0.0j, lam)] if lam else []) + rest


# ---------------------------------------------------------------------------
# Defects
# ---------------------------------------------------------------------------


@dataclass
class DefectReport:
    """Finite-radius proxies for the defect quantities at one target.

    delta       1 - N(r, f=a)/T(r)            (Nevanlinna deficiency)
    vartheta_J  (N(r, f=a) - Ntilde_J)/T(r)   (multiplicity index)
    theta_J     1 - Ntilde_J(r, f=a)/T(r)     (ramification index)

    evaluated at the largest grid radius, clamped to [-0.1, 1.1] with the
    raw values kept alongside; trend_slope is the least-squares slope of
    the delta proxy over the top half of the grid (a crude stand-in for
    the limsup direction)."""

    target: object
    delta: float
    vartheta_J: float
    theta_J: float
    raw: tuple
    clamped: bool
    trend_slope: float
    grid: RadialGrid


def _clamp(x: float):
    return min(1.1, max(-0.1, x)), not (-0.1 <= x <= 1.1)


def defect_estimates(model: MeroModel, grid: RadialGrid, targets,
                     M: Optional[int] = None) -> list:
    """Defect/ramification proxies for each target over the grid."""
    M = M or grid.angular_nodes
    grid = grid.avoiding(model.known_moduli(grid.radii[-1] * 2.0))
    qp = model.qp
    if qp is None:
        raise DomainError("defect estimates need the model's QParam")
    out = []
    Ts = [characteristic(model, r, M).T for r in grid.radii]
    for a in targets:
        Ns = [counting_N(model, r, a) for r in grid.radii]
        Nts = [jackson_truncated_counting(model, r, a, qp)[1]
               for r in grid.radii]
        deltas = [1.0 - n / t for n, t in zip(Ns, Ts)]
        top = len(grid.radii) // 2
        xs = np.log(np.log(np.array(grid.radii[top:])))
        slope = float(np.polyfit(xs, np.array(deltas[top:]), 1)[0]) \
            if len(grid.radii) - top >= 2 else 0.0
        T_top = Ts[-1]
        raw = (deltas[-1],
               (Ns[-1] - Nts[-1]) / T_top,
               1.0 - Nts[-1] / T_top)
        d, f1 = _clamp(raw[0])
        v, f2 = _clamp(raw[1])
        t, f3 = _clamp(raw[2])
        out.append(DefectReport(a, d, v, t, raw, f1 or f2 or f3, slope, grid))
    return out


# ---------------------------------------------------------------------------
# Logarithmic order estimators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogOrderEstimate:
    value: float
    half_width: float
    estimator: str
    radii: tuple
    data: tuple


def _loglog_regression(radii, ys, estimator: str, offset: float = 0.0,
                       top_half: bool = True) -> LogOrderEstimate:
    radii = np.asarray(radii, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if radii.size < 6:
        raise InsufficientGrid("need at least 6 radii")
    if radii[-1] / radii[0] < 0.999e3:
        raise InsufficientGrid("grid must span at least 3 decades")
    start = radii.size // 2 if top_half else 0
    x = np.log(np.log(radii[start:]))
    y = ys[start:]
    if float(np.max(np.abs(y))) < 1e-12:
        raise InsufficientGrid(
            "characteristic does not grow; order estimator degenerate")
    n = x.size
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    sxx = float(np.sum((x - np.mean(x)) ** 2))
    if n > 2 and sxx > 0:
        s2 = float(np.sum(resid**2)) / (n - 2)
        half = 2.0 * math.sqrt(s2 / sxx)
    else:
        half = math.inf if n <= 2 else 0.0
    return LogOrderEstimate(float(slope) + offset, half, estimator,
                            tuple(float(r) for r in radii),
                            tuple(float(v) for v in ys))


def log_order_from_T(samples: Sequence[NevanlinnaSample]) -> LogOrderEstimate:
    """sigma_log proxy: slope of log+ T against log log r, top half."""
    radii = [s.r for s in samples]
    ys = [math.log(max(s.T, 1.0)) for s in samples]
    if all(abs(y) < 1e-12 for y in ys):
        raise InsufficientGrid("characteristic does not grow")
    return _loglog_regression(radii, ys, "T")


def log_order_from_counting(model: MeroModel, grid: RadialGrid,
                            target=0.0) -> LogOrderEstimate:
    """lambda_log proxy from the integrated counting function of the
    given target (exact lattice/root arithmetic, no quadrature)."""
    grid = grid.avoiding(model.known_moduli(grid.radii[-1] * 2.0))
    ys = [math.log(max(counting_N(model, r, target), 1.0))
          for r in grid.radii]
    return _loglog_regression(grid.radii, ys, "counting")


@dataclass
class WimanValironSample:
    r: float
    mu: float
    nu: int
    max_modulus_point: Optional[complex] = None
    ratio_check: Optional[complex] = None


def max_term_central_index(f: TruncatedSeries, r: float) -> WimanValironSample:
    """mu(r) = max |c_n| r^n and nu(r) = the largest maximising index.

    Requires the maximiser to sit in the lower half of the stored range,
    otherwise the stored truncation is too short to trust it."""
    mags = np.abs(f.coeffs)
    with np.errstate(divide="ignore"):
        logs = np.where(mags > 0, np.log(np.where(mags > 0, mags, 1.0)),
                        -math.inf) + np.arange(mags.size) * math.log(r)
    best = float(np.max(logs))
    nu = int(np.flatnonzero(logs == best)[-1])
    if nu > 0 and 2 * nu >= f.order:
        raise TruncationTooShort(
            f"central index {nu} not interior to stored order {f.order}")
    mu = math.exp(best) if best < 700 else math.inf
    return WimanValironSample(r=r, mu=mu, nu=nu)


def log_order_from_nu(f: TruncatedSeries, grid: RadialGrid) -> LogOrderEstimate:
    """sigma_log proxy: slope of log+ nu against log log r, plus one."""
    nus = [max_term_central_index(f, r).nu for r in grid.radii]
    ys = [math.log(max(nu, 1)) for nu in nus]
    return _loglog_regression(grid.radii, ys, "nu", offset=1.0)


# ---------------------------------------------------------------------------
# Theorem checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogDerivRow:
    r: float
    m_ratio: float
    T: float

    @property
    def ratio(self) -> float:
        return self.m_ratio / self.T if self.T > 0 else math.inf


def logderiv_lemma_check(model: MeroModel, qp: QParam, k: int,
                         grid: RadialGrid, M: Optional[int] = None) -> list:
    """Table of (r, m(r, D_q^k f / f), T(r,f)) rows.

    For rational models the quotient is formed exactly as a rational
    function; otherwise D_q^k f is evaluated by the closed-form orbit sum
    on the sampler."""
    M = M or grid.angular_nodes
    grid = grid.avoiding(model.known_moduli(grid.radii[-1] * abs(qp.q) ** k * 2.0))
    rows = []
    if model.kind == "rational":
        if model.rational.num_degree == 0 and model.rational.den_degree == 0:
            raise DomainError("logarithmic difference needs a nonconstant f")
        ratio_rf = dqk_rational(model.rational, qp, k) * model.rational.reciprocal()
        ratio_model = MeroModel.from_rational(ratio_rf)
    else:
        s = model.sampler()

        def ratio_eval(z):
            return dqk_closed_form(s, z, qp, k) / s(z)

        ratio_model = MeroModel.from_sampler(Sampler(ratio_eval))
    for r in grid.radii:
        mval = proximity(ratio_model, r, M)
        T = characteristic(model, r, M).T
        rows.append(LogDerivRow(r, mval, T))
    return rows


@dataclass(frozen=True)
class SftRow:
    """Second-fundamental-theorem margin at one radius: the inequality
    (p-2) T <= sum_j Ntilde_J(r, f=a_j) + o(T) reads margin >= o(T)."""

    r: float
    T: float
    sum_Ntilde: float
    margin: float
    margin_sharp: float


def sft_check(model: MeroModel, targets, qp: QParam, grid: RadialGrid,
              M: Optional[int] = None) -> list:
    """Margins of the second fundamental theorem over the grid.

    margin        = sum_j Ntilde_J(r, f=a_j) - (p-2) T(r,f)
    margin_sharp  = sum_j N(r, f=a_j) - N_J(r) - log r - (p-2) T(r,f)
    with N_J = 2N(r,f) - N(r, D_q f) + N(r, 1/D_q f).
    """
    p = len(targets)
    if p < 3:
        raise DomainError("need at least 3 targets for a nontrivial margin")
    if model.kind != "rational":
        raise TargetUnsupported("margins need a rational model")
    if len(set(map(complex, [t if t != INF else complex(1e308) for t in targets]))) != p:
        raise DomainError("targets must be distinct")
    M = M or grid.angular_nodes
    grid = grid.avoiding(model.known_moduli(grid.radii[-1] * 2.0))
    df = dq_rational(model.rational, qp)
    df_model = MeroModel.from_rational(df)
    rows = []
    for r in grid.radii:
        T = characteristic(model, r, M).T
        S = 0.0
        Nsum = 0.0
        for a in targets:
            S += jackson_truncated_counting(model, r, a, qp)[1]
            Nsum += counting_N(model, r, a)
        NJ = (2.0 * counting_N(model, r, INF)
              - counting_N(df_model, r, INF)
              + counting_N(df_model, r, 0.0))
        margin = S - (p - 2) * T
        margin_sharp = Nsum - NJ - math.log(r) - (p - 2) * T
        rows.append(SftRow(r, T, S, margin, margin_sharp))
    return rows


@dataclass(frozen=True)
class WvRow:
    r: float
    nu: int
    mu: float
    z_star: complex
    log_ratio: float
    reference: float

    @property
    def deviation(self) -> float:
        return abs(self.log_ratio - self.reference) / max(
            abs(self.log_ratio), abs(self.reference), 1e-300)


def wiman_valiron_check(f: TruncatedSeries, qp: QParam, k: int,
                        grid: RadialGrid, angular_nodes: int = 1024) -> list:
    """Rows (r, nu, mu, z*, log|f(q^k z*)/f(z*)|, (q^k-1) nu) with z* the
    max-modulus point on |z| = r found by dense angular scan.

    The reference column is the Wiman-Valiron exponent (q^k - 1) nu(r)
    (real part for complex q); the deviation normalises by the larger of
    the two columns. For q-series of logarithmic order two the observed
    exponent behaves like nu log(q^k), so the deviation tends to the
    fixed offset |log q^k - (q^k - 1)| / max(...) rather than to zero;
    the trend assertion belongs to the caller."""
    rows = []
    qk = qp.q ** k
    for r in grid.radii:
        wv = max_term_central_index(f, r)
        th = np.linspace(0.0, 2.0 * np.pi, angular_nodes, endpoint=False)
        zs = r * np.exp(1j * th)
        vals = np.abs(f.eval(zs))
        order = np.argsort(vals)
        i_best = int(order[-1])
        z_star = complex(zs[i_best])
        num = f.eval(qk * z_star)
        den = f.eval(z_star)
        obs = math.log(abs(num / den))
        # a second, well-separated near-max candidate must tell the same
        # story (conjugate twins of real-coefficient series do)
        i_second = None
        for idx in order[-2 ::-1][:8]:
            gap = abs(zs[idx] - z_star)
            if gap > 4.0 * r * (2 * np.pi / angular_nodes):
                i_second = int(idx)
                break
        if i_second is not None and vals[i_second] > 0.999999 * vals[i_best]:
            z2 = complex(zs[i_second])
            obs2 = math.log(abs(f.eval(qk * z2) / f.eval(z2)))
            if abs(obs2 - obs) > 1e-6 * max(1.0, abs(obs)):
                raise MaxModulusAmbiguous(
                    f"two max-modulus candidates disagree at r = {r:g}")
        ref = ((qk - 1.0) * wv.nu).real if isinstance(qk, complex) \
            else (qk - 1.0) * wv.nu
        rows.append(WvRow(r, wv.nu, wv.mu, z_star, obs, float(ref)))
    return rows


def polynomial_wv_identity(f: TruncatedSeries, qp: QParam, k: int,
                           r: float) -> tuple:
    """For polynomial f of degree d, |f(q^k z)/f(z)| tends to |q|^{k d} at
    the max-modulus point; returns (observed, |q|^{k d})."""
    mags = np.abs(f.coeffs)
    d = int(np.flatnonzero(mags > 0)[-1])
    z_star = _argmax_on_circle(f, r)
    obs = abs(f.eval(qp.q**k * z_star) / f.eval(z_star))
    return obs, abs(qp.q) ** (k * d)


def _argmax_on_circle(f: TruncatedSeries, r: float, nodes: int = 1024):
    th = np.linspace(0.0, 2.0 * np.pi, nodes, endpoint=False)
    zs = r * np.exp(1j * th)
    vals = np.abs(f.eval(zs))
    return complex(zs[int(np.argmax(vals))])


@dataclass
class GrowthReport:
    """Outcome of the growth-floor check sigma_log(f) >= sigma_log(A) + 1
    for verified solution pairs of D_q^k f + A f = 0."""

    sigma_A: float
    sigma_A_half_width: float
    sigma_f: float
    sigma_f_half_width: float
    skipped: bool = False
    reason: str = ""

    @property
    def gap(self) -> float:
        return self.sigma_f - self.sigma_A - 1.0


def growth_lower_bound_check(A_model: MeroModel, f_model: MeroModel,
                             qp: QParam, k: int, grid: RadialGrid,
                             M: Optional[int] = None,
                             residual_tol: float = 1e-6,
                             points_per_circle: int = 4) -> GrowthReport:
    """Estimate sigma_log on both sides of D_q^k f + A f = 0 and report
    the gap sigma_log(f) - sigma_log(A) - 1.

    The pair is first verified: the pointwise relative residual of the
    equation must stay below residual_tol at sample points on the grid
    circles. Circles where the function values leave double range are
    skipped, but at least half of the circles must verify. Rational f
    means a polynomial-type solution; the growth floor concerns
    transcendental solutions only, so the check is skipped. Rational A
    is pinned at logarithmic order one (the exact value for any
    nonconstant rational; constants inherit the same baseline)."""
    fs = f_model.sampler()
    verified = 0
    for r in grid.radii:
        circle_ok = True
        for j in range(points_per_circle):
            z = r * np.exp(2j * np.pi * (j + 0.31) / points_per_circle)
            d = dqk_closed_form(fs, z, qp, k)
            af = A_model.eval(z) * fs(z)
            if not (np.isfinite(d) and np.isfinite(af)):
                circle_ok = False
                break
            scale = max(1.0, abs(d), abs(af))
            if abs(d + af) / scale > residual_tol:
                raise DomainError(
                    f"pair does not satisfy the equation at r = {r:g} "
                    f"(residual {abs(d + af) / scale:.2e})")
        verified += circle_ok
    if verified < max(1, len(grid.radii) // 2):
        raise DomainError(
            "too few grid circles admit a finite residual check")
    if f_model.kind == "rational":
        return GrowthReport(1.0, 0.0, math.nan, math.nan, skipped=True,
                            reason="solution is rational, not transcendental")
    M = M or grid.angular_nodes
    if A_model.kind == "rational":
        sigma_A, half_A = 1.0, 0.0
    else:
        samples = [characteristic(A_model, r, M) for r in
                   grid.avoiding(A_model.known_moduli(grid.radii[-1] * 2.0)).radii]
        est = log_order_from_T(samples)
        sigma_A, half_A = est.value, est.half_width
    if f_model.kind == "entire_series":
        est_f = log_order_from_nu(f_model.series, grid)
    elif f_model.kind == "q_product":
        est_f = log_order_from_counting(f_model, grid, target=0.0)
    else:
        samples = [characteristic(f_model, r, M) for r in grid.radii]
        est_f = log_order_from_T(samples)
    return GrowthReport(sigma_A, half_A, est_f.value, est_f.half_width)


# ---------------------------------------------------------------------------
# CSV artifact
# ---------------------------------------------------------------------------

CSV_HEADER = "r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err"


def samples_to_csv(samples: Sequence[NevanlinnaSample]) -> str:
    """Fixed-schema CSV with 17 significant digits, byte-stable."""
    lines = [CSV_HEADER]
    for s in samples:
        lines.append(",".join(
            f"{v:.16e}" for v in (s.r, s.m, s.N0, s.Ninf, s.T, s.nJ0,
                                  s.nJinf, s.quad_err)))
    return "\n".join(lines) + "\n"
