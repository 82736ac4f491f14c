"""Series solver and residual verifier for linear Jackson q-difference
equations

    D_q^k f + A(z) f = B(z)

with rational coefficients analytic at the origin. Matching coefficients
of z^n turns the equation into the explicit recurrence

    c_{n+k} * prod_{j=1..k} [n+j]_q = b_n - sum_m a_m c_{n-m},

where a, b are the origin expansions of A, B; the first k coefficients
are free initial data.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BracketUnderflow,
    CoefficientPoleAtOrigin,
    ConditioningWarning,
    DomainError,
    FormalRegimeWarning,
    OutsideDomain,
    RegimeMismatch,
)
from .polyroots import (
    poly_deflate,
    poly_eval,
    poly_mul,
    poly_trim,
    roots_with_multiplicity,
)
from .qcore import QParam, TruncatedSeries, q_bracket
from .qoperator import Sampler, dqk_closed_form

_COPRIME_CLUSTER_TOL = 1e-8
_CONDITION_WARN = 1e-3


class RationalFunction:
    """Ratio of two complex polynomials, kept coprime by cancelling root
    clusters that the numerator and denominator share (within the
    root-clustering tolerance). Zero and pole lists with multiplicities
    are computed once and cached.
    """

    def __init__(self, num, den=(1.0,), cancel: bool = True):
        num = poly_trim(num)
        den = poly_trim(den)
        if np.all(np.abs(den) == 0.0):
            raise DomainError("denominator is identically zero")
        if cancel and num.size > 1 and den.size > 1 and np.any(np.abs(num) > 0):
            num, den = _cancel_common(num, den)
        self.num = num
        self.den = den
        self._zeros = None
        self._poles = None

    @classmethod
    def from_roots(cls, zeros: Sequence[complex], poles: Sequence[complex],
                   lead: complex = 1.0) -> "RationalFunction":
        """Build from explicit zero/pole lists; the lists are attached
        exactly, bypassing the root finder."""
        from .polyroots import poly_from_roots

        obj = cls(poly_from_roots(zeros, lead), poly_from_roots(poles),
                  cancel=False)
        obj._zeros = _group(zeros)
        obj._poles = _group(poles)
        return obj

    @property
    def num_degree(self) -> int:
        return self.num.size - 1

    @property
    def den_degree(self) -> int:
        return self.den.size - 1

    @property
    def is_zero(self) -> bool:
        return bool(np.all(np.abs(self.num) == 0.0))

    @property
    def is_polynomial(self) -> bool:
        return self.den_degree == 0

    def eval(self, z):
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def __call__(self, z):
        return self.eval(z)

    def zeros(self):
        if self._zeros is None:
            self._zeros = roots_with_multiplicity(self.num) if self.num_degree else []
        return self._zeros

    def poles(self):
        if self._poles is None:
            self._poles = roots_with_multiplicity(self.den) if self.den_degree else []
        return self._poles

    def origin_order(self) -> tuple[int, int]:
        """(ord_0 num, ord_0 den): indices of the first nonzero coefficients."""
        on = int(np.flatnonzero(np.abs(self.num) > 0)[0]) if not self.is_zero else 0
        od = int(np.flatnonzero(np.abs(self.den) > 0)[0])
        return on, od

    def origin_leading(self) -> tuple[int, complex]:
        """Leading origin exponent lam and coefficient c_lam of the local
        expansion f = c_lam z^lam (1 + O(z))."""
        if self.is_zero:
            raise DomainError("zero function has no leading coefficient")
        on, od = self.origin_order()
        return on - od, complex(self.num[on] / self.den[od])

    def origin_series(self, order: int) -> TruncatedSeries:
        """Taylor expansion at the origin; requires den(0) != 0."""
        if abs(self.den[0]) == 0.0:
            raise CoefficientPoleAtOrigin("denominator vanishes at z = 0")
        nums = TruncatedSeries.from_polynomial(self.num, order=order)
        dens = TruncatedSeries.from_polynomial(self.den, order=order)
        return nums.divide(dens)

    # -- rational arithmetic used by counting and operator routines ---------

    def subtract_const(self, a: complex) -> "RationalFunction":
        n = max(self.num.size, self.den.size)
        num = np.zeros(n, dtype=np.complex128)
        num[: self.num.size] += self.num
        num[: self.den.size] -= a * self.den
        return RationalFunction(num, self.den.copy(), cancel=True)

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            raise DomainError("reciprocal of the zero function")
        out = RationalFunction.__new__(RationalFunction)
        out.num = self.den.copy()
        out.den = self.num.copy()
        out._zeros = self._poles
        out._poles = self._zeros
        return out

    def scale_arg(self, c: complex) -> "RationalFunction":
        """z -> f(c z)."""
        powers_n = c ** np.arange(self.num.size)
        powers_d = c ** np.arange(self.den.size)
        return RationalFunction(self.num * powers_n, self.den * powers_d,
                                cancel=False)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return RationalFunction(poly_mul(self.num, other.num),
                                    poly_mul(self.den, other.den))
        return RationalFunction(self.num * complex(other), self.den.copy(),
                                cancel=False)

    __rmul__ = __mul__

    def __repr__(self):
        return (f"RationalFunction(deg_num={self.num_degree}, "
                f"deg_den={self.den_degree})")


def _group(points):
    out = []
    for p in points:
        for i, (loc, m) in enumerate(out):
            if abs(p - loc) <= 1e-12 * max(1.0, abs(loc)):
                out[i] = (loc, m + 1)
                break
        else:
            out.append((complex(p), 1))
    out.sort(key=lambda t: (abs(t[0]), t[0].real, t[0].imag))
    return out


def _cancel_common(num: np.ndarray, den: np.ndarray):
    zn = roots_with_multiplicity(num, cluster_tol=_COPRIME_CLUSTER_TOL)
    zd = roots_with_multiplicity(den, cluster_tol=_COPRIME_CLUSTER_TOL)
    scale = max([1.0] + [abs(z) for z, _ in zn + zd])
    for zloc, zm in zn:
        for i, (ploc, pm) in enumerate(zd):
            if abs(zloc - ploc) <= _COPRIME_CLUSTER_TOL * scale:
                shared = min(zm, pm)
                root = 0.5 * (zloc + ploc)
                if abs(root) < _COPRIME_CLUSTER_TOL * scale:
                    root = 0.0
                for _ in range(shared):
                    num = poly_deflate(num, root)
                    den = poly_deflate(den, root)
                zd[i] = (ploc, pm - shared)
                break
    return poly_trim(num), poly_trim(den)


def dq_rational(f: RationalFunction, qp: QParam) -> RationalFunction:
    """D_q of a rational function, as a rational function:

        D_q (P/Q) = [P(qz) Q(z) - P(z) Q(qz)] / ((q-1) z Q(z) Q(qz)).

    The numerator always vanishes at z = 0; that factor is removed
    exactly so the origin stays regular when P/Q is.
    """
    q = qp.q
    pn_q = f.num * q ** np.arange(f.num.size)
    qd_q = f.den * q ** np.arange(f.den.size)
    top = poly_mul(pn_q, f.den) - poly_mul(f.num, qd_q)
    top = np.asarray(top, dtype=np.complex128)
    # exact z factor: the constant term cancels identically
    top[0] = 0.0
    top = top[1:] if top.size > 1 else np.zeros(1, dtype=np.complex128)
    bottom = (q - 1.0) * poly_mul(f.den, qd_q)
    return RationalFunction(top, bottom)


def dqk_rational(f: RationalFunction, qp: QParam, k: int) -> RationalFunction:
    out = f
    for _ in range(k):
        out = dq_rational(out, qp)
    return out


@dataclass(frozen=True)
class QdeProblem:
    """The equation D_q^k f + A f = B with k initial coefficients."""

    k: int
    A: RationalFunction
    B: RationalFunction
    qp: QParam
    initial: tuple = field(default=(1.0,))

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("order k must be >= 1")
        object.__setattr__(self, "initial",
                           tuple(complex(c) for c in self.initial))
        if len(self.initial) != self.k:
            raise DomainError(
                f"need exactly k = {self.k} initial coefficients")
        for name, rf in (("A", self.A), ("B", self.B)):
            if abs(rf.den[0]) == 0.0:
                raise CoefficientPoleAtOrigin(
                    f"coefficient {name} has a pole at the origin")

    @classmethod
    def homogeneous(cls, k: int, A: RationalFunction, qp: QParam,
                    initial) -> "QdeProblem":
        return cls(k, A, RationalFunction([0.0]), qp, tuple(initial))


def solve_series(prob: QdeProblem, N: int) -> TruncatedSeries:
    """Solve for the series coefficients up to order N by the recurrence.

    Emits ConditioningWarning when a bracket product is tiny (noise
    amplification near a root of unity) and FormalRegimeWarning when
    |q| < 1 with polynomial A, where the series may have a finite radius
    of convergence and so is formal as an entire-function candidate.
    """
    if N < prob.k:
        raise DomainError("truncation order must be at least k")
    qp, k = prob.qp, prob.k
    if abs(qp.q) < 1.0 and prob.A.is_polynomial and not prob.A.is_zero:
        warnings.warn(
            "polynomial coefficient with |q| < 1: series solution may have "
            "finite radius (formal, not entire)", FormalRegimeWarning,
            stacklevel=2)
    a = prob.A.origin_series(N + k + 5).coeffs
    b = prob.B.origin_series(N + k + 5).coeffs
    c = np.zeros(N + 1, dtype=np.complex128)
    c[:k] = prob.initial
    brackets = [q_bracket(m, qp) for m in range(N + 1)]
    for n in range(0, N - k + 1):
        denom = 1.0 + 0.0j
        for j in range(1, k + 1):
            denom *= brackets[n + j]
        if abs(denom) < qp.guard_tol:
            raise BracketUnderflow(
                f"bracket product at order {n + k} below guard")
        if abs(denom) < _CONDITION_WARN:
            warnings.warn(
                f"bracket product {abs(denom):.2e} at order {n + k}; "
                "coefficient poorly conditioned", ConditioningWarning,
                stacklevel=2)
        conv = np.dot(a[: n + 1], c[n::-1])
        c[n + k] = (b[n] - conv) / denom
    return TruncatedSeries(c)


def residual(prob: QdeProblem, f: TruncatedSeries):
    """Series of D_q^k f + A f - B to order N - k, and its max coefficient
    modulus."""
    from .qoperator import dqk_series

    if f.order < prob.k:
        raise DomainError("series too short for the operator order")
    out_order = f.order - prob.k
    lhs = dqk_series(f, prob.qp, prob.k)
    a = prob.A.origin_series(f.order)
    b = prob.B.origin_series(out_order)
    res = lhs + (a * f).truncated(out_order) - b
    return res, float(np.max(np.abs(res.coeffs)))


def verify_pointwise(prob: QdeProblem, f: Sampler, points) -> list:
    """Relative residual |D_q^k f + A f - B| / scale at each point, where
    scale is the largest magnitude among the three terms (floored at 1).

    Points must avoid the origin and the poles of A and B."""
    out = []
    for z in points:
        z = complex(z)
        if z == 0:
            raise OutsideDomain("pointwise residual undefined at the origin")
        for rf in (prob.A, prob.B):
            if abs(poly_eval(rf.den, z)) < 1e-12 * max(
                    1.0, float(np.max(np.abs(rf.den)))) * max(1.0, abs(z)) ** rf.den_degree:
                raise OutsideDomain(f"point {z} is numerically at a pole")
        d = dqk_closed_form(f, z, prob.qp, prob.k)
        af = prob.A.eval(z) * f(z)
        bv = prob.B.eval(z)
        scale = max(1.0, abs(d), abs(af), abs(bv))
        out.append(abs(d + af - bv) / scale)
    return out


@dataclass(frozen=True)
class DegreeCondition:
    """Outcome of the polynomial-admissibility test for D_q^k f + A f = 0:
    a polynomial solution forces deg(den) - deg(num) = k exactly."""

    deg_num: int
    deg_den: int
    k: int

    @property
    def polynomial_admissible(self) -> bool:
        return self.deg_den - self.deg_num == self.k

    @property
    def classification(self) -> str:
        return ("polynomial solutions admissible"
                if self.polynomial_admissible
                else "any nonzero solution must be transcendental")


def polynomial_degree_condition(prob: QdeProblem) -> DegreeCondition:
    if not prob.B.is_zero:
        raise DomainError("degree condition applies to homogeneous problems")
    return DegreeCondition(prob.A.num_degree, prob.A.den_degree, prob.k)


def product_solution(P, qp: QParam, z: complex, tol: float = 1e-12,
                     f0: complex = 1.0) -> complex:
    """Entire solution of D_q f = P(z) f(qz) for |q| < 1 and polynomial P:

        f(z) = f(0) prod_{j>=0} (1 + (1-q) q^j z P(q^j z)).

    For constant P = a this is f(0) exp_{1/q}(a z). The product truncates
    once the factor offset falls below tol * (1 - |q|).
    """
    if abs(qp.q) >= 1.0:
        raise RegimeMismatch("product solution requires |q| < 1")
    Parr = np.asarray(P, dtype=np.complex128)
    q = qp.q
    out = complex(f0)
    qj = 1.0 + 0.0j
    cutoff = tol * (1.0 - abs(q))
    for _ in range(100000):
        w = qj * z
        offset = (1.0 - q) * w * poly_eval(Parr, w)
        out *= 1.0 + offset
        qj *= q
        if abs(offset) < cutoff:
            break
    return out


def solve_shifted_series(k: int, A: RationalFunction, qp: QParam,
                         initial, N: int) -> TruncatedSeries:
    """Series solution of the argument-shifted homogeneous equation

        D_q^k f(z) + A(z) f(q^k z) = 0.

    Coefficient matching gives
        c_{n+k} prod_{j=1..k} [n+j]_q = - sum_m a_m q^{k (n-m)} c_{n-m}.
    """
    if k < 1:
        raise DomainError("order k must be >= 1")
    if abs(A.den[0]) == 0.0:
        raise CoefficientPoleAtOrigin("coefficient has a pole at the origin")
    initial = tuple(complex(c) for c in initial)
    if len(initial) != k:
        raise DomainError(f"need exactly k = {k} initial coefficients")
    a = A.origin_series(N + k + 5).coeffs
    c = np.zeros(N + 1, dtype=np.complex128)
    c[:k] = initial
    qk = qp.q**k
    for n in range(0, N - k + 1):
        denom = 1.0 + 0.0j
        for j in range(1, k + 1):
            denom *= q_bracket(n + j, qp)
        if abs(denom) < qp.guard_tol:
            raise BracketUnderflow(
                f"bracket product at order {n + k} below guard")
        acc = 0.0 + 0.0j
        for m in range(n + 1):
            acc += a[m] * qk ** (n - m) * c[n - m]
        c[n + k] = -acc / denom
    return TruncatedSeries(c)


def shifted_to_plain(k: int, A: RationalFunction, qp: QParam):
    """Rewrite D_q^k f(z) + A(z) f(q^k z) = 0 in plain form.

    The base-inversion identity, checked on monomials, is

        (D_{1/q}^k f)(q^k z) = q^{-k(k-1)/2} D_q^k f(z),

    so with w = q^k z the same f satisfies

        D_{1/q}^k f(w) + q^{-k(k-1)/2} A(q^{-k} w) f(w) = 0.

    Returns the (QParam, RationalFunction) pair for the plain solver.
    """
    qp_inv = qp.inverse()
    factor = qp.q ** (-(k * (k - 1)) // 2) if k > 1 else 1.0
    A_new = factor * A.scale_arg(qp.q ** (-k))
    return qp_inv, A_new
