"""q-special functions in series and product form.

Series forms (coefficients of z^n):

    exp_q      1/[n]_q!                 solves D_q f = f
    etilde_q   1/(q;q)_n                solves D_q f + f/(q-1) = 0
    big_e_q    q^{n(n-1)/2}/(q;q)_n     satisfies etilde_q(z) big_e_q(-z) = 1

and the basic hypergeometric series

    phi_rs: sum_j  prod(alpha_i;q)_j / prod(beta_i;q)_j
                   * [(-1)^j q^{j(j-1)/2}]^{1+s-r} * z^j / (q;q)_j.

Product forms carry exact zero lattices, which downstream counting
functions use verbatim:

    etilde_q(z) = prod_{n>=1} (1 - q^{-n} z)   (|q| > 1, zeros at q^n)
    big_e_q(z)  = prod_{n>=0} (1 + q^n z)      (|q| < 1, zeros at -q^{-n})

All coefficient ladders are built multiplicatively; for |q| > 1 the
denominators (q;q)_n blow up superexponentially and coefficients saturate
to exact zero past the double-precision floor, which is harmless for
evaluation inside the certified radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DenominatorPochhammerZero, RegimeMismatch
from .qcore import QParam, TruncatedSeries, q_bracket
from .qoperator import Sampler


@dataclass(frozen=True)
class PhiParams:
    """Parameters of the basic hypergeometric series _r phi_s.

    Construction checks that no lower parameter beta_j equals q^{-m} for
    0 <= m <= guard_order, which would zero a denominator Pochhammer.
    """

    alphas: tuple
    betas: tuple
    qp: QParam
    guard_order: int = 64

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(complex(b) for b in self.betas))
        q = self.qp.q
        qm = 1.0 + 0.0j
        for m in range(self.guard_order + 1):
            for b in self.betas:
                if abs(b * qm - 1.0) < 1e-12:
                    raise DenominatorPochhammerZero(
                        f"beta = {b} equals q^-{m}; series undefined")
            qm *= q

    @property
    def r(self) -> int:
        return len(self.alphas)

    @property
    def s(self) -> int:
        return len(self.betas)


def phi_rs(params: PhiParams, N: int, z: Optional[complex] = None):
    """Basic hypergeometric series to order N; evaluated at z if given.

    Term ladder: t_0 = 1 and

        t_{j+1}/t_j = prod_i (1 - alpha_i q^j) / prod_i (1 - beta_i q^j)
                      * [(-1) q^j]^{1+s-r} / (1 - q^{j+1}).
    """
    qp = params.qp
    q = qp.q
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    t = 1.0 + 0.0j
    qj = 1.0 + 0.0j  # q^j
    expo = 1 + params.s - params.r
    for j in range(N + 1):
        coeffs[j] = t
        for a in params.alphas:
            t *= 1.0 - a * qj
        for b in params.betas:
            t /= 1.0 - b * qj
        if expo:
            t *= (-qj) ** expo
        t /= 1.0 - qj * q
        qj *= q
        if not (math.isfinite(t.real) and math.isfinite(t.imag)):
            t = 0.0 + 0.0j
    series = TruncatedSeries(coeffs)
    if z is None:
        return series
    return series.eval(z)


def exp_q(qp: QParam, N: int) -> TruncatedSeries:
    """q-exponential e_q^z = sum z^n/[n]_q!; the solution of D_q f = f
    with f(0) = 1. Identity: e_q^z = etilde_q((1-q) z)."""
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    c = 1.0 + 0.0j
    coeffs[0] = c
    for n in range(1, N + 1):
        br = q_bracket(n, qp)
        c = c / br if (math.isfinite(br.real) and abs(br) > 0) else 0.0
        coeffs[n] = c
    return TruncatedSeries(coeffs)


def etilde_q(qp: QParam, N: int) -> TruncatedSeries:
    """Series sum z^n/(q;q)_n; solves D_q f + f/(q-1) = 0."""
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    c = 1.0 + 0.0j
    coeffs[0] = c
    qn = 1.0 + 0.0j
    for n in range(1, N + 1):
        qn *= qp.q
        c = c / (1.0 - qn)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            c = 0.0 + 0.0j
        coeffs[n] = c
    return TruncatedSeries(coeffs)


def big_e_q(qp: QParam, N: int) -> TruncatedSeries:
    """Series sum q^{n(n-1)/2} z^n/(q;q)_n, the reciprocal partner of
    etilde_q: etilde_q(z) * big_e_q(-z) = 1."""
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    c = 1.0 + 0.0j
    coeffs[0] = c
    qn = 1.0 + 0.0j  # q^n
    qnm1 = 1.0 + 0.0j  # q^{n-1}
    for n in range(1, N + 1):
        qn *= qp.q
        c = c * qnm1 / (1.0 - qn)
        qnm1 *= qp.q
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            c = 0.0 + 0.0j
        coeffs[n] = c
    return TruncatedSeries(coeffs)


def sinq_cosq(qp: QParam, N: int):
    """q-sine and q-cosine built from exp_q via z -> +-iz:

        cos_q = (e_q^{iz} + e_q^{-iz})/2,   sin_q = (e_q^{iz} - e_q^{-iz})/(2i).

    They solve D_q^2 f + f = 0 with D_q sin_q = cos_q and
    D_q cos_q = -sin_q; sin_q keeps only odd powers, cos_q only even.
    """
    e = exp_q(qp, N)
    ei = e.scale_arg(1j)
    emi = e.scale_arg(-1j)
    sin_q = (ei - emi) * (1.0 / 2j)
    cos_q = (ei + emi) * 0.5
    return sin_q, cos_q


# ---------------------------------------------------------------------------
# Product forms with exact zero lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtildeProduct:
    """etilde_q as the entire product prod_{n>=1}(1 - q^{-n} z), |q| > 1.

    Zeros sit exactly on the geometric lattice {q^n : n >= 1}, all simple.
    """

    qp: QParam
    tol: float = 1e-14

    def __post_init__(self):
        if abs(self.qp.q) <= 1.0:
            raise RegimeMismatch("etilde product form requires |q| > 1")

    def eval(self, z: complex) -> complex:
        q = self.qp.q
        out = 1.0 + 0.0j
        w = z / q
        cutoff = self.tol * (1.0 - 1.0 / abs(q))
        while abs(w) >= cutoff:
            out *= 1.0 - w
            w /= q
        return out

    def log_eval(self, z: complex) -> complex:
        """Principal-branch sum of logs; real part is log|f|."""
        q = self.qp.q
        out = 0.0 + 0.0j
        w = z / q
        cutoff = self.tol * (1.0 - 1.0 / abs(q))
        while abs(w) >= cutoff:
            out += np.log(1.0 - w)
            w /= q
        return complex(out)

    def zeros_up_to(self, radius: float):
        """All lattice zeros with modulus <= radius, as (location, mult)."""
        q = self.qp.q
        out = []
        zn = q
        while abs(zn) <= radius:
            out.append((complex(zn), 1))
            zn *= q
        return out

    def sampler(self) -> Sampler:
        return Sampler(self.eval)


@dataclass(frozen=True)
class BigEProduct:
    """big_e_q as the entire product prod_{n>=0}(1 + q^n z), |q| < 1.

    Zeros sit exactly on {-q^{-n} : n >= 0}, all simple; satisfies
    D_q f + f/((q-1)(z+1)) = 0.
    """

    qp: QParam
    tol: float = 1e-14

    def __post_init__(self):
        if abs(self.qp.q) >= 1.0:
            raise RegimeMismatch("big-E product form requires |q| < 1")

    def eval(self, z: complex) -> complex:
        q = self.qp.q
        out = 1.0 + 0.0j
        w = complex(z)
        cutoff = self.tol * (1.0 - abs(q))
        while abs(w) >= cutoff:
            out *= 1.0 + w
            w *= q
        return out

    def log_eval(self, z: complex) -> complex:
        q = self.qp.q
        out = 0.0 + 0.0j
        w = complex(z)
        cutoff = self.tol * (1.0 - abs(q))
        while abs(w) >= cutoff:
            out += np.log(1.0 + w)
            w *= q
        return complex(out)

    def zeros_up_to(self, radius: float):
        q = self.qp.q
        out = []
        zn = -1.0 + 0.0j
        while abs(zn) <= radius:
            out.append((complex(zn), 1))
            zn /= q
        return out

    def sampler(self) -> Sampler:
        return Sampler(self.eval)


def etilde_product(z: complex, qp: QParam, tol: float = 1e-14) -> complex:
    """Pointwise etilde_q(z) by its infinite product (|q| > 1)."""
    return EtildeProduct(qp, tol).eval(z)


def big_e_product(z: complex, qp: QParam, tol: float = 1e-14) -> complex:
    """Pointwise big_e_q(z) by its infinite product (|q| < 1)."""
    return BigEProduct(qp, tol).eval(z)
