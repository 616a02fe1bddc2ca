"""Symbolic reduction of I(k) = p K + q E + r Pi to an M K + N E numerator.

Eliminating the third-kind integral through the gauge substitution
Z(k) = X(k) Pi(mu(k), k) turns the derivative of I(k) X(k) / r(k) into a
combination of K and E with polynomial coefficients M1, N1 (M2, N2 for the
fixed rational parameter mu = 2 k^2/(1+k^2)).  The module computes those
numerators exactly, enforces the degree caps, evaluates the piecewise
zero-count bounds psi, and constructs coefficient vectors that force I(k) to
vanish at prescribed interpolation points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import numpy as np

from . import elliptic
from .errors import DomainError, VerificationError
from .picard_fuchs import MuLike, as_mu
from .polyalg import Poly, RatFunc

_K = Poly.x()

MU_RATIONAL_SPECIAL = RatFunc(Poly([0, 0, 2]), Poly([1, 0, 1]))


class ReductionCase(str, Enum):
    POLY_S_GE_2 = "poly_s_ge_2"
    POLY_S_EQ_1 = "poly_s_eq_1"
    CONSTANT_MU = "constant_mu"
    RATIONAL_SPECIAL = "rational_special"


@dataclass(frozen=True)
class ReductionInput:
    """Coefficient polynomials p, q, r and the parameter function mu."""

    p: Poly
    q: Poly
    r: Poly
    mu: Union[Poly, Fraction, int, RatFunc]
    case: ReductionCase

    def __post_init__(self):
        if self.r.is_zero():
            raise DomainError("reduction requires r not identically zero")
        case = self.case
        if case in (ReductionCase.POLY_S_GE_2, ReductionCase.POLY_S_EQ_1):
            if not isinstance(self.mu, Poly):
                raise DomainError(f"case {case.value} requires a polynomial mu")
            s = self.mu.degree()
            if case is ReductionCase.POLY_S_GE_2 and s < 2:
                raise DomainError("case poly_s_ge_2 requires deg mu >= 2")
            if case is ReductionCase.POLY_S_EQ_1 and s != 1:
                raise DomainError("case poly_s_eq_1 requires deg mu = 1")
        elif case is ReductionCase.CONSTANT_MU:
            mu = self.mu
            if isinstance(mu, Poly):
                if mu.degree() > 0:
                    raise DomainError("case constant_mu requires a constant mu")
                mu = mu[0]
            if not isinstance(mu, (int, Fraction, Rational)):
                raise DomainError("constant mu must be an exact rational")
            if mu <= 0 or mu == 1:
                raise DomainError("constant mu must lie in (0,1) or (1,inf)")
        elif case is ReductionCase.RATIONAL_SPECIAL:
            if isinstance(self.mu, RatFunc) and self.mu != MU_RATIONAL_SPECIAL:
                raise DomainError(
                    "case rational_special is fixed to mu = 2k^2/(1+k^2)"
                )

    @property
    def degrees(self) -> tuple[int, int, int]:
        return self.p.degree(), self.q.degree(), self.r.degree()

    def mu_profile(self):
        if self.case is ReductionCase.RATIONAL_SPECIAL:
            return as_mu(MU_RATIONAL_SPECIAL)
        return as_mu(self.mu)


@dataclass(frozen=True)
class ReducedForm:
    """The K/E numerator polynomials together with the nonvanishing scale."""

    M1: Poly
    N1: Poly
    scale_description: str
    degree_cap_m: int
    degree_cap_n: int
    case: ReductionCase

    def __post_init__(self):
        if self.M1.degree() > self.degree_cap_m:
            raise VerificationError(
                f"deg M = {self.M1.degree()} exceeds cap {self.degree_cap_m}"
            )
        if self.N1.degree() > self.degree_cap_n:
            raise VerificationError(
                f"deg N = {self.N1.degree()} exceeds cap {self.degree_cap_n}"
            )


def psi_bound(m: int, n: int, l: int, s: int) -> int:
    """Piecewise zero-count bound for polynomial mu of degree s."""
    if min(m, n, l, s) < 0:
        raise DomainError("degrees must be nonnegative")
    mx = max(m, n)
    if s >= 2:
        return 2 * mx + 3 * l + 6 * s + 7 if l <= mx + s else 5 * l + 4 * s + 7
    if s == 1:
        return 2 * mx + 3 * l + 15 if l <= mx + 1 else 5 * l + 13
    return 2 * mx + 3 * l + 11 if l <= mx + 2 else mx + 4 * l + 9


def psi_bound_rational(m: int, n: int, l: int) -> int:
    """Zero-count bound for the fixed rational parameter mu = 2k^2/(1+k^2)."""
    if min(m, n, l) < 0:
        raise DomainError("degrees must be nonnegative")
    mx = max(m, n)
    return 2 * mx + 3 * l + 11 if l <= mx + 2 else 5 * l + 7


def _m1_n1_poly_mu(p: Poly, q: Poly, r: Poly, mu: Poly) -> tuple[Poly, Poly]:
    """The four-term numerator formulas for polynomial (or constant-free) mu."""
    k = _K
    mu1 = mu.derivative()
    one_minus_k2 = Poly([1, 0, -1])
    k_minus_k3 = Poly([0, 1, 0, -1])
    k2_minus_mu = Poly([0, 0, 1]) - mu
    mu_minus_mu2 = mu - mu * mu
    half = Fraction(1, 2)
    bracket = k * mu_minus_mu2 + half * (mu * mu - Poly([0, 0, 1])) * mu1
    m1 = (
        k_minus_k3 * k2_minus_mu * mu_minus_mu2 * (p.derivative() * r - p * r.derivative())
        + k_minus_k3 * bracket * p * r
        - one_minus_k2 * k2_minus_mu * mu_minus_mu2 * (p + q) * r
        - half * k_minus_k3 * k2_minus_mu * mu1 * r * r
    )
    n1 = (
        k_minus_k3 * k2_minus_mu * mu_minus_mu2 * (q.derivative() * r - q * r.derivative())
        + k_minus_k3 * bracket * q * r
        + k2_minus_mu * mu_minus_mu2 * (p + one_minus_k2 * q) * r
        + k * mu * (k * (Poly.one() - mu) - half * one_minus_k2 * mu1) * r * r
    )
    return m1, n1


def reduce_poly_mu(inp: ReductionInput) -> ReducedForm:
    """Reduction for polynomial mu of degree s >= 2 (or s = 1 with its caps)."""
    if inp.case not in (ReductionCase.POLY_S_GE_2, ReductionCase.POLY_S_EQ_1):
        raise DomainError("reduce_poly_mu handles the polynomial-mu cases only")
    mu: Poly = inp.mu
    s = mu.degree()
    m, n, l = inp.degrees
    m1, n1 = _m1_n1_poly_mu(inp.p, inp.q, inp.r, mu)
    if s >= 2:
        cap_m = max(n + l + 3 * s + 2, m + l + 3 * s + 2, 2 * l + 2 * s + 2)
        cap_n = max(n + l + 3 * s + 2, m + l + 3 * s, 2 * l + 2 * s + 2)
    else:
        cap_m = max(n + l + 6, m + l + 6, 2 * l + 5)
        cap_n = max(n + l + 6, m + l + 4, 2 * l + 4)
    scale = "X(k) / (k (1-k^2) mu (1-mu) (k^2-mu)); X'(k)/X(k) = k/(k^2-mu) + (mu^2-k^2) mu'/(2 mu (1-mu) (k^2-mu))"
    return ReducedForm(m1, n1, scale, cap_m, cap_n, inp.case)


def reduce_const_mu(inp: ReductionInput) -> ReducedForm:
    """Reduction for constant mu, with gauge X(k) = sqrt(|k^2 - mu|)."""
    if inp.case is not ReductionCase.CONSTANT_MU:
        raise DomainError("reduce_const_mu handles the constant-mu case only")
    mu_c = inp.mu[0] if isinstance(inp.mu, Poly) else Fraction(inp.mu)
    p, q, r = inp.p, inp.q, inp.r
    m, n, l = inp.degrees
    k = _K
    one_minus_k2 = Poly([1, 0, -1])
    k_minus_k3 = Poly([0, 1, 0, -1])
    mu_minus_k2 = Poly([mu_c, 0, -1])
    m1 = (
        k_minus_k3 * mu_minus_k2 * (p.derivative() * r - p * r.derivative())
        - mu_c * one_minus_k2 * p * r
        - one_minus_k2 * mu_minus_k2 * q * r
    )
    # The p r term degenerates from the general four-term formulas at mu' = 0
    # to +(mu - k^2) p r; dividing the general numerator by mu(1-mu) also
    # reduces the r^2 term to -k^2 r^2.
    n1 = (
        k_minus_k3 * mu_minus_k2 * (q.derivative() * r - q * r.derivative())
        + mu_minus_k2 * p * r
        + one_minus_k2 * Poly([mu_c, 0, -2]) * q * r
        - Poly([0, 0, 1]) * r * r
    )
    cap_m = max(n + l + 4, m + l + 4)
    cap_n = max(n + l + 4, m + l + 2, 2 * l + 2)
    scale = f"sqrt(|k^2 - {mu_c}|) / (k (1-k^2) sqrt(|k^2 - {mu_c}|))"
    return ReducedForm(m1, n1, scale, cap_m, cap_n, inp.case)


def reduce_special(inp: ReductionInput) -> ReducedForm:
    """Reduction for mu = 2k^2/(1+k^2), with gauge X(k) = (1-k^2)/sqrt(1+k^2)."""
    if inp.case is not ReductionCase.RATIONAL_SPECIAL:
        raise DomainError("reduce_special handles mu = 2k^2/(1+k^2) only")
    p, q, r = inp.p, inp.q, inp.r
    m, n, l = inp.degrees
    k_minus_k5 = Poly([0, 1, 0, 0, 0, -1])
    k4_plus_3k2 = Poly([0, 0, 3, 0, 1])
    one_minus_k4 = Poly([1, 0, 0, 0, -1])
    one_plus_k2 = Poly([1, 0, 1])
    m2 = (
        k_minus_k5 * (p.derivative() * r - p * r.derivative())
        - k4_plus_3k2 * p * r
        - one_minus_k4 * p * r
        - one_minus_k4 * q * r
        - one_plus_k2 * r * r
    )
    n2 = (
        k_minus_k5 * (q.derivative() * r - q * r.derivative())
        - k4_plus_3k2 * q * r
        + one_plus_k2 * p * r
        + one_minus_k4 * q * r
        + one_plus_k2 * r * r
    )
    cap_m = max(n + l + 4, m + l + 4, 2 * l + 2)
    cap_n = max(n + l + 4, m + l + 2, 2 * l + 2)
    scale = "(1-k^2)/sqrt(1+k^2) scaled by 1/(r^2 k (1+k^2)^(3/2))"
    return ReducedForm(m2, n2, scale, cap_m, cap_n, inp.case)


def reduce(inp: ReductionInput) -> ReducedForm:
    """Dispatch to the case-specific reduction."""
    if inp.case in (ReductionCase.POLY_S_GE_2, ReductionCase.POLY_S_EQ_1):
        return reduce_poly_mu(inp)
    if inp.case is ReductionCase.CONSTANT_MU:
        return reduce_const_mu(inp)
    return reduce_special(inp)


def _i_over_r(inp: ReductionInput, k: float) -> float:
    prof = inp.mu_profile()
    m = prof.value(k)
    val = (
        float(inp.p.eval(k)) * elliptic.complete_k(k)
        + float(inp.q.eval(k)) * elliptic.complete_e(k)
        + float(inp.r.eval(k)) * elliptic.complete_pi(m, k)
    )
    return val / float(inp.r.eval(k))


def identity_residual(inp: ReductionInput, k: float, step: float = 1e-4) -> float:
    """Relative residual of the derivative identity at k.

    The reduced form asserts that d/dk (I X / r) equals
    X (M K + N E) / (r^2 k (1-k^2) mu (1-mu) (k^2-mu)) (polynomial and
    constant mu) or, for mu = 2k^2/(1+k^2),
    d/dk ((1-k^2) I / (r sqrt(1+k^2))) = (M K + N E)/(r^2 k (1+k^2)^(3/2)).
    The gauge X never needs standalone evaluation: dividing through by X
    leaves only its logarithmic derivative, which is in closed form.
    """
    form = reduce(inp)
    prof = inp.mu_profile()
    m = prof.value(k)
    m1 = prof.d1(k)
    K = elliptic.complete_k(k)
    E = elliptic.complete_e(k)
    MK_NE = float(form.M1.eval(k)) * K + float(form.N1.eval(k)) * E
    r2 = float(inp.r.eval(k)) ** 2
    k2 = k * k
    if inp.case is ReductionCase.RATIONAL_SPECIAL:
        def lhs_func(kk):
            return (1 - kk * kk) * _i_over_r(inp, kk) / np.sqrt(1 + kk * kk)

        rhs = MK_NE / (r2 * k * (1 + k2) ** 1.5)
    elif inp.case is ReductionCase.CONSTANT_MU:
        def lhs_func(kk):
            return np.sqrt(abs(kk * kk - m)) * _i_over_r(inp, kk)

        # X/(mu - k^2) = sign(mu - k^2)/sqrt(|k^2 - mu|).
        rhs = np.sign(m - k2) * MK_NE / (r2 * k * (1 - k2) * np.sqrt(abs(k2 - m)))
    else:
        # Divide the identity by X(k): the left side becomes
        # (I/r)' + (I/r) X'/X with X'/X in closed form.
        xlog = k / (k2 - m) + (m * m - k2) * m1 / (2 * m * (1 - m) * (k2 - m))

        def lhs_func(kk):
            return _i_over_r(inp, kk)

        rhs = (
            MK_NE / (r2 * k * (1 - k2) * m * (1 - m) * (k2 - m))
            - _i_over_r(inp, k) * xlog
        )
    lhs = (
        -lhs_func(k + 2 * step)
        + 8 * lhs_func(k + step)
        - 8 * lhs_func(k - step)
        + lhs_func(k - 2 * step)
    ) / (12 * step)
    scale = max(1.0, abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


def interpolate_zeros(
    points: Sequence[float], m: int, n: int, l: int, mu: MuLike
) -> tuple[Poly, Poly, Poly]:
    """Construct (p, q, r) of degrees (m, n, l) with I(k) vanishing at points.

    Solves the (m+n+l+2) x (m+n+l+3) homogeneous linear system whose rows are
    [k_i^j K(k_i) | k_i^j E(k_i) | k_i^j Pi(mu(k_i), k_i)]; the null vector is
    the smallest right singular vector.
    """
    points = [float(x) for x in points]
    expected = m + n + l + 2
    if len(points) != expected:
        raise DomainError(f"need exactly {expected} points, got {len(points)}")
    if len(set(points)) != len(points):
        raise DomainError("interpolation points must be distinct")
    if any(not -1.0 < x < 1.0 for x in points):
        raise DomainError("interpolation points must lie in (-1, 1)")
    prof = as_mu(mu)
    rows = []
    for ki in points:
        K = elliptic.complete_k(ki)
        E = elliptic.complete_e(ki)
        P = elliptic.complete_pi(prof.value(ki), ki)
        rows.append(
            [ki**j * K for j in range(m + 1)]
            + [ki**j * E for j in range(n + 1)]
            + [ki**j * P for j in range(l + 1)]
        )
    a = np.array(rows)
    _, sing, vt = np.linalg.svd(a)
    # Symmetric point sets make rows coincide (K, E, Pi are even in k); the
    # null space is then higher-dimensional and any of its vectors works, so
    # rank deficiency is not an error.  The smallest right singular vector is
    # a deterministic choice.
    null = vt[-1]
    # Deterministic normalization: unit max-norm, first significant entry positive.
    null = null / np.max(np.abs(null))
    lead = next(x for x in null if abs(x) > 1e-12)
    if lead < 0:
        null = -null
    p = Poly.from_strings([Fraction(float(c)).limit_denominator(10**12) for c in null[: m + 1]])
    q = Poly.from_strings(
        [Fraction(float(c)).limit_denominator(10**12) for c in null[m + 1 : m + n + 2]]
    )
    r = Poly.from_strings(
        [Fraction(float(c)).limit_denominator(10**12) for c in null[m + n + 2 :]]
    )
    if p.is_zero() and q.is_zero() and r.is_zero():
        raise VerificationError("null vector collapsed to zero after normalization")
    return p, q, r
