"""Carlson symmetric elliptic integrals and the Legendre forms built on them.

All evaluation is in double precision via the duplication algorithm: the
arguments are repeatedly replaced by their duplicated averages until their
relative spread falls below 1e-8, after which a fifth-order (R_F) or
sixth-order (R_D, R_J) Taylor tail is applied, yielding ~1e-14 relative
accuracy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError

_SPREAD_TOL = 1e-8
_MAX_ITER = 200


class DegenerateParameterWarning(UserWarning):
    """Raised when the third-kind parameter equals k**2 (reducible case)."""


@dataclass(frozen=True)
class EllipticTriple:
    """The value vector (K(k), E(k), Pi(mu, k)) at a modulus k."""

    k: float
    K: float
    E: float
    Pi: float


def carlson_rf(x: float, y: float, z: float) -> float:
    """Symmetric integral of the first kind R_F(x, y, z)."""
    if min(x, y, z) < 0:
        raise DomainError("carlson_rf requires nonnegative arguments")
    if sum(1 for v in (x, y, z) if v == 0) > 1:
        raise DomainError("carlson_rf allows at most one zero argument")
    xt, yt, zt = float(x), float(y), float(z)
    for _ in range(_MAX_ITER):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        xt, yt, zt = 0.25 * (xt + lam), 0.25 * (yt + lam), 0.25 * (zt + lam)
        ave = (xt + yt + zt) / 3.0
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if max(abs(dx), abs(dy), abs(dz)) < _SPREAD_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / math.sqrt(ave)


def carlson_rc(x: float, y: float) -> float:
    """Degenerate symmetric integral R_C(x, y) = R_F(x, y, y), y > 0."""
    if x < 0 or y <= 0:
        raise DomainError("carlson_rc requires x >= 0 and y > 0")
    xt, yt = float(x), float(y)
    for _ in range(_MAX_ITER):
        lam = 2.0 * math.sqrt(xt) * math.sqrt(yt) + yt
        xt, yt = 0.25 * (xt + lam), 0.25 * (yt + lam)
        ave = (xt + 2.0 * yt) / 3.0
        s = (yt - ave) / ave
        if abs(s) < _SPREAD_TOL:
            break
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / math.sqrt(ave)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Symmetric integral of the second kind R_D(x, y, z) = R_J(x, y, z, z)."""
    if min(x, y) < 0 or z <= 0:
        raise DomainError("carlson_rd requires x, y >= 0 and z > 0")
    if x == 0 and y == 0:
        raise DomainError("carlson_rd diverges for x = y = 0")
    xt, yt, zt = float(x), float(y), float(z)
    total = 0.0
    fac = 1.0
    for _ in range(_MAX_ITER):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (zt + lam))
        fac *= 0.25
        xt, yt, zt = 0.25 * (xt + lam), 0.25 * (yt + lam), 0.25 * (zt + lam)
        ave = 0.2 * (xt + yt + 3.0 * zt)
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if max(abs(dx), abs(dy), abs(dz)) < _SPREAD_TOL:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    tail = 1.0 + ed * (-3.0 / 14.0 + (9.0 / 88.0) * ed - (4.5 / 26.0) * dz * ee) + dz * (
        ee / 6.0 + dz * (-(9.0 / 22.0) * ec + dz * (3.0 / 26.0) * ea)
    )
    return 3.0 * total + fac * tail / (ave * math.sqrt(ave))


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """Symmetric integral of the third kind R_J(x, y, z, p), p > 0."""
    if min(x, y, z) < 0:
        raise DomainError("carlson_rj requires nonnegative x, y, z")
    if sum(1 for v in (x, y, z) if v == 0) > 1:
        raise DomainError("carlson_rj allows at most one zero among x, y, z")
    if p <= 0:
        raise DomainError("carlson_rj requires p > 0")
    xt, yt, zt, pt = float(x), float(y), float(z), float(p)
    total = 0.0
    fac = 1.0
    for _ in range(_MAX_ITER):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        alpha = (pt * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = pt * (pt + lam) ** 2
        total += fac * carlson_rc(alpha, beta)
        fac *= 0.25
        xt, yt, zt, pt = (
            0.25 * (xt + lam),
            0.25 * (yt + lam),
            0.25 * (zt + lam),
            0.25 * (pt + lam),
        )
        ave = 0.2 * (xt + yt + zt + 2.0 * pt)
        dx, dy, dz, dp = (
            (ave - xt) / ave,
            (ave - yt) / ave,
            (ave - zt) / ave,
            (ave - pt) / ave,
        )
        if max(abs(dx), abs(dy), abs(dz), abs(dp)) < _SPREAD_TOL:
            break
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    tail = (
        1.0
        + ed * (-3.0 / 14.0 + (9.0 / 88.0) * ed - (4.5 / 26.0) * ee)
        + eb * (1.0 / 6.0 + dp * (-3.0 / 11.0 + dp * 3.0 / 26.0))
        + dp * ea * (1.0 / 3.0 - dp * 3.0 / 22.0)
        - dp * ec / 3.0
    )
    return 3.0 * total + fac * tail / (ave * math.sqrt(ave))


def _check_modulus(k: float) -> float:
    if not -1.0 < k < 1.0:
        raise DomainError(f"modulus must satisfy |k| < 1, got {k}")
    return abs(k)


def complete_k(k: float) -> float:
    """Complete elliptic integral of the first kind K(k)."""
    k = _check_modulus(k)
    return carlson_rf(0.0, 1.0 - k * k, 1.0)


def complete_e(k: float) -> float:
    """Complete elliptic integral of the second kind E(k)."""
    k = _check_modulus(k)
    if k == 0.0:
        return math.pi / 2.0
    return complete_k(k) - (k * k / 3.0) * carlson_rd(0.0, 1.0 - k * k, 1.0)


def complete_pi(mu: float, k: float) -> float:
    """Complete elliptic integral of the third kind Pi(mu, k).

    Requires 0 <= mu < 1.  mu == k**2 is permitted but flagged degenerate
    (the value then reduces to E(k)/(1-k**2)).
    """
    k = _check_modulus(k)
    if mu < 0:
        raise DomainError(f"third-kind parameter must be nonnegative, got {mu}")
    if mu >= 1:
        raise DomainError(f"third-kind parameter must satisfy mu < 1, got {mu}")
    if mu == 0.0:
        return complete_k(k)
    if mu == k * k:
        warnings.warn(
            "third-kind parameter equals k**2; the value reduces to E(k)/(1-k**2)",
            DegenerateParameterWarning,
            stacklevel=2,
        )
    return complete_k(k) + (mu / 3.0) * carlson_rj(0.0, 1.0 - k * k, 1.0, 1.0 - mu)


def elliptic_triple(mu: float, k: float) -> EllipticTriple:
    """The value vector (K, E, Pi(mu, k)) at modulus k."""
    return EllipticTriple(k=k, K=complete_k(k), E=complete_e(k), Pi=complete_pi(mu, k))


def _check_incomplete(z: float, k: float) -> tuple[float, float]:
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"argument must satisfy |z| <= 1, got {z}")
    return float(z), _check_modulus(k)


def incomplete_f(z: float, k: float) -> float:
    """Incomplete elliptic integral of the first kind F(z, k), F(0, k) = 0."""
    z, k = _check_incomplete(z, k)
    if z == 0.0:
        return 0.0
    return z * carlson_rf(1.0 - z * z, 1.0 - k * k * z * z, 1.0)


def incomplete_e(z: float, k: float) -> float:
    """Incomplete elliptic integral of the second kind E(z, k), E(0, k) = 0."""
    z, k = _check_incomplete(z, k)
    if z == 0.0:
        return 0.0
    x, y = 1.0 - z * z, 1.0 - k * k * z * z
    val = z * carlson_rf(x, y, 1.0)
    if k != 0.0:
        val -= (k * k * z**3 / 3.0) * carlson_rd(x, y, 1.0)
    return val


def incomplete_pi(z: float, mu: float, k: float) -> float:
    """Incomplete elliptic integral of the third kind Pi(z; mu, k), 0 at z = 0."""
    z, k = _check_incomplete(z, k)
    if mu < 0:
        raise DomainError(f"third-kind parameter must be nonnegative, got {mu}")
    if mu * z * z >= 1.0:
        raise DomainError("incomplete_pi requires mu*z**2 < 1")
    if z == 0.0:
        return 0.0
    x, y = 1.0 - z * z, 1.0 - k * k * z * z
    val = z * carlson_rf(x, y, 1.0)
    if mu != 0.0:
        val += (mu * z**3 / 3.0) * carlson_rj(x, y, 1.0, 1.0 - mu * z * z)
    return val


def t_n(z: float, k: float, n: int) -> float:
    """Antiderivative T_n(z) of z**(2n)/sqrt((1-z**2)(1-k**2 z**2)), T_n(0) = 0.

    T_0 = F(z, k), T_1 = (F(z, k) - E(z, k))/k**2, and higher n follow the
    three-term recursion
    T_n = z**(2n-3) sqrt((1-z**2)(1-k**2 z**2)) / ((2n-1) k**2)
          + 2(n-1)(k**2+1) T_{n-1} / ((2n-1) k**2)
          - (2n-3) T_{n-2} / ((2n-1) k**2).
    """
    if n < 0:
        raise DomainError("t_n requires n >= 0")
    z, k = _check_incomplete(z, k)
    if n == 0:
        return incomplete_f(z, k)
    if k == 0.0 and n >= 2:
        raise DomainError("t_n recursion requires k != 0 for n >= 2")
    f = incomplete_f(z, k)
    if n == 1:
        if k == 0.0:
            # Limit k -> 0: T_1 = int z^2/sqrt(1-z^2) = (asin z - z sqrt(1-z^2))/2.
            return 0.5 * (math.asin(z) - z * math.sqrt(max(0.0, 1.0 - z * z)))
        return (f - incomplete_e(z, k)) / (k * k)
    k2 = k * k
    prev2, prev1 = f, (f - incomplete_e(z, k)) / k2
    root = math.sqrt(max(0.0, (1.0 - z * z) * (1.0 - k2 * z * z)))
    for m in range(2, n + 1):
        denom = (2 * m - 1) * k2
        cur = (
            z ** (2 * m - 3) * root / denom
            + 2.0 * (m - 1) * (k2 + 1.0) * prev1 / denom
            - (2 * m - 3) * prev2 / denom
        )
        prev2, prev1 = prev1, cur
    return prev1
