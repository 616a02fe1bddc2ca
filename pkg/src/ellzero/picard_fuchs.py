"""First- and second-order ODE systems satisfied by V(k) = (K, E, Pi(mu(k), k)).

The vector of complete elliptic integrals satisfies V'(k) = A(k) V(k) and
V''(k) = A(k) V'(k) + B(k) V(k), where the third rows of A and B depend on the
parameter function mu(k) and its first two derivatives.  The module also
evaluates the closed form of the Wronskian determinant of (K, E, Pi) and its
limit at k = 0, and verifies the ODE systems numerically against central
differences on the elliptic evaluators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Union

import numpy as np

from . import elliptic
from .errors import DegenerateMuError, DomainError, SingularityError
from .polyalg import Poly, RatFunc

MuLike = Union[int, float, Fraction, Poly, RatFunc]

_SING_TOL = 1e-12


@dataclass(frozen=True)
class MuProfile:
    """A parameter function mu(k) together with its first two derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    description: str


def as_mu(mu: MuLike) -> MuProfile:
    """Wrap a constant, Poly, or RatFunc as an exactly differentiable profile."""
    if isinstance(mu, MuProfile):
        return mu
    if isinstance(mu, (int, float, Fraction, Rational)):
        c = float(mu)
        return MuProfile(lambda k: c, lambda k: 0.0, lambda k: 0.0, f"constant {mu}")
    if isinstance(mu, Poly):
        d1, d2 = mu.derivative(), mu.derivative().derivative()
        return MuProfile(
            lambda k: float(mu.eval(k)),
            lambda k: float(d1.eval(k)),
            lambda k: float(d2.eval(k)),
            f"polynomial {mu!r}",
        )
    if isinstance(mu, RatFunc):
        d1, d2 = mu.derivative(), mu.derivative().derivative()
        return MuProfile(
            lambda k: float(mu.eval(k)),
            lambda k: float(d1.eval(k)),
            lambda k: float(d2.eval(k)),
            f"rational {mu!r}",
        )
    raise TypeError(f"cannot interpret {mu!r} as a parameter function")


def _check_point(profile: MuProfile, k: float) -> float:
    if not -1.0 < k < 1.0:
        raise DomainError(f"k must lie in (-1, 1), got {k}")
    if abs(k) < _SING_TOL:
        raise SingularityError("the coefficient matrices have 1/k entries; k = 0 excluded")
    m = profile.value(k)
    if abs(m) < _SING_TOL or abs(m - 1.0) < _SING_TOL:
        raise SingularityError(f"mu(k) = {m} is a singular parameter value")
    if abs(m - k * k) < _SING_TOL:
        raise SingularityError("mu(k) = k**2 is a degenerate (reducible) configuration")
    return m


def matrix_a(mu: MuLike, k: float) -> np.ndarray:
    """Coefficient matrix A(k) of the first-order system V' = A V."""
    profile = as_mu(mu)
    m = _check_point(profile, k)
    m1 = profile.d1(k)
    k2 = k * k
    a31 = -m1 / (2.0 * m * (1.0 - m))
    a32 = k / ((m - k2) * (k2 - 1.0)) + m1 / (2.0 * (1.0 - m) * (m - k2))
    a33 = k / (m - k2) + (m * m - k2) * m1 / (2.0 * m * (1.0 - m) * (m - k2))
    return np.array(
        [
            [-1.0 / k, 1.0 / (k * (1.0 - k2)), 0.0],
            [-1.0 / k, 1.0 / k, 0.0],
            [a31, a32, a33],
        ]
    )


def matrix_b(mu: MuLike, k: float) -> np.ndarray:
    """Coefficient matrix B(k) of the second-order system V'' = A V' + B V."""
    profile = as_mu(mu)
    m = _check_point(profile, k)
    m1, m2 = profile.d1(k), profile.d2(k)
    k2 = k * k
    k4 = k2 * k2
    k6 = k4 * k2
    b31 = ((m * m - m) * m2 - (2.0 * m - 1.0) * m1 * m1) / (2.0 * m * m * (m - 1.0) ** 2)
    b32 = (
        (3.0 * k4 - m * (k2 + 1.0) - k2) / ((1.0 - k2) ** 2 * (m - k2) ** 2)
        + m2 / (2.0 * (1.0 - m) * (m - k2))
        + (2.0 * m - k2 - 1.0) * m1 * m1 / (2.0 * (m - 1.0) ** 2 * (m - k2) ** 2)
        - k * (k2 + m - 2.0) * m1 / ((k2 - 1.0) * (m - k2) ** 2 * (m - 1.0))
    )
    b33 = (
        (m + k2) / (m - k2) ** 2
        - (k2 - m * m) * m2 / (2.0 * m * (m - 1.0) * (k2 - m))
        + ((2.0 * m - 1.0) * k4 - 2.0 * (2.0 * m * m - m) * k2 + m**4)
        * m1
        * m1
        / (2.0 * m * m * (m - 1.0) ** 2 * (k2 - m) ** 2)
        - 2.0 * k * m1 / ((m - k2) ** 2)
    )
    return np.array(
        [
            [1.0 / k2, (3.0 * k2 - 1.0) / (k2 * (1.0 - k2) ** 2), 0.0],
            [1.0 / k2, -1.0 / k2, 0.0],
            [b31, b32, b33],
        ]
    )


def _value_vector(profile: MuProfile, k: float) -> np.ndarray:
    m = profile.value(k)
    return np.array(
        [elliptic.complete_k(k), elliptic.complete_e(k), elliptic.complete_pi(m, k)]
    )


def _fd_derivatives(
    profile: MuProfile, k: float, step: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """V and its first two derivatives by fourth-order central differences."""
    vm2 = _value_vector(profile, k - 2 * step)
    vm1 = _value_vector(profile, k - step)
    v0 = _value_vector(profile, k)
    vp1 = _value_vector(profile, k + step)
    vp2 = _value_vector(profile, k + 2 * step)
    v1 = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * step)
    v2 = (-vp2 + 16.0 * vp1 - 30.0 * v0 + 16.0 * vm1 - vm2) / (12.0 * step * step)
    return v0, v1, v2


def pf_residual(mu: MuLike, k: float, step: float = 1e-4) -> tuple[float, float]:
    """Residuals of the two ODE systems at k, using central differences.

    Returns (r1, r2) with
      r1 = || V'_fd(k) - A(k) V(k) ||_inf,
      r2 = || V''_fd(k) - A(k) V'_fd(k) - B(k) V(k) ||_inf.
    """
    profile = as_mu(mu)
    if not (-1.0 < k - 2 * step and k + 2 * step < 1.0):
        raise DomainError("finite-difference stencil leaves (-1, 1)")
    a = matrix_a(profile, k)
    b = matrix_b(profile, k)
    v, v1, v2 = _fd_derivatives(profile, k, step)
    r1 = float(np.max(np.abs(v1 - a @ v)))
    r2 = float(np.max(np.abs(v2 - a @ v1 - b @ v)))
    return r1, r2


def wronskian(mu: MuLike, k: float) -> float:
    """Closed form of the 3x3 Wronskian determinant of (K, E, Pi(mu(k), k)).

    The rows V' and V'' are eliminated through the ODE systems: the
    determinant equals det(V, A V, (A^2 + B) V), a finite rational-elliptic
    expression with no numerical differentiation involved.
    """
    profile = as_mu(mu)
    m = _check_point(profile, k)
    v = np.array(
        [elliptic.complete_k(k), elliptic.complete_e(k), elliptic.complete_pi(m, k)]
    )
    a = matrix_a(profile, k)
    b = matrix_b(profile, k)
    rows = np.vstack([v, a @ v, (a @ a + b) @ v])
    return float(np.linalg.det(rows))


def wronskian_fd(mu: MuLike, k: float, step: float = 1e-3) -> float:
    """Finite-difference oracle: determinant of (V, V'_fd, V''_fd) rows."""
    profile = as_mu(mu)
    if not (-1.0 < k - 2 * step and k + 2 * step < 1.0):
        raise DomainError("finite-difference stencil leaves (-1, 1)")
    v, v1, v2 = _fd_derivatives(profile, k, step)
    return float(np.linalg.det(np.vstack([v, v1, v2])))


def wronskian_limit_zero(mu: MuLike) -> float:
    """The limit of W(k) as k -> 0: pi**3 mu'(0) / (16 (1 - mu(0))**(3/2))."""
    profile = as_mu(mu)
    m0 = profile.value(0.0)
    m1 = profile.d1(0.0)
    if abs(m1) < _SING_TOL:
        raise DegenerateMuError("wronskian limit requires mu'(0) != 0")
    if m0 >= 1.0:
        raise DomainError("wronskian limit requires mu(0) < 1")
    return float(np.pi**3) * m1 / (16.0 * (1.0 - m0) ** 1.5)
