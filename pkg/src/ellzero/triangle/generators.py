"""The six generator integrals I00, I20, I30, J00, J20, J30.

Closed forms express each generator through complete elliptic integrals with
modulus u/sqrt(2-u^2) and third-kind parameter u^2, plus an explicit odd
polynomial in u.  The quadrature route integrates x^{i+1} y^j dy directly
along the branches, using the substitution x = 1/2 + (u/2) sin(theta) which
makes every integrand smooth in theta (the branch slope dy/dx has
inverse-square-root singularities at x0 and x1, but dy/dtheta does not).

Orientation convention: the upper branch is traversed right-to-left (from
the chord point at x1 to the one at x0) and the lower branch left-to-right,
so that the two concatenate into one counterclockwise loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .. import elliptic
from ..errors import QuadratureError
from .geometry import LevelCurve

_QUAD_TOL = 1e-12
_QUAD_LIMIT = 200


@dataclass(frozen=True)
class GeneratorValues:
    """Values of the six generator integrals at a fixed energy h."""

    I00: float
    I20: float
    I30: float
    J00: float
    J20: float
    J30: float


def generator_values_closed(curve: LevelCurve) -> GeneratorValues:
    """Evaluate the six generators through complete elliptic integrals.

    The elliptic parts are shared between each I and its J partner; the odd
    polynomial parts in u flip sign between the upper and lower branches.
    """
    u = curve.u
    u2 = u * u
    s = math.sqrt(2.0 - u2)
    k = u / s
    K = elliptic.complete_k(k)
    E = elliptic.complete_e(k)
    Pi = elliptic.complete_pi(u2, k)
    ell00 = ((2.0 - u2) * E + (u2 - 1.0) * K - (u2 - 1.0) ** 2 * Pi) / (4.0 * s)
    ell20 = s * ((u2 - 1.0) * K + E) / 24.0
    ell30 = s * ((u2 * u2 - 2.0 * u2 + 3.0) * E - (u2 * u2 - 4.0 * u2 + 3.0) * K) / 80.0
    odd00 = u / 4.0
    odd20 = (u + u * u2) / 48.0
    odd30 = (5.0 * u + 10.0 * u * u2 + u * u2 * u2) / 640.0
    return GeneratorValues(
        I00=ell00 + odd00,
        I20=ell20 + odd20,
        I30=ell30 + odd30,
        J00=ell00 - odd00,
        J20=ell20 - odd20,
        J30=ell30 - odd30,
    )


def _theta_state(curve: LevelCurve, theta: float) -> tuple[float, float, float, float]:
    """(x, w, dx/dtheta, dw/dtheta) at the angle theta, all smooth in theta.

    w(x) = sqrt(radicand)/(2x) is the half-width of the orbit about the
    chord; in theta it equals u cos(theta) S / (8 x) with
    S = sqrt(2 - u^2 (1 + sin^2 theta)).
    """
    u = curve.u
    sin_t, cos_t = math.sin(theta), math.cos(theta)
    x = 0.5 + 0.5 * u * sin_t
    s2 = 2.0 - u * u * (1.0 + sin_t * sin_t)
    s = math.sqrt(s2)
    w = u * cos_t * s / (8.0 * x)
    dx = 0.5 * u * cos_t
    ds = -u * u * sin_t * cos_t / s
    dw = (u / (8.0 * x * x)) * ((-sin_t * s + cos_t * ds) * x - cos_t * s * dx)
    return x, w, dx, dw


def branch_integral(
    curve: LevelCurve, integrand: Callable[[float, float, float, float, float], float], sign: int
) -> float:
    """Integrate over one branch in the loop orientation.

    ``integrand(x, y, dx, dy, theta)`` receives the point and the theta
    derivatives of the parameterization; ``sign`` selects the upper (+1,
    traversed right-to-left) or lower (-1, left-to-right) branch.
    """

    def f(theta: float) -> float:
        x, w, dx, dw = _theta_state(curve, theta)
        ell = 0.5 * (1.0 - x)
        dell = -0.5 * dx
        y = ell + sign * w
        dy = dell + sign * dw
        return integrand(x, y, dx, dy, theta)

    val, err = quad(f, -0.5 * math.pi, 0.5 * math.pi, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=_QUAD_LIMIT)
    if err > 1e-8 * max(1.0, abs(val)):
        raise QuadratureError(f"quadrature error estimate {err} too large")
    # The upper branch runs with x decreasing, i.e. theta from pi/2 to -pi/2.
    return -val if sign == 1 else val


def _ij_quadrature(curve: LevelCurve, i: int, j: int, sign: int) -> float:
    def integrand(x, y, dx, dy, theta):
        return x ** (i + 1) * y**j * dy

    return branch_integral(curve, integrand, sign) / (i + 1)


def generator_values_quadrature(curve: LevelCurve) -> GeneratorValues:
    """The six generators by direct adaptive quadrature along the branches."""
    return GeneratorValues(
        I00=_ij_quadrature(curve, 0, 0, 1),
        I20=_ij_quadrature(curve, 2, 0, 1),
        I30=_ij_quadrature(curve, 3, 0, 1),
        J00=_ij_quadrature(curve, 0, 0, -1),
        J20=_ij_quadrature(curve, 2, 0, -1),
        J30=_ij_quadrature(curve, 3, 0, -1),
    )


def ij_quadrature(curve: LevelCurve, i: int, j: int, sign: int) -> float:
    """Quadrature value of the (i, j) monomial integral on one branch."""
    return _ij_quadrature(curve, i, j, sign)
