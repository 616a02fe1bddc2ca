"""Level curves of H = x^2 y (1 - x - y) inside the invariant triangle.

Each energy h in (0, 1/64) selects a closed orbit around the center
(1/2, 1/4).  The chord y = (1 - x)/2 splits the orbit into an upper and a
lower branch, both graphs over x in [x0, x1]; the whole geometry is
parameterized by u = sqrt(1 - 8 sqrt(h)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError

H_MAX = 1.0 / 64.0
_RADICAND_TOL = 1e-14


def hamiltonian(x: float, y: float) -> float:
    """The cubic Hamiltonian H(x, y) = x^2 y (1 - x - y)."""
    return x * x * y * (1.0 - x - y)


@dataclass(frozen=True)
class LevelCurve:
    """Geometric parameters of the closed orbit at energy h in (0, 1/64)."""

    h: float
    u: float
    a: float
    b: float
    k: float
    x0: float
    x1: float


def level_params(h: float) -> LevelCurve:
    """Geometry of the level curve H = h: u, the moduli a, b, k, and x0, x1."""
    if not 0.0 < h < H_MAX:
        raise DomainError(f"energy must lie in (0, 1/64), got {h}")
    s = 8.0 * math.sqrt(h)
    u = math.sqrt(1.0 - s)
    return LevelCurve(
        h=h,
        u=u,
        a=2.0 / u,
        b=2.0 / math.sqrt(1.0 + s),
        k=math.sqrt((1.0 - s) / (1.0 + s)),
        x0=0.5 * (1.0 - u),
        x1=0.5 * (1.0 + u),
    )


def u_to_h(u: float) -> float:
    """Inverse parameterization: h = (1 - u^2)^2 / 64 for u in (0, 1)."""
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0, 1), got {u}")
    return (1.0 - u * u) ** 2 / 64.0


def radicand(x: float, h: float) -> float:
    """The branch radicand x^4 - 2x^3 + x^2 - 4h = (x(1-x))^2 - 4h."""
    return (x * (1.0 - x)) ** 2 - 4.0 * h


def branch_y(x: float, curve: LevelCurve, sign: int) -> float:
    """The upper (sign=+1) or lower (sign=-1) branch of the orbit at x.

    Both branches meet the chord y = (1 - x)/2 at x0 and x1, where the
    radicand vanishes; radicands within 1e-14 of zero are clamped.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if not curve.x0 <= x <= curve.x1:
        raise DomainError(f"x = {x} outside the branch interval [{curve.x0}, {curve.x1}]")
    rad = radicand(x, curve.h)
    if rad < 0.0:
        if rad < -_RADICAND_TOL:
            raise DomainError(f"negative radicand {rad} at x = {x}")
        rad = 0.0
    return 0.5 * (1.0 - x) + sign * 0.5 * math.sqrt(rad) / x
