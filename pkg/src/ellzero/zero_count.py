"""Zero counting for I(k) = p K + q E + r Pi on subintervals of (-1, 1).

The counter samples I on an equally spaced grid, brackets every sign change,
refines each bracket by bisection to width 1e-12, and doubles the grid until
the count is unchanged across two consecutive doublings.  Local minima of |I|
that approach zero without a sign change are reported separately as suspected
even-multiplicity touch points and excluded from the certified count.  The
certified count is compared against the piecewise degree bound appropriate to
the parameter function mu (or against m + n + 2 when r vanishes identically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional, Sequence, Union

from . import elliptic
from .errors import DomainError
from .polyalg import Poly, RatFunc
from .reduction import MU_RATIONAL_SPECIAL, psi_bound, psi_bound_rational

_EDGE_MARGIN = 1e-4
_BRACKET_WIDTH = 1e-12
_MAX_GRID = 2**16
_MIN_GRID = 64
_TOUCH_SCREEN = 1e-3
_TOUCH_ACCEPT = 1e-9


@dataclass(frozen=True)
class ZeroReport:
    """Certified sign-change zeros of a scalar function on an interval.

    ``roots`` holds (location, final bracket width) pairs in increasing
    location order; ``touch_points`` holds suspected even-multiplicity
    zeros (deep minima of |f| with no sign change), which do not enter
    ``count``.  ``stable`` records whether grid doubling converged before
    the 2**16-point cap.
    """

    roots: tuple[tuple[float, float], ...]
    touch_points: tuple[float, ...]
    count: int
    bound: int
    bound_satisfied: bool
    stable: bool
    grid_used: int
    message: str = ""


def _bisect(f: Callable[[float], float], a: float, b: float, fa: float, fb: float) -> tuple[float, float]:
    """Refine a sign-change bracket to width <= 1e-12; returns (midpoint, width)."""
    while b - a > _BRACKET_WIDTH:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if not math.isfinite(fm):
            raise DomainError(f"non-finite function value at k = {mid}")
        if fm == 0.0:
            half = 0.25 * (b - a)
            a, b = mid - min(half, _BRACKET_WIDTH / 2), mid + min(half, _BRACKET_WIDTH / 2)
            break
        if (fa < 0) != (fm < 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b), b - a


def _refine_touch(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Golden-section minimization of |f| on [a, b]; returns (argmin, min |f|)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = abs(f(c)), abs(f(d))
    for _ in range(80):
        if b - a < 1e-13:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = abs(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = abs(f(d))
    x = 0.5 * (a + b)
    return x, abs(f(x))


def _scan_once(
    f: Callable[[float], float], lo: float, hi: float, grid: int
) -> tuple[list[tuple[float, float]], list[float]]:
    xs = [lo + (hi - lo) * i / grid for i in range(grid + 1)]
    fs = []
    for x in xs:
        v = f(x)
        if not math.isfinite(v):
            raise DomainError(f"non-finite function value at k = {x}")
        fs.append(v)
    scale = max(1e-300, max(abs(v) for v in fs))
    roots: list[tuple[float, float]] = []
    touches: list[float] = []
    for i in range(grid + 1):
        if fs[i] != 0.0:
            continue
        # An exact zero landing on a grid node: classify it by the signs of
        # the neighbours (sign change -> certified root, else touch point).
        left = next((fs[j] for j in range(i - 1, -1, -1) if fs[j] != 0.0), 0.0)
        right = next((fs[j] for j in range(i + 1, grid + 1) if fs[j] != 0.0), 0.0)
        if left == 0.0 or right == 0.0 or (left < 0) != (right < 0):
            roots.append((xs[i], 0.0))
        else:
            touches.append(xs[i])
    for i in range(grid):
        fa, fb = fs[i], fs[i + 1]
        if fa != 0.0 and fb != 0.0 and (fa < 0) != (fb < 0):
            roots.append(_bisect(f, xs[i], xs[i + 1], fa, fb))
    for i in range(1, grid):
        same_sign = (fs[i - 1] > 0) == (fs[i] > 0) == (fs[i + 1] > 0)
        local_min = abs(fs[i]) <= abs(fs[i - 1]) and abs(fs[i]) <= abs(fs[i + 1])
        if same_sign and local_min and abs(fs[i]) < _TOUCH_SCREEN * scale and fs[i] != 0.0:
            x, fmin = _refine_touch(f, xs[i - 1], xs[i + 1])
            if fmin < _TOUCH_ACCEPT * scale:
                touches.append(x)
    return roots, touches


def count_function_zeros(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grid: int,
    bound: int,
) -> ZeroReport:
    """Adaptive sign-change zero count of an arbitrary callable on [lo, hi]."""
    if not lo < hi:
        raise DomainError(f"empty interval ({lo}, {hi})")
    if grid < _MIN_GRID:
        raise DomainError(f"grid must be at least {_MIN_GRID}, got {grid}")
    counts: list[int] = []
    g = grid
    roots: list[tuple[float, float]] = []
    touches: list[float] = []
    stable = False
    while True:
        roots, touches = _scan_once(f, lo, hi, g)
        counts.append(len(roots))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            stable = True
            break
        if g >= _MAX_GRID:
            break
        g = min(2 * g, _MAX_GRID)
    roots.sort()
    touches.sort()
    count = len(roots)
    return ZeroReport(
        roots=tuple(roots),
        touch_points=tuple(touches),
        count=count,
        bound=bound,
        bound_satisfied=count <= bound,
        stable=stable,
        grid_used=g,
        message="" if stable else "count unstable",
    )


def _bound_for(p: Poly, q: Poly, r: Poly, mu) -> int:
    m = max(p.degree(), 0)
    n = max(q.degree(), 0)
    if r.is_zero():
        return m + n + 2
    l = r.degree()
    if isinstance(mu, RatFunc):
        if mu != MU_RATIONAL_SPECIAL:
            raise DomainError("rational mu is supported only for mu = 2k^2/(1+k^2)")
        return psi_bound_rational(m, n, l)
    if isinstance(mu, Poly):
        return psi_bound(m, n, l, max(mu.degree(), 0))
    if isinstance(mu, (int, float, Fraction, Rational)):
        return psi_bound(m, n, l, 0)
    raise DomainError(f"unsupported parameter function {mu!r}")


def count_zeros(
    p: Poly,
    q: Poly,
    r: Poly,
    mu,
    interval: Sequence[float] = (-1.0, 1.0),
    grid: int = _MIN_GRID,
) -> ZeroReport:
    """Count sign-change zeros of I(k) = p K + q E + r Pi(mu(k), k).

    The interval is clamped to stay at least 1e-4 away from the modulus
    endpoints +-1, where K diverges logarithmically.  With r identically
    zero, mu is ignored and the classical m + n + 2 bound applies.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not -1.0 <= lo < hi <= 1.0:
        raise DomainError(f"interval must satisfy -1 <= lo < hi <= 1, got ({lo}, {hi})")
    lo = max(lo, -1.0 + _EDGE_MARGIN)
    hi = min(hi, 1.0 - _EDGE_MARGIN)
    bound = _bound_for(p, q, r, mu)
    if r.is_zero():
        def f(k: float) -> float:
            return float(p.eval(k)) * elliptic.complete_k(k) + float(q.eval(k)) * elliptic.complete_e(k)
    else:
        if isinstance(mu, RatFunc):
            mu_val: Callable[[float], float] = lambda k: float(mu.eval(k))
        elif isinstance(mu, Poly):
            mu_val = lambda k: float(mu.eval(k))
        else:
            mu_const = float(mu)
            mu_val = lambda k: mu_const

        def f(k: float) -> float:
            return (
                float(p.eval(k)) * elliptic.complete_k(k)
                + float(q.eval(k)) * elliptic.complete_e(k)
                + float(r.eval(k)) * elliptic.complete_pi(mu_val(k), k)
            )

    return count_function_zeros(f, lo, hi, grid, bound)


def check_theorem_bound(
    report: ZeroReport,
    m: int,
    n: int,
    l: int,
    s: Optional[int] = None,
    special: bool = False,
) -> bool:
    """Whether the certified count respects the degree-based zero bound.

    With ``special`` the fixed rational parameter bound applies; otherwise
    ``s`` is the degree of the polynomial parameter function (0 for a
    constant).  With l < 0 the combination has no third-kind term and the
    classical m + n + 2 bound applies.
    """
    if special:
        bound = psi_bound_rational(m, n, l)
    elif l < 0:
        bound = m + n + 2
    else:
        if s is None:
            raise DomainError("polynomial parameter bound requires the degree s")
        bound = psi_bound(m, n, l, s)
    return report.count <= bound
