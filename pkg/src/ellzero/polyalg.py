"""Exact univariate polynomial and rational-function arithmetic over the rationals.

Polynomials are stored as coefficient tuples, lowest power first, with exact
`fractions.Fraction` entries and no trailing zeros.  This module is the carrier
for every symbolic computation in `reduction` and the triangle pipeline, where
degree bookkeeping must be exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import DomainError

Scalar = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of the i-th power.  The zero polynomial is
    represented by an empty coefficient tuple and has degree -1.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):  # noqa: D107 - dataclass init override
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def constant(c) -> "Poly":
        return Poly((c,))

    @staticmethod
    def monomial(power: int, coeff=1) -> "Poly":
        if power < 0:
            raise ValueError("monomial power must be nonnegative")
        return Poly((0,) * power + (coeff,))

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == self._coerce(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly((_as_fraction(other),))

    # -- calculus and evaluation --------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; exact if x is rational, float otherwise."""
        acc = Fraction(0) if isinstance(x, (int, Fraction, Rational)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.constant(c)
        return acc

    def shift(self, powers: int) -> "Poly":
        """Multiply by x**powers (powers >= 0)."""
        if powers < 0:
            raise ValueError("negative shift")
        if self.is_zero():
            return self
        return Poly((Fraction(0),) * powers + self.coeffs)

    def even_part(self) -> "Poly":
        return Poly([c if i % 2 == 0 else 0 for i, c in enumerate(self.coeffs)])

    def odd_part(self) -> "Poly":
        return Poly([c if i % 2 == 1 else 0 for i, c in enumerate(self.coeffs)])

    def is_odd(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if i % 2 == 0)

    # -- euclidean structure ------------------------------------------

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree() - other.degree() + 1)
        rem = list(self.coeffs)
        d = other.degree()
        lead = other.leading()
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            factor = rem[-1] / lead
            shift = len(rem) - 1 - d
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(self._coerce(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    # -- textual format ------------------------------------------------

    def to_strings(self) -> list[str]:
        """Coefficient list, lowest power first, rationals as "p/q" strings."""
        return [str(c) for c in self.coeffs]

    @staticmethod
    def from_strings(items: Sequence) -> "Poly":
        return Poly([_as_fraction(s) for s in items])

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else Poly.zero()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: return [(factor, multiplicity)] with factors squarefree."""
    if p.is_zero():
        raise DomainError("zero polynomial has no squarefree decomposition")
    if p.degree() == 0:
        return []
    out: list[tuple[Poly, int]] = []
    g = poly_gcd(p, p.derivative())
    c = p // g
    d = p.derivative() // g - c.derivative()
    m = 1
    while c.degree() > 0:
        f = poly_gcd(c, d)
        if f.degree() > 0:
            out.append((f, m))
        c_next = c // f
        d = d // f - c_next.derivative()
        c = c_next
        m += 1
    return out


def _sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree() > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign_variations(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q.eval(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots_open(chain: list[Poly], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of chain[0] in (lo, hi]."""
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def real_roots_in(p: Poly, lo, hi) -> list[tuple[float, int]]:
    """All real roots of p in the open interval (lo, hi), with multiplicities.

    Roots are isolated with Sturm sequences in exact arithmetic, then refined
    by bisection to an absolute width of 1e-14.  Returns a sorted list of
    (root, multiplicity) pairs.
    """
    if p.is_zero():
        raise DomainError("cannot find roots of the zero polynomial")
    lo = _as_fraction(Fraction(lo).limit_denominator(10**15) if not isinstance(lo, (int, Fraction)) else lo)
    hi = _as_fraction(Fraction(hi).limit_denominator(10**15) if not isinstance(hi, (int, Fraction)) else hi)
    if lo >= hi:
        return []
    roots: list[tuple[float, int]] = []
    for factor, mult in squarefree_decomposition(p):
        # Nudge endpoints inward past any exact endpoint root so the interval
        # behaves as fully open.
        a, b = lo, hi
        eps = Fraction(1, 10**30)
        if factor.eval(a) == 0:
            a += eps
        if factor.eval(b) == 0:
            b -= eps
        chain = _sturm_chain(factor)
        total = _count_roots_open(chain, a, b)
        if total == 0:
            continue
        stack = [(a, b, total)]
        isolated: list[tuple[Fraction, Fraction]] = []
        while stack:
            a0, b0, cnt = stack.pop()
            if cnt == 1:
                isolated.append((a0, b0))
                continue
            mid = (a0 + b0) / 2
            while factor.eval(mid) == 0:
                mid = (a0 + 2 * mid) / 3
            left = _count_roots_open(chain, a0, mid)
            if left:
                stack.append((a0, mid, left))
            if cnt - left:
                stack.append((mid, b0, cnt - left))
        for a0, b0 in isolated:
            fa = factor.eval(a0)
            # Bisect exactly until tight, then hand off to float bisection.
            while float(b0 - a0) > 1e-14:
                mid = (a0 + b0) / 2
                fm = factor.eval(mid)
                if fm == 0:
                    a0 = b0 = mid
                    break
                if (fa > 0) != (fm > 0):
                    b0 = mid
                else:
                    a0, fa = mid, fm
            roots.append((float((a0 + b0) / 2), mult))
    roots.sort(key=lambda t: t[0])
    return roots


@dataclass(frozen=True)
class RatFunc:
    """Rational function num/den in reduced form.

    The gcd of numerator and denominator is constant and the denominator's
    leading coefficient is normalized positive.
    """

    num: Poly
    den: Poly

    def __init__(self, num, den=Poly((1,))):  # noqa: D107
        num = Poly._coerce(num)
        den = Poly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lead = den.leading()
            if lead < 0:
                num, den = -1 * num, -1 * den
                lead = -lead
            num = Poly([c / lead for c in num.coeffs])
            den = Poly([c / lead for c in den.coeffs])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def _coerce(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc(Poly._coerce(other))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise DomainError("rational function is not a polynomial")
        c = self.den.coeffs[0]
        return Poly([a / c for a in self.num.coeffs])

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, x):
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num.eval(x) / d

    __call__ = eval

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r} / {self.den!r})"
