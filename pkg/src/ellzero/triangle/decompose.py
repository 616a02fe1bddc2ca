"""Exact reduction of Melnikov monomial integrals to the six generators.

Every half-loop integral of x^i y^j dx or dy reduces, by binomial expansion
about the chord y = (1 - x)/2, to exact combinations of
  - algebraic integrals E(d) = int x^d sqrt(x^4 - 2x^3 + x^2 - 4h) dx over
    [x0, x1], which satisfy a four-term contiguous recursion and collapse to
    the basis {E(-1), E(1), E(2)} = {I00+J00, I20+J20, I30+J30} (up to odd
    polynomial corrections),
  - elementary integrals of Laurent monomials in x, which evaluate to
    rational functions of u = sqrt(1 - 8 sqrt(h)),
  - a logarithm ln(x1/x0) = ln((1+u)/(1-u)) arising from the 1/x Laurent
    coefficient; its coefficient is tracked exactly and always carries a
    factor of h.

All coefficients are exact rationals throughout; the final Decomposition
asserts the structural degree bounds and raises StructuralError if the
bookkeeping ever leaves the predicted shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence, Union

from ..errors import DomainError, StructuralError
from ..polyalg import Poly, RatFunc

# h as an exact polynomial in u: h = (1 - u^2)^2 / 64.
H_OF_U = Poly([Fraction(1, 64), 0, Fraction(-1, 32), 0, Fraction(1, 64)])

_H = Poly.x()  # the variable h in h-space polynomials
_GENERATOR_BASIS = (-1, 1, 2)

# Odd-polynomial offsets between the E basis and the generators:
# E(-1) = 2*I00 - u/2 = 2*J00 + u/2, and similarly for E(1), E(2) with the
# exact chord integrals P(3,0)/3 and P(4,0)/4.
_E_OFFSET = {
    -1: Poly([0, Fraction(1, 2)]),
    1: Poly([0, Fraction(1, 24), 0, Fraction(1, 24)]),
    2: Poly([0, Fraction(5, 320), 0, Fraction(10, 320), 0, Fraction(1, 320)]),
}


def _rf_h(value) -> RatFunc:
    return RatFunc._coerce(value)


def _h_to_u(rf: RatFunc) -> RatFunc:
    """Substitute h = (1 - u^2)^2/64 into a rational function of h."""
    return RatFunc(rf.num.compose(H_OF_U), rf.den.compose(H_OF_U))


def chord_integral(a: int, b: int) -> Poly:
    """P(a, b) = int_{x0}^{x1} x^a ((1-x)/2)^b dx as an exact odd Poly in u."""
    if a < 0 or b < 0:
        raise DomainError("chord_integral requires nonnegative exponents")
    # Substitute x = t + 1/2: integrand (t + 1/2)^a ((1/2 - t)/2)^b over
    # [-u/2, u/2]; the even part of the integrand contributes an odd
    # antiderivative evaluated at u/2 minus -u/2.
    t = Poly.x()
    integrand = (t + Fraction(1, 2)) ** a * ((Fraction(1, 2) - t) * Fraction(1, 2)) ** b
    anti = Poly([c / (i + 1) for i, c in enumerate(integrand.coeffs)]).shift(1)
    half_u = Poly([0, Fraction(1, 2)])
    return anti.compose(half_u) - anti.compose(-1 * half_u)


@lru_cache(maxsize=None)
def _e_basis(d: int) -> tuple[tuple[int, RatFunc], ...]:
    """E(d) expressed on the basis {E(-1), E(1), E(2)} with h-rational weights.

    Upward: (m+6) E(m+3) = (2m+9) E(m+2) - (m+3) E(m+1) + 4 m h E(m-1).
    Downward (d <= -2): E(d) = [(d+7)E(d+4) - (2d+11)E(d+3)
    + (d+4)E(d+2)] / (4 (d+1) h).
    """
    if d in _GENERATOR_BASIS:
        return ((d, _rf_h(1)),)
    if d == 0:
        return ((1, _rf_h(2)),)
    acc: dict[int, RatFunc] = {}

    def add(dd: int, weight: RatFunc) -> None:
        for base, coeff in _e_basis(dd):
            acc[base] = acc.get(base, _rf_h(0)) + weight * coeff

    if d >= 3:
        m = d - 3
        inv = Fraction(1, m + 6)
        add(m + 2, _rf_h(Fraction(2 * m + 9) * inv))
        add(m + 1, _rf_h(Fraction(-(m + 3)) * inv))
        if m != 0:
            add(m - 1, RatFunc(Poly([0, Fraction(4 * m) * inv])))
    else:
        inv_h = RatFunc(Poly([Fraction(1, 4 * (d + 1))]), _H)
        add(d + 4, Fraction(d + 7) * inv_h)
        add(d + 3, Fraction(-(2 * d + 11)) * inv_h)
        add(d + 2, Fraction(d + 4) * inv_h)
    return tuple(sorted(acc.items()))


@dataclass(frozen=True)
class LoopValue:
    """Exact value of a half-loop integral on the E basis.

    ``e`` maps basis index d in {-1, 1, 2} to a rational function of h;
    ``elem`` is the elementary part as a rational function of u; ``log`` is
    the h-rational coefficient of ln((1+u)/(1-u)).
    """

    e: Mapping[int, RatFunc] = field(default_factory=dict)
    elem: RatFunc = field(default_factory=lambda: _rf_h(0))
    log: RatFunc = field(default_factory=lambda: _rf_h(0))

    def __add__(self, other: "LoopValue") -> "LoopValue":
        e = dict(self.e)
        for d, c in other.e.items():
            e[d] = e.get(d, _rf_h(0)) + c
        return LoopValue(e, self.elem + other.elem, self.log + other.log)

    def __sub__(self, other: "LoopValue") -> "LoopValue":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "LoopValue":
        return LoopValue(
            {d: c * v for d, v in self.e.items()}, c * self.elem, c * self.log
        )

    def scale_h(self, rf: RatFunc) -> "LoopValue":
        """Multiply by a rational function of h (substituted into the u part)."""
        return LoopValue(
            {d: rf * v for d, v in self.e.items()},
            _h_to_u(rf) * self.elem,
            rf * self.log,
        )


def _zero_loop() -> LoopValue:
    return LoopValue({}, _rf_h(0), _rf_h(0))


def _laurent_mul(p: dict[int, Poly], q: dict[int, Poly]) -> dict[int, Poly]:
    out: dict[int, Poly] = {}
    for i, a in p.items():
        for j, b in q.items():
            c = a * b
            if not c.is_zero():
                out[i + j] = out.get(i + j, Poly.zero()) + c
    return {i: c for i, c in out.items() if not c.is_zero()}


@lru_cache(maxsize=None)
def _r_power(t: int) -> tuple[tuple[int, Poly], ...]:
    """(x^2 (1-x)^2 - 4h)^t as {x-power: Poly in h}."""
    acc: dict[int, Poly] = {0: Poly.one()}
    base: dict[int, Poly] = {}
    for i, c in enumerate((Poly.x() ** 2 * (1 - Poly.x()) ** 2).coeffs):
        if c != 0:
            base[i] = Poly.constant(c)
    base[0] = base.get(0, Poly.zero()) + Poly([0, -4])
    for _ in range(t):
        acc = _laurent_mul(acc, base)
    return tuple(sorted(acc.items()))


def _elementary_monomial(s: int) -> RatFunc:
    """int_{x0}^{x1} x^s dx as a rational function of u, for s != -1."""
    if s == -1:
        raise DomainError("the 1/x monomial integrates to the logarithm")
    u = Poly.x()
    x1 = RatFunc((1 + u) * Fraction(1, 2))
    x0 = RatFunc((1 - u) * Fraction(1, 2))
    return (x1 ** (s + 1) - x0 ** (s + 1)) * Fraction(1, s + 1)


@lru_cache(maxsize=None)
def _g_integral(a: int, b: int, r: int) -> LoopValue:
    """G(a, b, r) = int x^a ((1-x)/2)^b w^r dx on the upper half-loop.

    w = sqrt(x^4 - 2x^3 + x^2 - 4h)/(2x) is the half-width of the orbit
    about the chord.  Odd powers of w contribute E(d) terms; even powers are
    elementary Laurent integrals (with the 1/x coefficient feeding the
    logarithm).
    """
    if r < 1:
        raise DomainError("g_integral requires r >= 1")
    t, odd = divmod(r, 2)
    scale = Fraction(1, 2 ** (b + r))
    # x^a * (1-x)^b * R^t, as a Laurent table {x-power: Poly in h}.
    table: dict[int, Poly] = {}
    for i, c in enumerate(((1 - Poly.x()) ** b).coeffs):
        if c != 0:
            table[a + i] = Poly.constant(c * scale)
    table = _laurent_mul(table, dict(_r_power(t)))
    result = _zero_loop()
    if odd:
        # One factor sqrt(R) remains; shift by x^{-r}.
        e: dict[int, RatFunc] = {}
        for s, coeff_h in table.items():
            for base, weight in _e_basis(s - r):
                e[base] = e.get(base, _rf_h(0)) + RatFunc(coeff_h) * weight
        result = result + LoopValue(e, _rf_h(0), _rf_h(0))
    else:
        elem = _rf_h(0)
        log = _rf_h(0)
        for s, coeff_h in table.items():
            power = s - r
            if power == -1:
                log = log + RatFunc(coeff_h)
            else:
                elem = elem + _h_to_u(RatFunc(coeff_h)) * _elementary_monomial(power)
        result = result + LoopValue({}, elem, log)
    return result


@lru_cache(maxsize=None)
def _v_integral(a: int, b: int, sign: int) -> LoopValue:
    """The area slice int x^a |y_branch^{b+1} - ell^{b+1}|/(b+1) dx.

    sign=+1 gives the slab between the chord and the upper branch, sign=-1
    between the lower branch and the chord; even powers of the half-width w
    flip sign between the two.
    """
    total = _zero_loop()
    for r in range(1, b + 2):
        c = Fraction(comb(b + 1, r), b + 1)
        if sign < 0 and r % 2 == 0:
            c = -c
        total = total + _g_integral(a, b + 1 - r, r).scale(c)
    return total


def _poly_u(p: Poly) -> LoopValue:
    return LoopValue({}, RatFunc(p), _rf_h(0))


def monomial_dy(i: int, j: int, sign: int) -> LoopValue:
    """int x^i y^j dy along the upper (+1) or lower (-1) branch."""
    half_p = chord_integral(i, j) * Fraction(sign, 2)
    if i == 0:
        return _poly_u(half_p)
    return _v_integral(i - 1, j, sign).scale(Fraction(i)) + _poly_u(half_p)


def monomial_dx(i: int, j: int, sign: int) -> LoopValue:
    """int x^i y^j dx along the upper (+1) or lower (-1) branch."""
    p_term = _poly_u(chord_integral(i, j) * Fraction(-sign))
    if j == 0:
        return p_term
    return _v_integral(i, j - 1, sign).scale(Fraction(-j)) + p_term


def half_loop_ij(i: int, j: int, sign: int) -> LoopValue:
    """I_{i,j} (sign=+1) or J_{i,j} (sign=-1): int x^{i+1} y^j dy / (i+1)."""
    if i < 0 or j < 0:
        raise DomainError("generator reduction requires i, j >= 0")
    return monomial_dy(i + 1, j, sign).scale(Fraction(1, i + 1))


def boundary_poly(i: int, j: int) -> Poly:
    """The odd boundary polynomial F(u) produced by the dx -> dy conversion.

    F(u) = (j/(i+1)) int x^{i+1} (1-x)^{j-1} dx - int x^i (1-x)^j dx over
    [x0, x1]; identically zero when j = i + 1 by symmetry.
    """
    if i < 0 or j < 0:
        raise DomainError("boundary_poly requires nonnegative indices")
    second = chord_integral(i, j) * Fraction(2**j)
    if j == 0:
        return -1 * second
    first = chord_integral(i + 1, j - 1) * Fraction(j * 2 ** (j - 1), i + 1)
    return first - second


# ---------------------------------------------------------------------------
# Perturbation specifications and the assembled decomposition
# ---------------------------------------------------------------------------

SparseCoeffs = Mapping[tuple[int, int], Fraction]


def _normalize_coeffs(n: int, raw, name: str) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    items = raw.items() if isinstance(raw, Mapping) else ((tuple(e[:2]), e[2]) for e in raw)
    for key, value in items:
        i, j = int(key[0]), int(key[1])
        if i < 0 or j < 0 or i + j > n:
            raise DomainError(f"{name}[{i},{j}] violates 0 <= i, j and i + j <= {n}")
        c = Fraction(value)
        if c != 0:
            out[(i, j)] = out.get((i, j), Fraction(0)) + c
    return {k: v for k, v in out.items() if v != 0}


@dataclass(frozen=True)
class PerturbationSpec:
    """Sparse polynomial perturbation of degree n on each side of the chord.

    a_* are the coefficients multiplying dy (with a minus sign in the line
    integral), b_* the coefficients multiplying dx; plus/minus refer to the
    upper/lower branch.
    """

    n: int
    a_plus: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    a_minus: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    b_plus: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    b_minus: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("spec degree must be nonnegative")
        for name in ("a_plus", "a_minus", "b_plus", "b_minus"):
            object.__setattr__(
                self, name, _normalize_coeffs(self.n, getattr(self, name), name)
            )

    def is_zero(self) -> bool:
        return not (self.a_plus or self.a_minus or self.b_plus or self.b_minus)

    @staticmethod
    def from_json(text: str) -> "PerturbationSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid spec JSON: {exc}") from exc
        if not isinstance(data, dict) or "n" not in data:
            raise DomainError("spec JSON must be an object with an 'n' field")
        kwargs = {}
        for name in ("a_plus", "a_minus", "b_plus", "b_minus"):
            entries = data.get(name, [])
            if not isinstance(entries, list):
                raise DomainError(f"spec field {name} must be a list of [i, j, coeff]")
            kwargs[name] = [(int(e[0]), int(e[1]), Fraction(str(e[2]))) for e in entries]
        return PerturbationSpec(
            n=int(data["n"]),
            a_plus=[(i, j, c) for i, j, c in kwargs["a_plus"]],
            a_minus=[(i, j, c) for i, j, c in kwargs["a_minus"]],
            b_plus=[(i, j, c) for i, j, c in kwargs["b_plus"]],
            b_minus=[(i, j, c) for i, j, c in kwargs["b_minus"]],
        )

    def to_json(self) -> str:
        def dump(d: dict) -> list:
            return [[i, j, str(c)] for (i, j), c in sorted(d.items())]

        return json.dumps(
            {
                "n": self.n,
                "a_plus": dump(self.a_plus),
                "a_minus": dump(self.a_minus),
                "b_plus": dump(self.b_plus),
                "b_minus": dump(self.b_minus),
            },
            sort_keys=True,
        )


def _phi_caps(n: int) -> tuple[int, int]:
    parity = (1 - (-1) ** n) // 2
    return n - 3 + parity, n + 1 + parity


@dataclass(frozen=True)
class Decomposition:
    """I(h) on the generator basis with exact polynomial coefficients.

    I(h) = alpha_p(h) I00 + beta_p(h) I20 + gamma_p(h) I30
         + alpha_m(h) J00 + beta_m(h) J20 + gamma_m(h) J30
         + h phi_h(u) + phi_0(u) + log_h(h) ln((1+u)/(1-u)),
    with u = sqrt(1 - 8 sqrt(h)).  phi_h and phi_0 are odd in u.  The
    logarithmic term is absent for branch-symmetric data but survives in
    general piecewise cases; its coefficient always vanishes at h = 0.
    """

    n: int
    alpha_p: Poly
    beta_p: Poly
    gamma_p: Poly
    alpha_m: Poly
    beta_m: Poly
    gamma_m: Poly
    phi_h: Poly
    phi_0: Poly
    log_h: Poly

    def __post_init__(self):
        caps = (self.n // 4, (self.n - 1) // 4 if self.n >= 1 else -1,
                (self.n - 3) // 4 if self.n >= 3 else -1)
        names = ("alpha", "beta", "gamma")
        for cap, name in zip(caps, names):
            for side in ("p", "m"):
                poly = getattr(self, f"{name}_{side}")
                if poly.degree() > cap:
                    raise StructuralError(
                        f"deg {name}_{side} = {poly.degree()} exceeds cap {cap}"
                    )
        cap_h, cap_0 = _phi_caps(self.n)
        cap_h = max(cap_h, -1)
        if not self.phi_h.is_odd() or not self.phi_0.is_odd():
            raise StructuralError("phi polynomials must be odd in u")
        if self.phi_h.degree() > cap_h:
            raise StructuralError(f"deg phi_h = {self.phi_h.degree()} exceeds cap {cap_h}")
        if self.phi_0.degree() > cap_0:
            raise StructuralError(f"deg phi_0 = {self.phi_0.degree()} exceeds cap {cap_0}")
        if self.log_h[0] != 0:
            raise StructuralError("logarithm coefficient must vanish at h = 0")


def _extract_generator_side(value: LoopValue, sign: int) -> tuple[dict[int, Poly], RatFunc, RatFunc]:
    """Convert E-basis weights to generator coefficients for one branch side.

    Returns ({d: coefficient Poly in h}, elementary remainder in u, log
    coefficient in h).  E(d) = 2*Gen(d) - sign * offset(u).
    """
    coeffs: dict[int, Poly] = {}
    elem = value.elem
    for d, c in value.e.items():
        if not c.is_polynomial():
            raise StructuralError(
                f"generator coefficient for E({d}) is not polynomial in h: {c!r}"
            )
        p = c.as_poly()
        coeffs[d] = 2 * p
        elem = elem - Fraction(sign) * _h_to_u(RatFunc(p)) * RatFunc(_E_OFFSET[d])
    return coeffs, elem, value.log


def _as_odd_poly(elem: RatFunc, what: str) -> Poly:
    if not elem.is_polynomial():
        raise StructuralError(f"{what} did not reduce to a polynomial: {elem!r}")
    p = elem.as_poly()
    if not p.is_odd():
        raise StructuralError(f"{what} is not odd in u: {p!r}")
    return p


def melnikov_decompose(spec: PerturbationSpec) -> Decomposition:
    """Assemble the exact generator decomposition of I(h) for a spec.

    I(h) = int_{upper} (g+ dx - f+ dy) + int_{lower} (g- dx - f- dy) with
    f, g the sparse monomial sums of the spec.
    """
    upper = _zero_loop()
    lower = _zero_loop()
    for (i, j), c in spec.b_plus.items():
        upper = upper + monomial_dx(i, j, 1).scale(c)
    for (i, j), c in spec.a_plus.items():
        upper = upper + monomial_dy(i, j, 1).scale(-c)
    for (i, j), c in spec.b_minus.items():
        lower = lower + monomial_dx(i, j, -1).scale(c)
    for (i, j), c in spec.a_minus.items():
        lower = lower + monomial_dy(i, j, -1).scale(-c)

    up_coeffs, up_elem, up_log = _extract_generator_side(upper, 1)
    lo_coeffs, lo_elem, lo_log = _extract_generator_side(lower, -1)
    phi_total = _as_odd_poly(up_elem + lo_elem, "elementary remainder")
    log_total = up_log + lo_log
    if not log_total.is_polynomial():
        raise StructuralError(f"log coefficient is not polynomial in h: {log_total!r}")
    log_poly = log_total.as_poly()

    cap_h, cap_0 = _phi_caps(spec.n)
    phi_h = Poly.zero()
    phi_0 = phi_total
    # Peel leading terms into the h-weighted odd polynomial when the plain
    # remainder exceeds its degree cap (h has degree 4 in u).
    while phi_0.degree() > cap_0:
        d = phi_0.degree()
        lead = phi_0.leading() * 64  # leading coefficient of h in u is 1/64
        term = Poly.monomial(d - 4, lead)
        phi_h = phi_h + term
        phi_0 = phi_0 - H_OF_U * term

    def side(coeffs: dict[int, Poly], d: int) -> Poly:
        return coeffs.get(d, Poly.zero())

    return Decomposition(
        n=spec.n,
        alpha_p=side(up_coeffs, -1),
        beta_p=side(up_coeffs, 1),
        gamma_p=side(up_coeffs, 2),
        alpha_m=side(lo_coeffs, -1),
        beta_m=side(lo_coeffs, 1),
        gamma_m=side(lo_coeffs, 2),
        phi_h=phi_h,
        phi_0=phi_0,
        log_h=log_poly,
    )


@dataclass(frozen=True)
class GeneratorFragment:
    """One monomial integral I_{i,j} or J_{i,j} on the generator basis."""

    i: int
    j: int
    sign: int
    alpha: Poly
    beta: Poly
    gamma: Poly
    phi: Poly
    log_h: Poly


def reduce_to_generators(i: int, j: int, sign: int = 1) -> GeneratorFragment:
    """Express I_{i,j} (sign=+1) or J_{i,j} (sign=-1) on the generators.

    The result is alpha(h) G00 + beta(h) G20 + gamma(h) G30 + phi(u)
    + log_h(h) ln((1+u)/(1-u)) with G the I- or J-generators of the same
    branch.  The logarithm genuinely occurs (for example at (i,j) = (1,1)).
    """
    if i + j < 0:
        raise DomainError("reduce_to_generators requires i + j >= 0")
    value = half_loop_ij(i, j, sign)
    coeffs, elem, log = _extract_generator_side(value, sign)
    phi = _as_odd_poly(elem, f"remainder of ({i},{j})")
    if not log.is_polynomial():
        raise StructuralError(f"log coefficient of ({i},{j}) is not polynomial: {log!r}")
    return GeneratorFragment(
        i=i,
        j=j,
        sign=sign,
        alpha=coeffs.get(-1, Poly.zero()),
        beta=coeffs.get(1, Poly.zero()),
        gamma=coeffs.get(2, Poly.zero()),
        phi=phi,
        log_h=log.as_poly(),
    )


@dataclass(frozen=True)
class MonomialReduction:
    """dy-monomial weights and exact boundary polynomials for a spec.

    xi[(i, j)] weights I_{i,j}, eta[(i, j)] weights J_{i,j}; boundary_p and
    boundary_m collect the exact odd u-polynomials produced by converting
    dx-monomials and the i = 0 dy-monomials on each branch.
    """

    xi: dict[tuple[int, int], Fraction]
    eta: dict[tuple[int, int], Fraction]
    boundary_p: Poly
    boundary_m: Poly


def reduce_monomials(spec: PerturbationSpec) -> MonomialReduction:
    """Convert all spec monomials to weighted I_{i,j}/J_{i,j} plus boundaries."""
    xi: dict[tuple[int, int], Fraction] = {}
    eta: dict[tuple[int, int], Fraction] = {}
    boundary = {1: Poly.zero(), -1: Poly.zero()}

    def bump(table: dict, key: tuple[int, int], c: Fraction) -> None:
        table[key] = table.get(key, Fraction(0)) + c
        if table[key] == 0:
            del table[key]

    for sign, a_side, b_side, table in (
        (1, spec.a_plus, spec.b_plus, xi),
        (-1, spec.a_minus, spec.b_minus, eta),
    ):
        for (i, j), c in a_side.items():
            # -c * int x^i y^j dy = -c * i * Gen_{i-1, j} (pure boundary at i=0).
            if i == 0:
                boundary[sign] = boundary[sign] - c * chord_integral(0, j) * Fraction(sign, 2)
            else:
                bump(table, (i - 1, j), -c * i)
        for (i, j), c in b_side.items():
            # c * int x^i y^j dx = -c * j * Gen_{i, j-1} + boundary.
            if j > 0:
                bump(table, (i, j - 1), -c * j)
                extra = chord_integral(i + 1, j - 1) * Fraction(j * sign, 2 * (i + 1))
            else:
                extra = Poly.zero()
            boundary[sign] = boundary[sign] + c * (extra - Fraction(sign) * chord_integral(i, j))
    return MonomialReduction(xi=xi, eta=eta, boundary_p=boundary[1], boundary_m=boundary[-1])
