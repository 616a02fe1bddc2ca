"""Elliptic integral evaluators against independent mpmath and quadrature oracles."""

import math
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ellzero import elliptic
from ellzero.elliptic import DegenerateParameterWarning
from ellzero.errors import DomainError

mpmath.mp.dps = 30

K_GRID = [-0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.95]


@pytest.mark.parametrize("k", K_GRID)
def test_complete_k_e_against_mpmath(k):
    m = k * k
    assert elliptic.complete_k(k) == pytest.approx(float(mpmath.ellipk(m)), rel=1e-13)
    assert elliptic.complete_e(k) == pytest.approx(float(mpmath.ellipe(m)), rel=1e-13)


@pytest.mark.parametrize("k", [-0.8, -0.3, 0.2, 0.6, 0.9])
@pytest.mark.parametrize("mu", [0.1, 0.2, 0.45, 0.93])
def test_complete_pi_against_mpmath(k, mu):
    got = elliptic.complete_pi(mu, k)
    want = float(mpmath.ellippi(mu, k * k))
    assert got == pytest.approx(want, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
)
def test_carlson_rf_rd_against_mpmath(x, y, z):
    assert elliptic.carlson_rf(x, y, z) == pytest.approx(
        float(mpmath.elliprf(x, y, z)), rel=1e-12
    )
    assert elliptic.carlson_rd(x, y, z) == pytest.approx(
        float(mpmath.elliprd(x, y, z)), rel=1e-12
    )


@settings(max_examples=50, deadline=None)
@given(
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
)
def test_carlson_rj_rc_against_mpmath(x, y, z, p):
    assert elliptic.carlson_rj(x, y, z, p) == pytest.approx(
        float(mpmath.elliprj(x, y, z, p)), rel=1e-11
    )
    assert elliptic.carlson_rc(x, y) == pytest.approx(
        float(mpmath.elliprc(x, y)), rel=1e-12
    )


def test_carlson_homogeneity():
    lam = 3.7
    base = elliptic.carlson_rf(1.0, 2.0, 3.0)
    assert elliptic.carlson_rf(lam, 2 * lam, 3 * lam) == pytest.approx(
        base / math.sqrt(lam), rel=1e-13
    )


@pytest.mark.parametrize("k", [-0.7, 0.0, 0.4, 0.85])
@pytest.mark.parametrize("z", [0.1, 0.5, 0.9])
def test_incomplete_f_e_against_mpmath(z, k):
    phi = math.asin(z)
    m = k * k
    assert elliptic.incomplete_f(z, k) == pytest.approx(
        float(mpmath.ellipf(phi, m)), rel=1e-12
    )
    assert elliptic.incomplete_e(z, k) == pytest.approx(
        float(mpmath.ellipe(phi, m)), rel=1e-12
    )


@pytest.mark.parametrize("k", [0.3, 0.75])
@pytest.mark.parametrize("mu", [0.15, 0.35])
def test_incomplete_pi_against_quadrature(mu, k):
    z = 0.8

    def integrand(t):
        return 1.0 / (
            (1.0 - mu * t * t) * math.sqrt((1.0 - t * t) * (1.0 - k * k * t * t))
        )

    want, _ = quad(integrand, 0.0, z, epsabs=1e-13, epsrel=1e-13)
    assert elliptic.incomplete_pi(z, mu, k) == pytest.approx(want, rel=1e-10)


def test_complete_limits_and_symmetry():
    assert elliptic.complete_k(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert elliptic.complete_e(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    for k in (0.3, 0.8):
        assert elliptic.complete_k(-k) == elliptic.complete_k(k)
        assert elliptic.complete_e(-k) == elliptic.complete_e(k)


def test_complete_pi_reductions():
    for k in (0.2, 0.6):
        assert elliptic.complete_pi(0.0, k) == pytest.approx(
            elliptic.complete_k(k), rel=1e-13
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateParameterWarning)
            assert elliptic.complete_pi(k * k, k) == pytest.approx(
                elliptic.complete_e(k) / (1 - k * k), rel=1e-12
            )


def test_degenerate_parameter_warns():
    with pytest.warns(DegenerateParameterWarning):
        elliptic.complete_pi(0.25, 0.5)


def test_domain_errors():
    with pytest.raises(DomainError):
        elliptic.complete_k(1.0)
    with pytest.raises(DomainError):
        elliptic.complete_pi(1.0, 0.3)
    with pytest.raises(DomainError):
        elliptic.incomplete_f(1.5, 0.3)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("k", [0.3, 0.8])
def test_t_n_against_quadrature(n, k):
    z = 0.85

    def integrand(t):
        return t ** (2 * n) / math.sqrt((1.0 - t * t) * (1.0 - k * k * t * t))

    want, _ = quad(integrand, 0.0, z, epsabs=1e-13, epsrel=1e-13)
    assert elliptic.t_n(z, k, n) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_elliptic_triple_consistency():
    trip = elliptic.elliptic_triple(0.3, 0.6)
    assert trip.K == pytest.approx(elliptic.complete_k(0.6), rel=1e-15)
    assert trip.E == pytest.approx(elliptic.complete_e(0.6), rel=1e-15)
    assert trip.Pi == pytest.approx(elliptic.complete_pi(0.3, 0.6), rel=1e-15)
