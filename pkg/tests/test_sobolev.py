import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_lab.errors import DomainError
from orlicz_lab.field import Field, Grid
from orlicz_lab.orlicz import luxemburg_norm
from orlicz_lab.sobolev import (
    GagliardoQuadrature,
    gagliardo_interval,
    gagliardo_modular,
    gagliardo_seminorm,
    sobolev_norm,
    spectral_multiplier,
    spectral_oracle,
    w1_seminorm,
)
from orlicz_lab.young import YoungFunction

POWER2 = YoungFunction.power(2)
ZYG = YoungFunction.zygmund(2, 1, 1)


@pytest.fixture(scope="module")
def q1(grid1):
    return GagliardoQuadrature.for_grid(grid1)


def test_constant_has_zero_modular(grid1, q1):
    assert gagliardo_modular(ZYG, 0.5, Field.constant(grid1, 3.0), q1) == pytest.approx(0.0, abs=1e-20)


def test_parseval_oracle_is_exact(gauss1, q1):
    for s in (0.3, 0.5, 0.8):
        assert gagliardo_modular(POWER2, s, gauss1, q1) == pytest.approx(spectral_oracle(s, gauss1, q1), rel=1e-12)


def test_single_mode_oracle(gauss1, grid1, q1):
    # c(s) read off the quadrature at one frequency, then the continuum formula
    s = 0.5
    m = spectral_multiplier(s, grid1, q1)
    xi = grid1.xi[0]
    j = int(np.argmin(np.abs(xi - 1.0)))
    c = m[j] / abs(xi[j]) ** (2 * s)
    # int |xi| pi exp(-xi^2/2) dxi / (2 pi) = 1
    oracle = c * 1.0
    assert gagliardo_modular(POWER2, s, gauss1, q1) == pytest.approx(oracle, rel=0.02)


def test_ring_refinement(gauss1, grid1):
    for A in (POWER2, ZYG):
        a = gagliardo_modular(A, 0.5, gauss1, GagliardoQuadrature.for_grid(grid1, ring_count=32))
        b = gagliardo_modular(A, 0.5, gauss1, GagliardoQuadrature.for_grid(grid1, ring_count=64))
        assert abs(a - b) / b < 0.01


def test_interval_contains_continuum(gauss1, q1):
    # for s = 1/2, n = 1 the continuum modular of exp(-x^2) is 2 pi
    iv = gagliardo_interval(POWER2, 0.5, gauss1, q1)
    assert iv.value <= 2 * math.pi <= iv.upper
    assert iv.inner > 0 and iv.tail > 0


def test_2d_parseval(grid2):
    u = Field.from_function(grid2, lambda x, y: np.exp(-(x**2 + 2 * y**2)))
    q = GagliardoQuadrature.for_grid(grid2, ring_count=16)
    assert gagliardo_modular(POWER2, 0.6, u, q) == pytest.approx(spectral_oracle(0.6, u, q), rel=1e-12)


def test_errors(gauss1, grid1, q1):
    with pytest.raises(DomainError):
        gagliardo_modular(POWER2, 1.0, gauss1, q1)
    with pytest.raises(DomainError):
        gagliardo_modular(POWER2, 0.5, gauss1, GagliardoQuadrature(4.0, 32, grid1.h / 2))
    with pytest.raises(DomainError):
        gagliardo_modular(POWER2, 0.5, gauss1, GagliardoQuadrature(40.0, 32, grid1.h))
    with pytest.raises(DomainError):
        gagliardo_modular(POWER2, 0.5, gauss1, GagliardoQuadrature(4.0, 0, grid1.h))


def test_seminorm_examples(gauss1, grid1, q1):
    assert gagliardo_seminorm(ZYG, 0.5, Field.zeros(grid1), q1).value == 0
    one = gagliardo_seminorm(ZYG, 0.5, gauss1, q1).value
    two = gagliardo_seminorm(ZYG, 0.5, 2 * gauss1, q1).value
    assert abs(two - 2 * one) <= 1e-6 * two
    for p in (1.5, 2.0, 3.0):
        A = YoungFunction.power(p)
        lhs = gagliardo_seminorm(A, 0.5, gauss1, q1).value
        rhs = gagliardo_modular(A, 0.5, gauss1, q1) ** (1 / p)
        assert abs(lhs - rhs) <= 1e-6 * rhs


def test_w1_examples():
    g = Grid(1, 256, math.pi)
    assert w1_seminorm(POWER2, Field.constant(g, 2.0)).value == pytest.approx(0.0, abs=1e-12)
    u = Field.from_function(g, np.sin)
    assert abs(w1_seminorm(POWER2, u).value - math.sqrt(math.pi)) < 1e-8
    a = w1_seminorm(ZYG, u).value
    b = w1_seminorm(ZYG, 3 * u).value
    assert abs(b - 3 * a) <= 1e-7 * b


def test_sobolev_norm_examples(gauss1, grid1, q1):
    assert sobolev_norm(POWER2, 0.5, Field.zeros(grid1), q1) == 0
    total = sobolev_norm(POWER2, 0.5, gauss1, q1)
    l2 = math.sqrt(math.sqrt(math.pi / 2))
    semi = math.sqrt(spectral_oracle(0.5, gauss1, q1))
    assert total == pytest.approx(l2 + semi, rel=1e-8)
    assert total >= luxemburg_norm(POWER2, gauss1).value
    s1 = sobolev_norm(POWER2, 1.0, gauss1)
    # |u'|^2 integrates to sqrt(pi/2)
    assert s1 == pytest.approx(l2 + math.sqrt(math.sqrt(math.pi / 2)), rel=1e-8)
    with pytest.raises(DomainError):
        sobolev_norm(POWER2, 1.5, gauss1, q1)


@given(st.floats(0.2, 5.0), st.floats(0.1, 0.9))
def test_modular_power2_scales_quadratically(c, s):
    g = Grid(1, 256, 8.0)
    u = Field.from_function(g, lambda x: np.exp(-(x**2)))
    q = GagliardoQuadrature.for_grid(g, ring_count=16)
    assert gagliardo_modular(POWER2, s, c * u, q) == pytest.approx(c**2 * gagliardo_modular(POWER2, s, u, q), rel=1e-10)
