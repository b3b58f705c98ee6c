import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_lab.errors import ConjugateRangeError, DomainError, ExtrapolationError
from orlicz_lab.young import (
    YoungFunction,
    conjugate,
    delta2_indices,
    inverse_product_bracket,
    parse_young,
    power_envelope_violation,
    young_inequality_violation,
)

ANALYTIC = [
    YoungFunction.power(2),
    YoungFunction.power(1.5),
    YoungFunction.power_sum(2, 4),
    YoungFunction.zygmund(2, 1, 1),
    YoungFunction.iterated_log(2, 1, 1),
    YoungFunction.power_log_integral(2, 1),
]


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_power_conjugate_matches_calculus(p):
    A = YoungFunction.power(p)
    Ah = conjugate(A)
    pp = p / (p - 1)
    t = np.geomspace(1e-3, 1e3, 500)
    oracle = (p - 1) * p ** (-pp) * t**pp
    assert np.max(np.abs(Ah(t) / oracle - 1)) < 1e-4


@pytest.mark.parametrize("A", ANALYTIC, ids=lambda A: A.name)
def test_axioms(A):
    t = np.geomspace(1e-6, 1e6, 400)
    v = A(t)
    assert A(0.0) == 0
    assert np.all(np.diff(v) > 0)
    # convexity via nondecreasing secant slopes
    slopes = np.diff(v) / np.diff(t)
    assert np.all(np.diff(slopes) >= -1e-9 * slopes[1:])


@pytest.mark.parametrize("A", ANALYTIC, ids=lambda A: A.name)
def test_density_is_derivative(A):
    t = np.geomspace(1e-3, 1e3, 50)
    eps = 1e-6
    fd = (A(t * (1 + eps)) - A(t * (1 - eps))) / (2 * eps * t)
    assert np.allclose(A.density(t), fd, rtol=1e-6)


@pytest.mark.parametrize("A", ANALYTIC, ids=lambda A: A.name)
def test_inverse_roundtrip(A):
    t = np.geomspace(1e-6, 1e6, 100)
    assert np.allclose(A.inverse(A(t)), t, rtol=1e-10)


@pytest.mark.parametrize("A", ANALYTIC, ids=lambda A: A.name)
def test_young_inequality_and_bracket(A):
    Ah = conjugate(A)
    t = np.geomspace(1e-3, 1e3, 200)
    assert young_inequality_violation(A, Ah, t, t) <= 1e-9
    br = inverse_product_bracket(A, Ah, np.geomspace(1e-4, 1e4, 200))
    assert np.all(br >= 1 - 1e-6) and np.all(br <= 2 + 1e-6)


def test_conjugate_involution_power():
    A = YoungFunction.power(3)
    back = conjugate(conjugate(A))
    t = np.geomspace(1e-2, 1e2, 100)
    assert np.max(np.abs(back(t) / A(t) - 1)) < 1e-8


@pytest.mark.parametrize("A", [YoungFunction.zygmund(2, 1, 1), YoungFunction.iterated_log(2, 1, 1)], ids=lambda A: A.name)
def test_conjugate_involution_log_kinds(A):
    back = conjugate(conjugate(A))
    t = np.geomspace(1e-2, 1e2, 100)
    assert np.max(np.abs(back(t) / A(t) - 1)) < 1e-8


def test_zygmund_indices():
    idx = delta2_indices(YoungFunction.zygmund(2, 1, 1))
    assert idx.p_minus == pytest.approx(2, abs=1e-9)
    assert idx.p_plus == pytest.approx(3, abs=1e-9)
    assert idx.delta2 and idx.conjugate_delta2


@pytest.mark.parametrize(
    "A,expected",
    [(YoungFunction.power(2.5), (2.5, 2.5)), (YoungFunction.power_sum(2, 4), (2, 4)), (YoungFunction.iterated_log(2, 1, 1), (2, 4))],
)
def test_index_pairs(A, expected):
    idx = delta2_indices(A)
    assert (idx.p_minus, idx.p_plus) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("A", ANALYTIC, ids=lambda A: A.name)
def test_power_envelope(A):
    assert power_envelope_violation(A) <= 1e-9


def test_parse_roundtrip():
    for text in ("power:p=2", "powersum:p=2,q=3", "zygmund:p=2,q=1,r=1", "iterlog:p=2,a=1,b=1", "plogint:p=2,a=1"):
        A = parse_young(text)
        B = parse_young(A.name)
        assert (B.kind, B.params) == (A.kind, A.params)


@pytest.mark.parametrize("text", ["cube:p=2", "power", "power:p=x", "power:q=2", "power:p=1"])
def test_parse_errors(text):
    with pytest.raises(DomainError):
        parse_young(text)


def test_domain_errors():
    with pytest.raises(DomainError):
        YoungFunction.power(2)(-1.0)
    with pytest.raises(DomainError):
        YoungFunction.power(0.5)


def test_tabulated_extrapolation_and_conjugate_range():
    t = np.geomspace(1e-2, 1e2, 200)
    T = YoungFunction.tabulated(t, t**2, 2 * t)
    assert T(3.0) == pytest.approx(9.0, rel=1e-8)
    with pytest.raises(ExtrapolationError):
        T(1e3)
    assert isinstance(ConjugateRangeError(2.0).t, float)


@given(st.floats(1.2, 4.0), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_young_inequality_property(p, a, b):
    A = YoungFunction.power(p)
    pp = p / (p - 1)
    Ah_val = (p - 1) * p ** (-pp) * b**pp
    assert a * b <= A(a) + Ah_val + 1e-12 * (a * b)


@given(st.floats(1e-4, 1e4))
def test_zygmund_inverse_property(y):
    A = YoungFunction.zygmund(2, 1, 1)
    assert A(A.inverse(y)) == pytest.approx(y, rel=1e-10)
    assert math.isfinite(A.inverse(y))
