import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.algebra import Signature, bracket, compose_bracket, partial
from darbouxkit.derham import (
    check_vector_field,
    contract,
    contraction,
    de_rham,
    de_rham_derivation,
    euler_field,
    exactness_witness,
    lie_derivative,
    lie_derivative_op,
    vector_field,
)
from darbouxkit.errors import InvalidVectorField, NoWitnessError, PreconditionError
from darbouxkit.random_models import random_element, random_signature, random_vector_field

seeds = st.integers(0, 10**6)
SIG = Signature([("x", 0), ("y", -1)])


def test_de_rham_examples():
    s = SIG
    assert de_rham(s.parse("x^3")) == s.parse("3*x^2*dx")
    assert de_rham(s.xi("x")).is_zero()
    assert de_rham(s.parse("y*dx")) == s.parse("dy*dx")


def test_contraction_examples():
    s = SIG
    w = s.parse("dy*dx")
    assert contract(partial(s, "x"), w) == s.xi("y")
    assert contract(partial(s, "y"), w) == s.xi("x")
    assert contract(partial(s, "x"), s.parse("x^2*y")).is_zero()


def test_euler_examples():
    s = SIG
    e = euler_field(s)
    f = s.parse("x^2*y")
    assert lie_derivative(e, f) == -f
    assert lie_derivative(e, de_rham(f)) == -de_rham(f)
    a = s.parse("dy*dx")
    assert lie_derivative(e, a) == a * -1


def test_exactness_witness_examples():
    s = SIG
    a = s.parse("dy*dx")
    b = exactness_witness(a)
    assert de_rham(b) == a
    c = de_rham(s.parse("y*dx"))
    assert de_rham(exactness_witness(c)) == c
    top = Signature([("x", 0), ("w", 0)])
    with pytest.raises(NoWitnessError):
        exactness_witness(top.parse("dx*dw"))
    with pytest.raises(PreconditionError):
        exactness_witness(s.parse("x*dy"))


def test_vector_fields_reject_forms():
    s = SIG
    with pytest.raises(InvalidVectorField):
        check_vector_field(vector_field(s, {"y": s.parse("dx")}, -1))


@given(seeds)
def test_de_rham_squares_to_zero(seed):
    rng = random.Random(seed)
    sig = random_signature(rng)
    a = random_element(sig, rng, weight=rng.randint(0, 2))
    assert de_rham(de_rham(a)).is_zero()


@given(seeds)
def test_cartan_identities(seed):
    rng = random.Random(seed)
    sig = random_signature(rng)
    x = random_vector_field(sig, rng, rng.randint(-2, 1))
    y = random_vector_field(sig, rng, rng.randint(-2, 1))
    a = random_element(sig, rng, weight=rng.randint(0, 2))
    ix, iy = contraction(x), contraction(y)
    lx, ly = lie_derivative_op(x), lie_derivative_op(y)
    ddr = de_rham_derivation(sig)
    assert compose_bracket(ix, ddr, a) == lx(a)
    assert compose_bracket(ddr, lx, a).is_zero()
    assert compose_bracket(ix, iy, a).is_zero()
    assert compose_bracket(lx, iy, a) == contraction(bracket(x, y))(a)
    assert compose_bracket(lx, ly, a) == lie_derivative_op(bracket(x, y))(a)


@given(seeds)
def test_euler_weight_formula(seed):
    rng = random.Random(seed)
    sig = random_signature(rng)
    a = random_element(sig, rng, weight=rng.randint(0, 2))
    if a.is_zero():
        return
    m, p = a.bidegree()
    assert lie_derivative(euler_field(sig), a) == a * (m + p)
    alpha = de_rham(a)
    if not alpha.is_zero() and m + p != 0:
        beta = exactness_witness(alpha)
        assert de_rham(beta) == alpha
        assert beta == contract(euler_field(sig), alpha) * Fraction(1, m + p)
