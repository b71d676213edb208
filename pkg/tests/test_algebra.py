import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.algebra import (
    Derivation,
    Signature,
    bracket,
    diff,
    factor_unit,
    inverse_unit,
    is_unit,
    partial,
)
from darbouxkit.derham import euler_field
from darbouxkit.errors import (
    DegreeMismatchError,
    NotHomogeneousError,
    NotInvertibleError,
    ParseError,
    SignatureError,
)
from darbouxkit.random_models import random_element, random_signature, random_vector_field

seeds = st.integers(0, 10**6)


def naive_product(sig, word):
    """Sort a word of generator indices by bubble sort, tracking the sign of
    every transposition of two odd neighbours; odd squares vanish."""
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                if sig.odd[w[j]] and sig.odd[w[j + 1]]:
                    sign = -sign
                w[j], w[j + 1] = w[j + 1], w[j]
    for a, b in zip(w, w[1:]):
        if a == b and sig.odd[a]:
            return 0, ()
    mono = {}
    for g in w:
        mono[g] = mono.get(g, 0) + 1
    return sign, tuple(sorted(mono.items()))


class TestKoszul:
    sig = Signature([("a", 0), ("x", -1), ("y", -1), ("u", -2), ("v", -2)])

    def test_odd_generators_anticommute(self):
        x, y = self.sig.gen("x"), self.sig.gen("y")
        assert x * y == -(y * x)
        assert (x * x).is_zero()

    def test_even_generators_commute(self):
        u, v = self.sig.gen("u"), self.sig.gen("v")
        assert u * v == v * u

    def test_square_term_dies(self):
        s = self.sig
        x, u = s.gen("x"), s.gen("u")
        assert (2 * x + u) * x == u * x

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
    def test_products_match_transposition_count(self, word):
        s = self.sig
        prod = s.one()
        for g in word:
            prod = prod * s.gen(g)
        sign, mono = naive_product(s, word)
        if sign == 0:
            assert prod.is_zero()
        else:
            assert prod.terms == {mono: Fraction(sign)}


class TestRingAxioms:
    @given(seeds)
    def test_associative_and_distributive(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng)
        a, b, c = (random_element(sig, rng, weight=rng.randint(0, 1)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @given(seeds)
    def test_graded_commutative(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng)
        a = random_element(sig, rng, weight=rng.randint(0, 1))
        b = random_element(sig, rng, weight=rng.randint(0, 1))
        if a.is_zero() or b.is_zero():
            return
        sign = -1 if (a.degree() * b.degree()) % 2 else 1
        assert a * b == b * a * sign

    @given(seeds)
    def test_parse_print_round_trip(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng)
        a = random_element(sig, rng, weight=rng.randint(0, 2))
        assert sig.parse(str(a)) == a
        assert str(sig.parse(str(a))) == str(a)


class TestDerivations:
    def test_partial_of_cube(self):
        sig = Signature([("x", 0)])
        assert diff(sig.parse("x^3"), "x") == sig.parse("3*x^2")

    def test_partials_with_signs(self):
        sig = Signature([("x", 0), ("y", -1), ("y1", -1), ("y2", -1)])
        assert diff(sig.parse("x^2*y"), "x") == sig.parse("2*x*y")
        assert diff(sig.gen("y"), "y") == sig.one()
        p = sig.parse("y1*y2")
        assert diff(p, "y1") == sig.gen("y2")
        assert diff(p, "y2") == -sig.gen("y1")

    def test_euler_eigenvalues(self):
        sig = Signature([("x", 0), ("y", -1), ("u", -2)])
        e = euler_field(sig)
        f = sig.parse("x^2*u + y*y + 3*u")
        assert e(f) == f * -2

    def test_odd_derivation_sign_rule(self):
        sig = Signature([("x", 0), ("y", -1), ("u", -2)])
        d = Derivation(sig, 1, 0, {sig.idx("y"): sig.parse("3*x^2"), sig.idx("u"): sig.parse("x*y")})
        y, u = sig.gen("y"), sig.gen("u")
        assert d(y * u) == sig.parse("3*x^2") * u - y * d(u)
        assert d(y * u) == sig.parse("3*x^2*u")

    def test_bracket_of_odd_with_itself(self):
        sig = Signature([("x", 0), ("y", -1), ("u", -2)])
        d = Derivation(sig, 1, 0, {sig.idx("u"): sig.gen("y"), sig.idx("y"): sig.gen("x")})
        b = bracket(d, d)
        u = sig.gen("u")
        assert b(u) == 2 * d(d(u))
        assert not b(u).is_zero()

    def test_partials_commute_and_euler_kills_base_partial(self):
        sig = Signature([("x", 0), ("w", 0), ("y", -1)])
        px, pw = partial(sig, "x"), partial(sig, "w")
        assert all(bracket(px, pw).value(i).is_zero() for i in range(sig.n_alg))
        e = euler_field(sig)
        assert all(bracket(e, px).value(i).is_zero() for i in range(sig.n_alg))

    @given(seeds)
    def test_leibniz(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng)
        deg = rng.randint(-2, 1)
        x = random_vector_field(sig, rng, deg)
        a, b = random_element(sig, rng), random_element(sig, rng)
        if a.is_zero():
            return
        sign = -1 if (deg * a.degree()) % 2 else 1
        assert x(a * b) == x(a) * b + a * x(b) * sign

    @given(seeds)
    def test_graded_jacobi(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng, 5)
        dx, dy, dz = (rng.randint(-1, 1) for _ in range(3))
        x, y, z = (random_vector_field(sig, rng, d) for d in (dx, dy, dz))
        lhs = bracket(x, bracket(y, z))
        s = -1 if (dx * dy) % 2 else 1
        rhs = bracket(bracket(x, y), z) + bracket(y, bracket(x, z)).scale(s)
        assert all(lhs.value(i) == rhs.value(i) for i in range(sig.n_alg))


class TestUnits:
    sig = Signature([("x", 0), ("w", 0), ("y", -1)], invertibles=["x", "1 + w"])

    def test_division_by_unit(self):
        s = self.sig
        q = s.parse("x^2*(1 + w)")
        assert is_unit(q)
        inv = inverse_unit(q)
        assert q * inv == s.one()
        f = s.parse("x^3*y + x^2*w*y")
        assert (f * inv) * q == f
        assert f * inv == s.parse("(x*y + w*y)/(1 + w)")

    def test_cancellation(self):
        s = self.sig
        assert s.parse("(x + x*w)/(1 + w)") == s.gen("x")
        assert str(s.parse("(x + x*w)/(1 + w)")) == "x"

    def test_non_units_refused(self):
        s = self.sig
        assert factor_unit(s.parse("x + 1")) is None
        with pytest.raises(NotInvertibleError):
            inverse_unit(s.parse("w"))
        with pytest.raises(ParseError):
            s.parse("y/w")

    def test_invertible_must_be_base_polynomial(self):
        with pytest.raises(SignatureError):
            Signature([("x", 0), ("y", -1)], invertibles=["y"])
        with pytest.raises(SignatureError):
            Signature([("x", 0)], invertibles=["2"])


class TestShapes:
    def test_bad_signatures(self):
        with pytest.raises(SignatureError):
            Signature([("x", 1)])
        with pytest.raises(SignatureError):
            Signature([("x", 0), ("x", -1)])
        with pytest.raises(SignatureError):
            Signature([("x", 0), ("dx", -1)])
        with pytest.raises(SignatureError):
            Signature([("i", 0)])

    def test_mixed_signatures(self):
        a = Signature([("x", 0)])
        b = Signature([("x", 0), ("y", -1)])
        with pytest.raises(SignatureError):
            a.gen("x") * b.gen("x")

    def test_inhomogeneous(self):
        sig = Signature([("x", 0), ("y", -1)])
        with pytest.raises(NotHomogeneousError):
            sig.parse("x + y").bidegree()

    def test_derivation_degree_checked(self):
        sig = Signature([("x", 0), ("y", -1)])
        with pytest.raises(DegreeMismatchError):
            Derivation(sig, 0, 0, {sig.idx("y"): sig.gen("x")}).check_degrees()



@given(seeds, st.integers(0, 3), st.integers(0, 2))
def test_fractions_print_and_parse_back(seed, a, b):
    rng = random.Random(seed)
    sig = Signature([("x", 0), ("w", 0), ("y", -1), ("u", -2)], invertibles=["x", "w^2 + 1"])
    e = random_element(sig, rng, weight=rng.randint(0, 1))
    q = sig.parse(f"x^{a}*(w^2 + 1)^{b}")
    f = e * inverse_unit(q)
    assert sig.parse(str(f)) == f
    assert f * q == e
