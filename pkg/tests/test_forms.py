import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.acceptance import sample_specs
from darbouxkit.algebra import Signature
from darbouxkit.cdga import StandardFormCdga, parse_point
from darbouxkit.darboux import DarbouxSpec, generate
from darbouxkit.derham import contract, de_rham, euler_field
from darbouxkit.errors import CheckFailed, DegreeMismatchError
from darbouxkit.forms import (
    ClosedForm,
    Cochain,
    EquivalenceCertificate,
    PhiPhiPair,
    cc_to_nc,
    check_closed,
    check_equivalence,
    check_pair,
    is_nondegenerate_at,
    is_strictly_nondegenerate,
    mixed_differential,
    normalize_pair,
    pairing_matrices,
)
from darbouxkit.random_models import random_element

seeds = st.integers(0, 10**6)


@pytest.fixture
def cubic():
    sig = Signature([("x", 0), ("y", -1)])
    return StandardFormCdga(sig, {"y": sig.parse("3*x^2")})


def test_darboux_form_closed(cubic):
    s = cubic.sig
    assert check_closed(cubic, ClosedForm(-1, [s.parse("dy*dx")]))[0]
    assert check_closed(cubic, ClosedForm(-1, [s.zero()]))[0]


def test_wrong_candidate_not_closed(cubic):
    s = cubic.sig
    ok, res = check_closed(cubic, ClosedForm(-2, [s.parse("dy*dy")]))
    assert not ok
    assert res["d w0"] == s.parse("-12*x*dx*dy")


def test_form_bidegree_enforced(cubic):
    with pytest.raises(DegreeMismatchError):
        ClosedForm(-2, [cubic.sig.parse("dy*dx")])


def test_cc_to_nc(cubic):
    s = cubic.sig
    pair = PhiPhiPair(-1, s.parse("-x^3"), s.parse("y*dx"))
    assert cc_to_nc(cubic, pair).leading == s.parse("dy*dx")
    zero = PhiPhiPair(-1, s.zero(), s.zero())
    assert cc_to_nc(cubic, zero).leading.is_zero()
    with pytest.raises(CheckFailed):
        cc_to_nc(cubic, PhiPhiPair(-1, s.parse("x^3"), s.parse("y*dx")))


def test_pair_is_a_cyclic_cocycle(cubic):
    s = cubic.sig
    c = Cochain(1, {-1: s.parse("-x^3"), 0: s.parse("y*dx")})
    assert mixed_differential(cubic, c, "CC").components == {}
    bad = Cochain(1, {-1: s.parse("y*x")})
    assert mixed_differential(cubic, bad, "CC").components


@given(seeds)
def test_mixed_differential_squares_to_zero(seed):
    rng = random.Random(seed)
    a = generate(sample_specs(seed % 7, 9)[seed % 9]).cdga
    support = {"NC": range(0, 3), "CC": range(-2, 1), "PC": range(-1, 2)}
    for kind, idx in support.items():
        comps = {i: random_element(a.sig, rng, weight=i + 2, max_factors=2) for i in idx}
        c = Cochain(2, comps)
        twice = mixed_differential(a, mixed_differential(a, c, kind), kind)
        assert twice.components == {}


@given(seeds)
def test_equivalence_certificates(seed):
    rng = random.Random(seed)
    pkg = generate(sample_specs(1, 9)[seed % 9])
    a, w = pkg.cdga, pkg.omega
    k = w.k
    alpha = [random_element(a.sig, rng, k - 3 - 2 * i, 2 + i, max_factors=2) for i in range(2)]
    d = a.total_differential()
    shifted = ClosedForm(k, [w.leading - d(alpha[0]), -de_rham(alpha[0]) - d(alpha[1]), -de_rham(alpha[1])])
    assert check_equivalence(a, w, shifted, EquivalenceCertificate(alpha))[0]
    if not d(alpha[0]).is_zero():
        assert not check_equivalence(a, w, shifted, EquivalenceCertificate([]))[0]


def test_gauge_change_of_pairs_gives_equivalent_forms():
    pkg = generate(DarbouxSpec("odd", 1, ["x"], [1], "y2_1*x^2"))
    a, pair = pkg.cdga, pkg.pair
    s = a.sig
    d = a.total_differential()
    big = s.parse("x*y3_1 + x1_1*y2_1")
    small = s.parse("y2_1*x1_1*dx1_1 + y3_1*x1_1*dx")
    other = PhiPhiPair(pair.k, pair.Phi + d(big), pair.phi + de_rham(big) + d(small))
    assert check_pair(a, other)[0]
    w, w2 = cc_to_nc(a, pair), cc_to_nc(a, other)
    cert = EquivalenceCertificate([de_rham(small)])
    assert check_equivalence(a, w, w2, cert)[0]


def test_pairing_blocks():
    k1 = generate(DarbouxSpec("odd", 0, ["x"], [], "x^3"))
    blocks = pairing_matrices(k1.cdga, k1.omega)
    assert [[str(e) for e in row] for b in blocks for row in b.matrix] == [["1"], ["1"]]
    weak = generate(DarbouxSpec("weak2", 0, ["x"], [2], "z1*x + z2*x", invertibles=["x"], q=["x", "-x"]))
    mid = [b for b in pairing_matrices(weak.cdga, weak.omega) if b.slot == -1][0]
    assert [[str(e) for e in row] for row in mid.matrix] == [["2*x", "0"], ["0", "-2*x"]]
    assert is_strictly_nondegenerate(weak.cdga, weak.omega)[0]


@pytest.mark.parametrize("spec", sample_specs(5, 18), ids=lambda s: f"{s.family}-k{s.k}")
def test_middle_block_parity(spec):
    pkg = generate(spec)
    k = spec.k
    for b in pairing_matrices(pkg.cdga, pkg.omega):
        if 2 * b.slot != k:
            continue
        n = len(b.rows)
        sign = -1 if k % 4 == 0 else 1
        for i in range(n):
            for j in range(n):
                assert b.matrix[i][j] == b.matrix[j][i] * sign


def test_nondegeneracy_failures(cubic):
    s = cubic.sig
    w = ClosedForm(-1, [s.parse("x*dy*dx")])
    assert is_nondegenerate_at(cubic, w, parse_point(s, "x=1"))[0]
    assert not is_nondegenerate_at(cubic, w, parse_point(s, "x=0"))[0]
    assert not is_strictly_nondegenerate(cubic, w)[0]
    assert not is_nondegenerate_at(cubic, ClosedForm(-1, [s.zero()]), parse_point(s, "x=0"))[0]


def test_normalize_pair(cubic):
    s = cubic.sig
    pair = PhiPhiPair(-1, s.parse("-x^3"), s.parse("y*dx"))
    e = euler_field(s)
    out = normalize_pair(cubic, pair)
    assert contract(e, out.phi).is_zero()
    junk = s.parse("x^2*y")
    d = cubic.total_differential()
    shifted = PhiPhiPair(-1, pair.Phi + d(junk), pair.phi + de_rham(junk))
    out2 = normalize_pair(cubic, shifted)
    assert contract(e, out2.phi).is_zero()
    assert de_rham(out2.phi) == s.parse("dy*dx")
    zero = PhiPhiPair(-1, s.zero(), s.zero())
    assert normalize_pair(cubic, zero).phi.is_zero()
