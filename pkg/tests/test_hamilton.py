import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.acceptance import sample_specs
from darbouxkit.algebra import Signature, bracket
from darbouxkit.cdga import StandardFormCdga
from darbouxkit.darboux import DarbouxSpec, darboux_cdga, darboux_omega0, generate, parse_hamiltonian
from darbouxkit.derham import contract, de_rham
from darbouxkit.errors import DegenerateFormError
from darbouxkit.forms import ClosedForm, PhiPhiPair
from darbouxkit.hamilton import (
    HamiltonianSolver,
    check_poisson_axioms,
    differential_is_hamiltonian,
    extract_hamiltonian,
    iota_q_identity_residue,
    solver_for,
)
from darbouxkit.random_models import random_element

seeds = st.integers(0, 10**6)


@pytest.fixture(scope="module")
def cubic():
    return generate(DarbouxSpec("odd", 0, ["x"], [], "x^3"))


def test_vector_field_of_y(cubic):
    s = cubic.cdga.sig
    x = solver_for(cubic.cdga, cubic.omega).solve(s.gen("y1_1"))
    assert x.value("x") == s.one()
    assert x.value("y1_1").is_zero()
    assert contract(x, cubic.omega.leading) == s.xi("y1_1")


def test_vector_field_of_h_is_d(cubic):
    s = cubic.cdga.sig
    x = solver_for(cubic.cdga, cubic.omega).solve(cubic.H)
    assert x.value("y1_1") == s.parse("3*x^2")
    assert x.value("x").is_zero()
    assert solver_for(cubic.cdga, cubic.omega).solve(s.const(7)).values == {}


def test_unit_brackets(cubic):
    s = cubic.cdga.sig
    br = solver_for(cubic.cdga, cubic.omega).bracket
    x, y = s.gen("x"), s.gen("y1_1")
    assert br(x, y) == s.one()
    assert br(y, x) == -s.one()
    assert br(x, x).is_zero()
    assert br(cubic.H, y) == s.parse("3*x^2")


def test_unit_brackets_k2():
    pkg = generate(DarbouxSpec("strong2", 0, ["x"], [1], "0"))
    s = pkg.cdga.sig
    br = solver_for(pkg.cdga, pkg.omega).bracket
    x, y, z = s.gen("x"), s.gen("y2_1"), s.gen("z1")
    assert br(x, y) == -s.one()
    assert br(y, x) == s.one()
    assert br(z, z) == s.parse("1/2")


def test_derivation_rule_on_y_x_x(cubic):
    s = cubic.cdga.sig
    solver = solver_for(cubic.cdga, cubic.omega)
    ok, fails = check_poisson_axioms(solver, [(s.gen("y1_1"), s.gen("x"), s.gen("x"))])
    assert ok, fails
    assert solver.bracket(s.gen("y1_1"), s.parse("x^2")) == s.parse("-2*x")


def test_odd_self_bracket_vanishes():
    pkg = generate(DarbouxSpec("odd", 1, ["x"], [2], "y2_1*x"))
    s = pkg.cdga.sig
    f = s.parse("x*x1_1 + x1_2")
    assert solver_for(pkg.cdga, pkg.omega).bracket(f, f).is_zero()


def test_hamiltonian_map_reverses_brackets():
    pkg = generate(DarbouxSpec("odd", 1, ["x"], [2], "y2_1*x^2"))
    s = pkg.cdga.sig
    solver = solver_for(pkg.cdga, pkg.omega)
    f, g = s.parse("x^2*x1_1"), s.parse("x*y2_1")
    fg = solver.bracket(f, g)
    assert not fg.is_zero()
    lhs = solver.solve(fg)
    rhs = bracket(solver.solve(f), solver.solve(g))
    assert all(lhs.value(i) == -rhs.value(i) for i in range(s.n_alg))


@pytest.mark.parametrize("spec", sample_specs(11, 18), ids=lambda s: f"{s.family}-k{s.k}")
def test_poisson_axioms_on_models(spec):
    pkg = generate(spec)
    rng = random.Random(spec.hamiltonian)
    solver = solver_for(pkg.cdga, pkg.omega)
    triples = [tuple(random_element(pkg.cdga.sig, rng, max_terms=2, max_base_exp=1, max_factors=2) for _ in range(3))
               for _ in range(4)]
    ok, fails = check_poisson_axioms(solver, triples)
    assert ok, fails
    ok, rep = differential_is_hamiltonian(pkg.cdga, pkg.omega, pkg.H)
    assert ok, rep


def test_perturbed_differential_located(cubic):
    s = cubic.cdga.sig
    bad = StandardFormCdga(s, {"y1_1": s.parse("3*x^2 + 1")})
    ok, rep = differential_is_hamiltonian(bad, cubic.omega, cubic.H)
    assert not ok
    assert rep == {"X_H - d on y1_1": "-1"}


def test_k2_constant_obstruction_flagged():
    spec = DarbouxSpec("strong2", 0, ["x"], [1], "z1")
    a = darboux_cdga(spec)
    sig = a.sig
    omega = ClosedForm(-2, [darboux_omega0(spec, sig)])
    ok, rep = differential_is_hamiltonian(a, omega, parse_hamiltonian(spec, sig))
    assert not ok
    assert rep == {"{H,H}": "1/2 (nonzero constant: d^2 = 0 can hold while H^0 is trivial)"}
    assert not a.square_zero_residues()


def test_extract(cubic):
    hp = extract_hamiltonian(cubic.cdga, cubic.omega, cubic.pair)
    assert hp.H == cubic.H
    assert hp.report["X_H = d"] == "ok"


def test_extract_zero():
    sig = Signature([("x", 0), ("y", -1)])
    a = StandardFormCdga(sig, {})
    omega = ClosedForm(-1, [sig.parse("dy*dx")])
    hp = extract_hamiltonian(a, omega, PhiPhiPair(-1, sig.zero(), sig.parse("y*dx")))
    assert hp.H.is_zero()


def test_degenerate_form_refused():
    sig = Signature([("x", 0), ("y", -1)])
    with pytest.raises(DegenerateFormError):
        HamiltonianSolver(sig, sig.parse("x*dy*dx"), -1)
    with pytest.raises(DegenerateFormError):
        HamiltonianSolver(Signature([("x", 0), ("y", -1), ("u", -3)]), sig.zero(), -1)


@given(seeds)
def test_iota_q_identity(seed):
    rng = random.Random(seed)
    pkg = generate(sample_specs(seed, 9)[seed % 9])
    x = random_element(pkg.cdga.sig, rng, weight=rng.randint(0, 2), max_factors=2)
    assert iota_q_identity_residue(pkg.cdga, x).is_zero()


@given(seeds)
def test_hamiltonian_field_defining_property(seed):
    rng = random.Random(seed)
    pkg = generate(sample_specs(seed, 9)[seed % 9])
    f = random_element(pkg.cdga.sig, rng, max_factors=2)
    x = solver_for(pkg.cdga, pkg.omega).solve(f)
    assert contract(x, pkg.omega.leading) == de_rham(f)
