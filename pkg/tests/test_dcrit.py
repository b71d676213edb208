from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.cdga import cotangent_restriction
from darbouxkit.darboux import generate, geometric_view
from darbouxkit.dcrit import (
    CriticalChart,
    cotangent_matrix_at,
    derived_critical_locus,
    hand_built_certificate,
    hessian_complex_at,
    identity_certificate,
    normalize_potential,
    relabel_certificate,
    verify_comparison,
)
from darbouxkit.errors import LocallyConstantError, PointError, ShapeError


def test_ideals():
    assert [str(g) for g in CriticalChart(["x"], "x^3").ideal()] == ["3*x^2"]
    assert [str(g) for g in CriticalChart(["x1", "x2"], "x1*x2").ideal()] == ["x2", "x1"]
    zero = generate(derived_critical_locus(CriticalChart(["x"], "0")))
    assert all(g.is_zero() for g in zero.cdga.h0_presentation())


def test_chart_is_the_k1_view():
    chart = CriticalChart(["u", "v"], "u^2*v - v^3")
    view = geometric_view(derived_critical_locus(chart))
    assert view.k == -1 and view.H == "u^2*v - v^3"
    pkg = generate(derived_critical_locus(chart))
    assert [str(g) for g in pkg.cdga.h0_presentation()] == [str(g) for g in chart.ideal()]


def test_potential_must_live_on_base():
    with pytest.raises(ShapeError):
        CriticalChart(["x"], "x*y").H()


def test_normalize_potential():
    out = normalize_potential(CriticalChart(["x"], "x^3 + 5"), [{"x": 0}])
    assert out.potential == "x^3"
    same = normalize_potential(CriticalChart(["x"], "x^3"), [{"x": 0}])
    assert same.potential == "x^3"
    with pytest.raises(LocallyConstantError):
        normalize_potential(CriticalChart(["x"], "x^3 - 3*x"), [{"x": 1}, {"x": -1}])
    with pytest.raises(PointError):
        normalize_potential(CriticalChart(["x"], "x^3"), [{"x": 1}])


def test_hessian_examples():
    assert hessian_complex_at(CriticalChart(["x"], "x^3"), {"x": 0}).matrix == [[0]]
    h = hessian_complex_at(CriticalChart(["x"], "x^2"), {"x": 0})
    assert h.matrix == [[2]] and h.ranks == (1, 1) and h.canonical_power == 2
    z = hessian_complex_at(CriticalChart(["x", "w"], "0"), {"x": 3, "w": 1})
    assert z.matrix == [[0, 0], [0, 0]]
    with pytest.raises(PointError):
        hessian_complex_at(CriticalChart(["x"], "x^2"), {"x": 1})


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-3, 3))
def test_hessian_equals_cotangent(a, b, c):
    # critical at the origin: no linear terms
    chart = CriticalChart(["u", "v"], f"{a}*u^2 + {b}*u*v + {c}*v^2 + u^3 - v^2*u")
    p = {"u": 0, "v": 0}
    assert hessian_complex_at(chart, p).matrix == cotangent_matrix_at(chart, p)


def test_cotangent_of_cubic_is_hessian():
    pkg = generate(derived_critical_locus(CriticalChart(["x"], "x^3")))
    assert [[str(e) for e in r] for r in cotangent_restriction(pkg.cdga).matrices[1]] == [["6*x"]]


@pytest.mark.parametrize("make", [identity_certificate, relabel_certificate])
def test_trivial_certificates(make):
    for chart in (CriticalChart(["x"], "x^3"), CriticalChart(["x1", "x2"], "x1*x2 + x1^3")):
        rep = verify_comparison(make(chart))
        assert rep.ok
        assert rep.witness_h.is_zero()


@pytest.mark.parametrize("c", ["1", "x", "2 - x^2"])
def test_hand_built_certificate(c):
    rep = verify_comparison(hand_built_certificate(c))
    assert rep.ok
    s = rep.witness_h.sig
    cz = s.parse(c.replace("x", "z"))
    assert rep.difference_h == -9 * s.parse("z^4") * cz
    assert rep.witness_h == rep.difference_h
    assert rep.witness_phi == -rep.difference_h
    assert [(j, jp, str(m)) for j, jp, m in rep.witness_terms] == [(0, 0, str(-cz))]


def test_broken_certificates_report_residues():
    cert = hand_built_certificate("1")
    cert.M = [["1"]]
    rep = verify_comparison(cert)
    assert not rep.ok
    assert set(rep.residues) == {
        "alpha(phi) - beta(phi') - d_dR Psi - d psi",
        "L_1 + sum I M",
        "e_1 dz coefficient",
    }
    cert = hand_built_certificate("1")
    cert.K = [["1"]]
    assert "beta d-compatibility on y1_1" in verify_comparison(cert).residues


def test_antisymmetry_of_n_enforced():
    cert = relabel_certificate(CriticalChart(["x1", "x2"], "x1*x2"))
    cert.N[0][1][0] = "1"
    rep = verify_comparison(cert)
    assert "N antisymmetry (1,2,1)" in rep.residues


def test_certificate_shapes():
    cert = hand_built_certificate("1")
    cert.M = [["1", "0"]]
    with pytest.raises(ShapeError):
        verify_comparison(cert)


def test_witness_is_a_fraction_free_polynomial():
    rep = verify_comparison(hand_built_certificate("1/3"))
    assert rep.difference_h == rep.witness_h
    assert rep.witness_h.terms == {((0, 4),): Fraction(-3)}
