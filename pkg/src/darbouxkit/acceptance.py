"""The acceptance suite as plain functions, shared by ``darbouxkit selftest``
and the test-suite.  Every criterion draws from its own seeded generator so
reports are reproducible criterion by criterion."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Signature, bracket, compose_bracket
from .cdga import cotangent_restriction, is_minimal_at
from .darboux import DarbouxSpec, check_master, darboux_cdga, generate, perturb_hamiltonian
from .dcrit import (
    CriticalChart,
    derived_critical_locus,
    hand_built_certificate,
    hessian_complex_at,
    identity_certificate,
    relabel_certificate,
    verify_comparison,
)
from .derham import (
    contract,
    contraction,
    de_rham,
    de_rham_derivation,
    euler_field,
    exactness_witness,
    lie_derivative_op,
)
from .errors import DarbouxError
from .forms import check_closed, check_pair, is_strictly_nondegenerate
from .hamilton import (
    check_poisson_axioms,
    differential_is_hamiltonian,
    extract_hamiltonian,
    iota_q_identity_residue,
    solver_for,
)
from .random_models import random_element, random_signature, random_vector_field


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"criterion {self.number} [{'PASS' if self.ok else 'FAIL'}] {self.title}: {self.detail}"


def _rng(seed: int, n: int) -> random.Random:
    return random.Random(f"{seed}:{n}")


def _poly(rng: random.Random, xs: list, terms: int = 2, gaussian: bool = False) -> str:
    out = []
    for _ in range(terms):
        c = rng.choice([1, 2, 3, -1, -2, 5])
        mono = "*".join(f"{x}^{rng.randint(0, 2)}" for x in xs)
        out.append(f"{c}*{mono}")
    body = " + ".join(out)
    if gaussian and rng.random() < 0.5:
        body = f"({body})*(1 + i)"
    return body


def _poly_nonzero(rng: random.Random, xs: list, terms: int = 2) -> str:
    while True:
        s = _poly(rng, xs, terms)
        sig = Signature([(x, 0) for x in xs])
        e = sig.parse(s)
        if len(e.terms) >= 2:
            return str(e)


# ------------------------------------------------------------- model specs


def sample_specs(seed: int = 0, count: int = 24) -> list:
    """Valid specs across all four families and k = -1 .. -6, built from
    structured solutions of the master equation."""
    rng = _rng(seed, 100)
    makers = [_odd0, _odd1, _odd2, _div1, _strong0, _weak0, _weak0_nonconst, _strong1, _weak1]
    return [makers[j % len(makers)](rng) for j in range(count)]


def tight_specs(seed: int = 0, count: int = 12) -> list:
    """Specs whose master equation is not satisfied trivially, so that any
    change to a coefficient of ``H`` shows up."""
    rng = _rng(seed, 101)
    makers = [_weak0, _odd1_cross, _weak1_tight, _strong0_gauss]
    return [makers[j % len(makers)](rng) for j in range(count)]


def _base(rng: random.Random) -> list:
    return ["x"] if rng.random() < 0.5 else ["u", "v"]


def _odd0(rng):
    b = _base(rng)
    return DarbouxSpec("odd", 0, b, [], _poly(rng, b, 3))


def _odd1(rng):
    b = _base(rng)
    m1 = rng.randint(1, 3)
    mode = rng.choice(["s", "t"])
    terms = []
    if mode == "s":
        terms = [f"y2_{j}*({_poly(rng, b)})" for j in range(1, m1 + 1)]
    elif m1 >= 2:
        terms = [f"x1_1*x1_2*({_poly(rng, b)})"]
    h = " + ".join(terms) or "0"
    return DarbouxSpec("odd", 1, b, [m1], h)


def _odd1_cross(rng):
    b = ["x"]
    w = [_poly_nonzero(rng, b) for _ in range(3)]
    # t = [w]_x is antisymmetric with t w = 0; H = sum y s + sum_{a<b} 2 t_ab x_a x_b
    t = {(1, 2): w[2], (1, 3): f"-({w[1]})", (2, 3): w[0]}
    terms = [f"y2_{j + 1}*({w[j]})" for j in range(3)]
    terms += [f"2*x1_{a}*x1_{c}*({v})" for (a, c), v in t.items()]
    return DarbouxSpec("odd", 1, b, [3], " + ".join(terms))


def _odd2(rng):
    b = ["x"]
    m1, m2 = rng.randint(1, 2), rng.randint(1, 2)
    terms = [f"y4_1*({_poly(rng, b)})", f"x2_1^2*({_poly(rng, b)})"]
    return DarbouxSpec("odd", 2, b, [m1, m2], " + ".join(terms))


def _div1(rng):
    b = _base(rng)
    if rng.random() < 0.5:
        h = f"y3_1*({_poly(rng, b)})"
    else:
        h = f"x1_1*x2_1*({_poly(rng, b)}) + x1_1*y2_1*({_poly(rng, b)})"
    return DarbouxSpec("divfour", 1, b, [1, 1], h)


def _strong0(rng):
    b = _base(rng)
    s = _poly(rng, b)
    return DarbouxSpec("strong2", 0, b, [2], f"z1*({s}) + i*z2*({s})", gaussian=True)


def _strong0_gauss(rng):
    b = ["x"]
    s = _poly_nonzero(rng, b)
    return DarbouxSpec("strong2", 0, b, [2], f"z1*({s}) + i*z2*({s})", gaussian=True)


def _weak0(rng):
    b = ["x"]
    s = _poly_nonzero(rng, b)
    return DarbouxSpec("weak2", 0, b, [2], f"z1*({s}) + z2*({s})", q=["1", "-1"])


def _weak0_nonconst(rng):
    s = _poly(rng, ["x"])
    return DarbouxSpec("weak2", 0, ["x"], [2], f"z1*({s}) + z2*({s})", invertibles=["x"], q=["x", "-x"])


def _strong1(rng):
    b = ["x"]
    u = _poly(rng, b)
    h = f"y5_1*({_poly(rng, b)}) + z1*x2_1*({u}) + i*z2*x2_1*({u})"
    return DarbouxSpec("strong2", 1, b, [1, 1, 2], h, gaussian=True)


def _weak1(rng):
    b = ["x"]
    u = _poly_nonzero(rng, b)
    h = f"y5_1*({_poly(rng, b)}) + z1*x2_1*({u}) + z2*x2_1*({u})"
    return DarbouxSpec("weak2", 1, b, [1, 1, 2], h, q=["1", "-1"])


def _weak1_tight(rng):
    u = _poly_nonzero(rng, ["x"])
    return DarbouxSpec("weak2", 1, ["x"], [1, 1, 2], f"(z1 + z2)*x2_1*({u})", q=["1", "-1"])


# ---------------------------------------------------------------- criteria


def criterion_1(seed: int = 0, triples: int = 120) -> CriterionResult:
    rng = _rng(seed, 1)
    fails = []
    done = 0
    while done < triples:
        sig = random_signature(rng, 6, -3)
        dx, dy = rng.randint(-2, 1), rng.randint(-2, 1)
        x = random_vector_field(sig, rng, dx)
        y = random_vector_field(sig, rng, dy)
        a = random_element(sig, rng, weight=rng.randint(0, 2))
        ix, iy = contraction(x), contraction(y)
        lx, ly = lie_derivative_op(x), lie_derivative_op(y)
        ddr = de_rham_derivation(sig)
        xy = bracket(x, y)
        checks = {
            "[d_dR, L_X] = 0": compose_bracket(ddr, lx, a),
            "[iota_X, iota_Y] = 0": compose_bracket(ix, iy, a),
            "[L_X, iota_Y] = iota_[X,Y]": compose_bracket(lx, iy, a) - contraction(xy)(a),
            "[L_X, L_Y] = L_[X,Y]": compose_bracket(lx, ly, a) - lie_derivative_op(xy)(a),
        }
        for name, r in checks.items():
            if not r.is_zero():
                fails.append((done, name, str(r)))
        done += 1
    return CriterionResult(1, "derivation identities", not fails,
                           f"{done} random (X, Y, element) triples, 4 identities each", fails)


def criterion_2(seed: int = 0, samples: int = 60) -> CriterionResult:
    rng = _rng(seed, 2)
    fails = []
    done = 0
    while done < samples:
        sig = random_signature(rng, 6, -3)
        f = random_element(sig, rng, weight=rng.randint(0, 1))
        alpha = de_rham(f)
        if alpha.is_zero():
            continue
        bd = alpha.bidegree()
        total = bd[0] + bd[1]
        if total == 0:
            continue
        e = euler_field(sig)
        r = lie_derivative_op(e)(alpha) - alpha * total
        if not r.is_zero():
            fails.append((done, "L_E alpha", str(r)))
        beta = exactness_witness(alpha)
        if de_rham(beta) != alpha or beta != contract(e, alpha) * Fraction(1, total):
            fails.append((done, "exactness witness", str(beta)))
        done += 1
    return CriterionResult(2, "Euler calculus", not fails, f"{done} closed homogeneous forms", fails)


def _postconditions(spec: DarbouxSpec) -> list:
    pkg = generate(spec)
    a = pkg.cdga
    out = []
    if a.square_zero_residues():
        out.append("d^2")
    if not check_closed(a, pkg.omega)[0]:
        out.append("closed")
    if de_rham(pkg.pair.phi) != pkg.omega.leading:
        out.append("d_dR phi")
    if not check_pair(a, pkg.pair)[0]:
        out.append("pair")
    if not is_strictly_nondegenerate(a, pkg.omega)[0]:
        out.append("nondegenerate")
    return out


def criterion_3(seed: int = 0, count: int = 24) -> CriterionResult:
    specs = sample_specs(seed, count)
    fails = []
    ks = set()
    fams = set()
    for j, spec in enumerate(specs):
        ks.add(spec.k)
        fams.add(spec.family)
        try:
            bad = _postconditions(spec)
        except DarbouxError as exc:
            bad = [f"{type(exc).__name__}: {exc}"]
        if bad:
            fails.append((j, spec.family, spec.hamiltonian, bad))
    detail = f"{len(specs)} specs, families {len(fams)}, k in {sorted(ks)}, 5 postconditions each"
    return CriterionResult(3, "Darboux generation", not fails, detail, fails)


def criterion_4(seed: int = 0, count: int = 12) -> CriterionResult:
    rng = _rng(seed, 4)
    fails = []
    broken = 0
    for j, spec in enumerate(tight_specs(seed, count)):
        bad = perturb_hamiltonian(spec, rng)
        ok_master = check_master(bad)[0]
        try:
            ok_d2 = not darboux_cdga(bad, validate=False).square_zero_residues()
        except DarbouxError:
            ok_d2 = False
        if ok_master and ok_d2:
            fails.append((j, "perturbation survived", bad.hamiltonian))
        else:
            broken += 1
    ham = 0
    for j, spec in enumerate(sample_specs(seed, 24) + tight_specs(seed, count)):
        pkg = generate(spec)
        ok, rep = differential_is_hamiltonian(pkg.cdga, pkg.omega, pkg.H)
        if ok:
            ham += 1
        else:
            fails.append((j, "hamiltonian", rep))
    detail = f"{broken}/{count} perturbations detected, {ham} specs pass all three Hamiltonian sub-checks"
    return CriterionResult(4, "master equation vs square-zero", not fails, detail, fails)


def _poisson_models(seed: int) -> list:
    rng = _rng(seed, 50)
    return [
        generate(DarbouxSpec("odd", 0, ["u", "v"], [], f"u^3*v + v^2 + {_poly_nonzero(rng, ['u', 'v'])}")),
        generate(_weak0(rng)),
        generate(_strong0(rng)),
    ]


def criterion_5(seed: int = 0, triples: int = 36) -> CriterionResult:
    rng = _rng(seed, 5)
    fails = []
    models = _poisson_models(seed)
    per = -(-triples // len(models))
    done = 0
    for pkg in models:
        solver = solver_for(pkg.cdga, pkg.omega)
        sig = pkg.cdga.sig
        trip = []
        for _ in range(per):
            trip.append(tuple(random_element(sig, rng, max_terms=2, max_base_exp=1, max_factors=2) for _ in range(3)))
        ok, bad = check_poisson_axioms(solver, trip)
        fails += bad
        done += len(trip)
        for i in range(sig.n_alg):
            g = sig.gen(sig.gens[i].name)
            if solver.bracket(pkg.H, g) != pkg.cdga.values[i]:
                fails.append(("{H, g}", sig.gens[i].name))
    ks = sorted({p.k for p in models})
    detail = f"{done} random triples over k in {ks}; {{H, g}} = d g on every generator"
    return CriterionResult(5, "Poisson axioms", not fails, detail, fails)


def criterion_6(seed: int = 0, samples: int = 36) -> CriterionResult:
    rng = _rng(seed, 6)
    fails = []
    pkgs = [generate(s) for s in sample_specs(seed, 24)]
    for j, pkg in enumerate(pkgs):
        try:
            hp = extract_hamiltonian(pkg.cdga, pkg.omega, pkg.pair)
        except DarbouxError as exc:
            fails.append((j, "extract", str(exc)))
            continue
        if hp.H != pkg.pair.Phi * pkg.k:
            fails.append((j, "H = k Phi", str(hp.H)))
        if hp.X_H is None or contract(hp.X_H, pkg.omega.leading) != de_rham(hp.H):
            fails.append((j, "iota_{X_H} omega0 = d_dR H", ""))
    done = 0
    for j in range(samples):
        pkg = pkgs[j % len(pkgs)]
        x = random_element(pkg.cdga.sig, rng, weight=rng.randint(0, 2), max_terms=2, max_factors=2)
        r = iota_q_identity_residue(pkg.cdga, x)
        if not r.is_zero():
            fails.append((j, "iota_Q = -[iota_E, d]", str(r)))
        done += 1
    detail = f"{len(pkgs)} packages extracted; operator identity on {done} random elements"
    return CriterionResult(6, "Hamiltonian extraction", not fails, detail, fails)


def criterion_7(seed: int = 0) -> CriterionResult:
    fails = []
    chart = CriticalChart(["x"], "x^3")
    ideal = [str(g) for g in chart.ideal()]
    if ideal != ["3*x^2"]:
        fails.append(("ideal", ideal))
    pkg = generate(derived_critical_locus(chart))
    cot = cotangent_restriction(pkg.cdga).matrices[1]
    if [[str(e) for e in row] for row in cot] != [["6*x"]]:
        fails.append(("cotangent", cot))
    zero = {pkg.cdga.sig.idx("x"): Fraction(0)}
    if not is_minimal_at(pkg.cdga, zero)[0]:
        fails.append(("minimal", "x^3 at 0"))
    sq = generate(derived_critical_locus(CriticalChart(["x"], "x^2")))
    ok, bad = is_minimal_at(sq.cdga, {0: Fraction(0)})
    if ok or [b[3] for b in bad] != [2]:
        fails.append(("not minimal", bad))
    hess = hessian_complex_at(chart, {"x": 0}).matrix
    if hess != cotangent_restriction(pkg.cdga).at(zero)[1]:
        fails.append(("hessian", hess))
    detail = "ideal (3*x^2), cotangent (6*x), minimal at 0, x^2 residue 2, Hessian = cotangent at 0"
    return CriterionResult(7, "k=-1 worked example", not fails, detail, fails)


def comparison_examples() -> list:
    x3 = CriticalChart(["x"], "x^3")
    return [
        ("identity", identity_certificate(x3)),
        ("same chart twice", relabel_certificate(x3)),
        ("hand-built", hand_built_certificate("1 + x")),
    ]


def criterion_8(seed: int = 0) -> CriterionResult:
    fails = []
    nonzero = 0
    for name, cert in comparison_examples():
        try:
            rep = verify_comparison(cert)
        except DarbouxError as exc:
            fails.append((name, str(exc)))
            continue
        if not rep.ok:
            fails.append((name, rep.residues))
            continue
        if rep.witness_h != rep.difference_h:
            fails.append((name, "witness"))
        if not rep.witness_h.is_zero():
            nonzero += 1
    if nonzero != 1:
        fails.append(("hand-built witness", "expected exactly one nonzero witness"))
    detail = (
        "3 certificates verify; sum I_j I_j' M_j'j expands to a*(H) - b*(H') "
        "and its negative to a*(Phi) - b*(Phi')"
    )
    return CriterionResult(8, "overlap certificates", not fails, detail, fails)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)


def run_all(seed: int = 0) -> list:
    return [c(seed) for c in CRITERIA]


def report(seed: int = 0) -> str:
    """Text report for criteria 1-8; criterion 9 is the byte equality of two
    such reports, which the CLI and the tests check from outside."""
    lines = [f"selftest seed={seed}"]
    for r in run_all(seed):
        lines.append(r.line())
        for f in r.failures[:5]:
            lines.append(f"  failure: {f}")
    return "\n".join(lines) + "\n"

