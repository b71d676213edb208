"""Hamiltonian vector fields, the shifted Poisson bracket, and recovery of a
Hamiltonian from a (Phi, phi) pair.

``X_f`` is defined by ``iota_{X_f} omega0 = d_dR f``.  Writing ``M`` for the
matrix of ``omega0`` (see ``forms.form_matrix``), this is the row system
``sum_g X_f(g) M[g, h] = (d_dR f)_h``.  Split ``M = M0 + N`` with ``M0`` the
part free of negative-degree generators.  ``M0`` is block diagonal by degree
and, for a strictly nondegenerate form, each block has a unit determinant.
The fixed-point iteration ``v <- (f - v N) M0^{-1}`` terminates because each
round pushes the error to terms with more negative-degree factors, and an
element of fixed degree has boundedly many of those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import Derivation, Element, bracket, compose_bracket, inverse_unit, is_unit
from .cdga import StandardFormCdga
from .derham import contract, contraction, de_rham, euler_field, lie_derivative
from .errors import CheckFailed, DegenerateFormError, NotHomogeneousError, PreconditionError
from .forms import ClosedForm, PhiPhiPair, form_matrix, normalize_pair
from .linalg import adjugate_elements, det_elements

MAX_ROUNDS = 64


class HamiltonianSolver:
    """Solves ``iota_X omega0 = d_dR f`` for a strictly nondegenerate
    ``omega0`` of internal degree ``k``."""

    def __init__(self, sig, omega0: Element, k: int) -> None:
        self.sig = sig
        self.omega0 = omega0
        self.k = k
        m = form_matrix(omega0)
        self.m = m
        self.n_part = {}
        m0 = {}
        for key, v in m.items():
            base = v.drop_negative()
            if not base.is_zero():
                m0[key] = base
            rest = v - base
            if not rest.is_zero():
                self.n_part[key] = rest
        self.blocks = []
        unpaired = [g.name for g in sig.gens[: sig.n_alg] if g.degree < k]
        if unpaired:
            raise DegenerateFormError(f"generators {unpaired} have no partner")
        for i in range(k, 1):
            rows = sig.tier(-(k - i))
            cols = sig.tier(-i)
            if len(rows) != len(cols):
                raise DegenerateFormError(f"pairing block at degree {i} is {len(rows)}x{len(cols)}")
            if not rows:
                continue
            b = [[m0.get((g, h), sig.zero()) for h in cols] for g in rows]
            det = det_elements(sig, b)
            if not is_unit(det):
                raise DegenerateFormError(f"pairing block at degree {i} has non-unit determinant {det}")
            inv_det = inverse_unit(det)
            adj = adjugate_elements(sig, b)
            binv = [[e * inv_det for e in row] for row in adj]
            self.blocks.append((rows, cols, binv))

    def solve(self, f: Element) -> Derivation:
        sig = self.sig
        if not f.free_of_forms():
            raise NotHomogeneousError("Hamiltonian must be a function, not a form")
        bd = f.bidegree()
        deg = (bd[0] if bd else self.k) - self.k
        df = de_rham(f)
        if df.is_zero():
            return Derivation(sig, deg, 0, {})
        rhs0 = df.form_coefficients()
        v: dict = {}
        for _ in range(MAX_ROUNDS):
            rhs = dict(rhs0)
            for (g, h), n in self.n_part.items():
                if g in v:
                    t = v[g] * n
                    rhs[h] = rhs[h] - t if h in rhs else -t
            new = {}
            for rows, cols, binv in self.blocks:
                for r_pos, g in enumerate(rows):
                    acc = sig.zero()
                    for c_pos, h in enumerate(cols):
                        if h in rhs and not binv[c_pos][r_pos].is_zero():
                            acc = acc + rhs[h] * binv[c_pos][r_pos]
                    if not acc.is_zero():
                        new[g] = acc
            if _same(new, v):
                break
            v = new
        else:
            raise CheckFailed("Hamiltonian vector field iteration did not settle")
        x = Derivation(sig, deg, 0, v)
        if contract(x, self.omega0) != df:
            raise CheckFailed("Hamiltonian vector field failed verification")
        return x

    def bracket(self, f: Element, g: Element) -> Element:
        """``{f, g} = (-1)**(|f| - k - 1) X_f(g)``."""
        x = self.solve(f)
        fd = f.degree() or 0
        sign = -1 if (fd - self.k - 1) % 2 else 1
        return x(g) * sign


def _same(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    return all(a[k] == b[k] for k in a)


def solver_for(a: StandardFormCdga, omega: ClosedForm) -> HamiltonianSolver:
    return HamiltonianSolver(a.sig, omega.leading, omega.k)


def hamiltonian_vector_field(a: StandardFormCdga, omega: ClosedForm, f: Element) -> Derivation:
    return solver_for(a, omega).solve(f)


def poisson_bracket(a: StandardFormCdga, omega: ClosedForm, f: Element, g: Element) -> Element:
    return solver_for(a, omega).bracket(f, g)


def _deg(x: Element) -> int:
    d = x.degree()
    return 0 if d is None else d


def check_poisson_axioms(solver: HamiltonianSolver, triples) -> tuple:
    """Antisymmetry, Jacobi and the derivation rule on each ``(f, g, h)``
    with ``n = -k``, plus compatibility with vector fields.

    With ``{f, g} = (-1)**(|f|-k-1) X_f(g)`` one has
    ``iota_{[X_f, X_g]} omega0 = (-1)**|X_f| d_dR X_f(g)``, hence
    ``X_{f,g} = -[X_f, X_g]``: it is ``f -> -X_f`` that preserves brackets.
    Returns ``(ok, failures)``."""
    n = -solver.k
    br = solver.bracket
    fails = []
    for t, (f, g, h) in enumerate(triples):
        a, b = _deg(f) + n, _deg(g) + n
        s_fg = -1 if (a * b) % 2 else 1
        r = br(f, g) + br(g, f) * s_fg
        if not r.is_zero():
            fails.append((t, "antisymmetry", r))
        r = br(f, br(g, h)) - br(br(f, g), h) - br(g, br(f, h)) * s_fg
        if not r.is_zero():
            fails.append((t, "jacobi", r))
        s_der = -1 if (a * _deg(g)) % 2 else 1
        r = br(f, g * h) - br(f, g) * h - g * br(f, h) * s_der
        if not r.is_zero():
            fails.append((t, "derivation", r))
        xf, xg = solver.solve(f), solver.solve(g)
        lhs = solver.solve(br(f, g))
        rhs = -bracket(xf, xg)
        if any(lhs.value(i) != rhs.value(i) for i in range(solver.sig.n_alg)):
            fails.append((t, "X_{f,g} = -[X_f, X_g]", lhs))
    return not fails, fails


def differential_is_hamiltonian(a: StandardFormCdga, omega: ClosedForm, h: Element):
    """(a) ``{H, H} = 0``; (b) ``X_H = d`` on every generator;
    (c) ``d omega0 = 0`` and ``L_{X_H} omega0 = 0``."""
    report: dict = {}
    solver = solver_for(a, omega)
    hh = solver.bracket(h, h)
    if not hh.is_zero():
        note = ""
        if hh.is_constant() and omega.k == -2:
            note = " (nonzero constant: d^2 = 0 can hold while H^0 is trivial)"
        report["{H,H}"] = f"{hh}{note}"
    xh = solver.solve(h)
    for i in range(a.sig.n_alg):
        r = xh.value(i) - a.values[i]
        if not r.is_zero():
            report[f"X_H - d on {a.sig.gens[i].name}"] = str(r)
    r = a.total_differential()(omega.leading)
    if not r.is_zero():
        report["d omega0"] = str(r)
    r = lie_derivative(xh, omega.leading)
    if not r.is_zero():
        report["L_{X_H} omega0"] = str(r)
    return not report, report


@dataclass
class HamiltonianPackage:
    cdga: StandardFormCdga
    omega: ClosedForm
    H: Element
    pair: PhiPhiPair
    X_H: Optional[Derivation] = None
    report: dict = field(default_factory=dict)


def iota_q_identity_residue(a: StandardFormCdga, x: Element) -> Element:
    """``iota_Q x + [iota_E, d] x``; zero by the operator identity."""
    q = Derivation(a.sig, 1, 0, a.values)
    iq = contraction(q)
    ie = contraction(euler_field(a.sig))
    d = a.total_differential()
    return iq(x) + compose_bracket(ie, d, x)


def extract_hamiltonian(a: StandardFormCdga, omega: ClosedForm, pair: PhiPhiPair) -> HamiltonianPackage:
    """Normalise the pair, set ``H = k Phi'``, and check
    ``iota_Q omega0 = d_dR H`` (Q the differential)."""
    if de_rham(pair.phi) != omega.leading:
        raise PreconditionError("d_dR phi differs from the leading term of the form")
    norm = normalize_pair(a, pair)
    h = norm.Phi * pair.k
    q = Derivation(a.sig, 1, 0, a.values)
    report: dict = {}
    lhs = contract(q, omega.leading)
    if lhs != de_rham(h):
        raise CheckFailed("iota_Q omega0 != d_dR H", {"residue": lhs - de_rham(h)})
    ie = contraction(euler_field(a.sig))
    alt = -bracket(ie, a.total_differential())
    if alt != contraction(q):
        raise CheckFailed("iota_Q differs from -[iota_E, d]")
    report["iota_Q omega0 = d_dR H"] = "ok"
    report["iota_Q = -[iota_E, d]"] = "ok"
    xh = None
    try:
        xh = solver_for(a, omega).solve(h)
    except DegenerateFormError as exc:
        report["X_H"] = f"skipped: {exc}"
    else:
        bad = [a.sig.gens[i].name for i in range(a.sig.n_alg) if xh.value(i) != a.values[i]]
        if bad:
            raise CheckFailed(f"X_H differs from d on {bad}")
        report["X_H = d"] = "ok"
    return HamiltonianPackage(a, omega, h, norm, xh, report)

