"""Closed forms, equivalences, (Phi, phi) pairs and nondegeneracy.

A closed p-form of degree k is a list ``[w0, w1, ...]`` where ``wi`` has
weight ``p + i`` and form degree ``k - p - 2i`` (that is, internal degree
``k - i`` before the weight shift).  Closedness means ``d w0 = 0`` and
``d_dR wi + d w(i+1) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Element, partial
from .cdga import StandardFormCdga, check_point, scalar_at
from .derham import contract, de_rham, euler_field
from .errors import DegreeMismatchError, PreconditionError, ShapeError
from .linalg import det_elements, det_scalars
from .algebra import factor_unit


def _check_bidegree(e: Element, want: tuple, label: str) -> None:
    if e.is_zero():
        return
    if not e.is_homogeneous() or e.bidegree() != want:
        raise DegreeMismatchError(f"{label} has bidegree {sorted(e.bidegrees())}, expected {want}")


@dataclass
class ClosedForm:
    k: int
    components: list
    p: int = 2

    def __post_init__(self) -> None:
        for i, w in enumerate(self.components):
            _check_bidegree(w, self.bidegree(i), f"component {i}")

    def bidegree(self, i: int) -> tuple:
        return (self.k - self.p - 2 * i, self.p + i)

    @property
    def leading(self) -> Element:
        return self.components[0]

    def component(self, i: int) -> Optional[Element]:
        return self.components[i] if i < len(self.components) else None


def check_closed(a: StandardFormCdga, omega: ClosedForm):
    """Returns ``(ok, residues)``; residues are keyed ``d w0`` and
    ``d_dR w{i} + d w{i+1}`` and only listed when nonzero."""
    d = a.total_differential()
    comps = omega.components
    res = {}
    r0 = d(comps[0])
    if not r0.is_zero():
        res["d w0"] = r0
    for i in range(len(comps)):
        nxt = comps[i + 1] if i + 1 < len(comps) else None
        r = de_rham(comps[i])
        if nxt is not None:
            r = r + d(nxt)
        if not r.is_zero():
            res[f"d_dR w{i} + d w{i + 1}"] = r
    return not res, res


@dataclass
class EquivalenceCertificate:
    alpha: list

    def check_shape(self, k: int, p: int = 2) -> None:
        for i, x in enumerate(self.alpha):
            _check_bidegree(x, (k - 1 - p - 2 * i, p + i), f"alpha{i}")


def check_equivalence(a: StandardFormCdga, w: ClosedForm, w2: ClosedForm, cert: EquivalenceCertificate):
    """``w0 - w2_0 = d alpha0`` and ``w_{i+1} - w2_{i+1} = d_dR alpha_i + d alpha_{i+1}``."""
    if (w.k, w.p) != (w2.k, w2.p):
        raise ShapeError("forms of different degree or weight")
    cert.check_shape(w.k, w.p)
    d = a.total_differential()
    zero = a.sig.zero()
    n = max(len(w.components), len(w2.components), len(cert.alpha) + 1)

    def get(lst, i):
        return lst[i] if i < len(lst) else zero

    res = {}
    r = get(w.components, 0) - get(w2.components, 0) - d(get(cert.alpha, 0))
    if not r.is_zero():
        res["w0"] = r
    for i in range(n):
        r = get(w.components, i + 1) - get(w2.components, i + 1) - de_rham(get(cert.alpha, i)) - d(get(cert.alpha, i + 1))
        if not r.is_zero():
            res[f"w{i + 1}"] = r
    return not res, res


@dataclass
class PhiPhiPair:
    """``Phi`` of degree ``k+1``, weight 0; ``phi`` a one-form of internal
    degree ``k`` (form degree ``k - 1``)."""

    k: int
    Phi: Element
    phi: Element

    def __post_init__(self) -> None:
        _check_bidegree(self.Phi, (self.k + 1, 0), "Phi")
        _check_bidegree(self.phi, (self.k - 1, 1), "phi")


def check_pair(a: StandardFormCdga, pair: PhiPhiPair):
    d = a.total_differential()
    res = {}
    r = d(pair.Phi)
    if not r.is_zero():
        res["d Phi"] = r
    r = de_rham(pair.Phi) + d(pair.phi)
    if not r.is_zero():
        res["d_dR Phi + d phi"] = r
    return not res, res


def cc_to_nc(a: StandardFormCdga, pair: PhiPhiPair) -> ClosedForm:
    """The closed 2-form ``(d_dR phi, 0, 0, ...)`` of a valid pair."""
    ok, res = check_pair(a, pair)
    if not ok:
        raise PreconditionError("(Phi, phi) does not satisfy its identities", res)
    omega = ClosedForm(pair.k, [de_rham(pair.phi)])
    ok, res = check_closed(a, omega)
    if not ok:
        raise PreconditionError("image form is not closed", res)
    return omega


@dataclass
class Cochain:
    """Components ``{i: c_i}``; ``c_i`` has weight ``p + i``."""

    p: int
    components: dict = field(default_factory=dict)


_RANGES = {"NC": (0, None), "CC": (None, 0), "PC": (None, None)}


def mixed_differential(a: StandardFormCdga, c: Cochain, kind: str = "PC") -> Cochain:
    """``(b + B)`` with ``b = d`` and ``B = d_dR``, truncated to the index
    range of the negative (i >= 0), cyclic (i <= 0) or periodic complex."""
    if kind not in _RANGES:
        raise ShapeError(f"unknown complex {kind!r}")
    lo, hi = _RANGES[kind]
    d = a.total_differential()
    out: dict = {}
    for i, x in c.components.items():
        for j, y in ((i, d(x)), (i + 1, de_rham(x))):
            if (lo is not None and j < lo) or (hi is not None and j > hi):
                continue
            out[j] = out[j] + y if j in out else y
    return Cochain(c.p, {i: v for i, v in sorted(out.items()) if not v.is_zero()})


# -------------------------------------------------------------- pairings


def form_matrix(omega0: Element) -> dict:
    """``M[(g, h)]``: coefficient of ``dh`` in the left partial of ``omega0``
    along ``dg``.  Then ``iota_X omega0 = sum_g X(g) * sum_h M[g, h] dh``."""
    sig = omega0.sig
    out = {}
    for g in range(sig.n_alg):
        w = partial(sig, sig.xi_index(g))(omega0)
        if w.is_zero():
            continue
        for h, c in w.form_coefficients().items():
            out[(g, h)] = c
    return out


@dataclass
class PairingBlock:
    slot: int
    rows: list
    cols: list
    matrix: list


def pairing_matrices(a: StandardFormCdga, omega: ClosedForm) -> list:
    """Blocks of the leading term restricted to the base: for each degree
    ``i`` in ``[k, 0]`` the matrix from the degree ``k - i`` generators to the
    degree ``i`` generators, negative generators set to zero."""
    sig = a.sig
    k = omega.k
    m = form_matrix(omega.leading)
    blocks = []
    for i in range(k, 1):
        rows = sig.tier(-(k - i))
        cols = sig.tier(-i)
        mat = [[m.get((g, h), sig.zero()).drop_negative() for h in cols] for g in rows]
        blocks.append(PairingBlock(i, [sig.gens[g].name for g in rows], [sig.gens[h].name for h in cols], mat))
    return blocks


def _unpaired(a: StandardFormCdga, k: int) -> list:
    return [g.name for g in a.sig.gens[: a.sig.n_alg] if g.degree < k]


def is_nondegenerate_at(a: StandardFormCdga, omega: ClosedForm, point: dict):
    check_point(a.sig, point)
    report = {}
    un = _unpaired(a, omega.k)
    if un:
        report["unpaired"] = ", ".join(un)
    for b in pairing_matrices(a, omega):
        if len(b.rows) != len(b.cols):
            report[f"slot {b.slot}"] = f"not square ({len(b.rows)}x{len(b.cols)})"
            continue
        det = det_scalars([[scalar_at(e, point) for e in row] for row in b.matrix])
        if det == 0:
            report[f"slot {b.slot}"] = "singular"
    return not report, report


def is_strictly_nondegenerate(a: StandardFormCdga, omega: ClosedForm):
    """Every block determinant is a scalar times a product of invertibles."""
    report = {}
    un = _unpaired(a, omega.k)
    if un:
        report["unpaired"] = ", ".join(un)
    for b in pairing_matrices(a, omega):
        if len(b.rows) != len(b.cols):
            report[f"slot {b.slot}"] = f"not square ({len(b.rows)}x{len(b.cols)})"
            continue
        det = det_elements(a.sig, b.matrix)
        if factor_unit(det) is None:
            report[f"slot {b.slot}"] = f"determinant {det} is not a unit"
    return not report, report


def normalize_pair(a: StandardFormCdga, pair: PhiPhiPair) -> PhiPhiPair:
    """Shift by ``beta = iota_E phi / k`` so that ``iota_E phi' = 0``; then
    ``k phi' = iota_E d_dR phi``."""
    k = pair.k
    if k == 0:
        raise PreconditionError("normalisation needs k != 0")
    e = euler_field(a.sig)
    beta = contract(e, pair.phi) * Fraction(1, k)
    d = a.total_differential()
    new = PhiPhiPair(k, pair.Phi - d(beta), pair.phi - de_rham(beta))
    if not contract(e, new.phi).is_zero():
        raise PreconditionError("normalised phi is not killed by iota_E")
    omega0 = de_rham(pair.phi)
    if new.phi * k != contract(e, omega0):
        raise PreconditionError("normalised phi is not iota_E omega0 / k")
    return new
