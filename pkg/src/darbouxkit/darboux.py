"""Darboux-form models of shifted symplectic cdgas.

Four families, indexed by ``d >= 0``:

``odd``      k = -2d-1.  Pairs ``(x_{-i}, y_{i+k})`` for ``i = 0..d``.
``divfour``  k = -4d.    Pairs for ``i = 0..2d``; both members of the
             middle pair have degree ``-2d``.
``strong2``  k = -4d-2.  Pairs for ``i = 0..2d`` plus self-paired ``z`` of
             degree ``-2d-1``, with ``omega0 += sum dz dz``.
``weak2``    as ``strong2`` but ``omega0 += sum d_dR(q z) dz`` for invertible
             base functions ``q``.

Naming: base coordinates are user-chosen; ``x{i}_{j}`` has degree ``-i``;
the partner of the ``j``-th generator of degree ``-i`` is ``y{n}_{j}``
with ``n = -(i + k)``, its degree negated; ``z{j}`` are the self-paired generators.

Sign conventions.  ``omega0 = sum dy dx (+ z part)`` and the differential is
the Hamiltonian vector field of ``H``, ``iota_d omega0 = d_dR H``.  With left
partials this gives ``d x = dH/dy`` and ``d y = eps_i dH/dx`` where
``eps_i = 1`` for odd k and ``(-1)**(i+1)`` for even k, and
``d z = (2q)^{-1} dH/dz``.  The canonical potential is
``phi = iota_E omega0 / k`` and ``Phi = H / k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Element, Signature, diff, factor_unit, inverse_unit
from .cdga import StandardFormCdga
from .derham import contract, de_rham, euler_field
from .errors import (
    CheckFailed,
    DegreeMismatchError,
    MasterEquationError,
    PreconditionError,
    ShapeError,
    UnsupportedError,
)
from .forms import ClosedForm, PhiPhiPair, check_closed, check_pair, is_strictly_nondegenerate
from .maps import AlgebraMap

FAMILIES = ("odd", "divfour", "strong2", "weak2")


@dataclass
class DarbouxSpec:
    """``ranks`` lists ``m_1, m_2, ...``: ``d`` entries for ``odd``, ``2d``
    for ``divfour`` and ``2d + 1`` for the two ``k = 2 mod 4`` families (the
    last one counts the ``z`` generators).  ``m_0 = len(base)``."""

    family: str
    d: int
    base: list
    ranks: list
    hamiltonian: str
    invertibles: list = field(default_factory=list)
    q: list = field(default_factory=list)
    gaussian: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ShapeError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not isinstance(self.d, int) or self.d < 0:
            raise ShapeError("d must be a non-negative integer")
        want = {"odd": self.d, "divfour": 2 * self.d}.get(self.family, 2 * self.d + 1)
        if len(self.ranks) != want:
            raise ShapeError(f"{self.family} with d={self.d} needs {want} ranks, got {len(self.ranks)}")
        if any((not isinstance(r, int)) or r < 0 for r in self.ranks):
            raise ShapeError("ranks must be non-negative integers")
        if self.family == "divfour" and self.d == 0:
            raise ShapeError("divfour needs d >= 1")
        if self.family == "weak2":
            if len(self.q) != self.ranks[-1]:
                raise ShapeError(f"weak2 needs one q per z generator ({self.ranks[-1]}), got {len(self.q)}")
        elif self.q:
            raise ShapeError("q is only used by weak2")

    @property
    def k(self) -> int:
        return {"odd": -2 * self.d - 1, "divfour": -4 * self.d}.get(self.family, -4 * self.d - 2)

    @property
    def top(self) -> int:
        """Largest ``i`` with an ``x_{-i}`` generator."""
        return self.d if self.family == "odd" else 2 * self.d

    @property
    def z_count(self) -> int:
        return self.ranks[-1] if self.family in ("strong2", "weak2") else 0

    def rank(self, i: int) -> int:
        return len(self.base) if i == 0 else self.ranks[i - 1]


@dataclass
class Roster:
    generators: list  # (name, degree) in table order
    pairs: list  # (x name, y name, i)
    zs: list


def roster(spec: DarbouxSpec) -> Roster:
    k = spec.k
    gens = [(b, 0) for b in spec.base]
    xs = {0: list(spec.base)}
    for i in range(1, spec.top + 1):
        xs[i] = [f"x{i}_{j}" for j in range(1, spec.rank(i) + 1)]
        gens += [(n, -i) for n in xs[i]]
    zs = [f"z{j}" for j in range(1, spec.z_count + 1)]
    gens += [(n, -2 * spec.d - 1) for n in zs]
    pairs = []
    for i in range(spec.top, -1, -1):
        ys = [f"y{-(i + k)}_{j}" for j in range(1, spec.rank(i) + 1)]
        gens += [(n, i + k) for n in ys]
        pairs += [(x, y, i) for x, y in zip(xs[i], ys)]
    names = [n for n, _ in gens]
    if len(set(names)) != len(names):
        raise ShapeError("base coordinate names clash with generated names")
    return Roster(gens, pairs, zs)


def signature(spec: DarbouxSpec) -> Signature:
    return Signature(roster(spec).generators, spec.invertibles, spec.gaussian)


def _eps(spec: DarbouxSpec, i: int) -> int:
    if spec.family == "odd":
        return 1
    return 1 if i % 2 else -1


def _q_elements(spec: DarbouxSpec, sig: Signature) -> list:
    if spec.family != "weak2":
        return [sig.one() for _ in range(spec.z_count)]
    out = []
    for q in spec.q:
        e = sig.parse(q) if isinstance(q, str) else q
        if not e.in_base() or factor_unit(e) is None:
            raise ShapeError(f"q = {q} must be a unit of the base (scalar times designated invertibles)")
        out.append(e)
    return out


def parse_hamiltonian(spec: DarbouxSpec, sig: Signature) -> Element:
    h = sig.parse(spec.hamiltonian) if isinstance(spec.hamiltonian, str) else spec.hamiltonian
    if not h.free_of_forms():
        raise DegreeMismatchError("the Hamiltonian must not involve one-forms")
    if not h.is_zero() and (not h.is_homogeneous() or h.bidegree() != (spec.k + 1, 0)):
        raise DegreeMismatchError(f"Hamiltonian has degree {sorted(h.bidegrees())}, expected {spec.k + 1}")
    return h


def master_residue(spec: DarbouxSpec) -> Element:
    """The coordinate master equation; zero iff the DarbouxSpec is valid.

    ``sum_i eps_i sum_j dH/dx dH/dy + 1/4 sum_j q_j^{-1} (dH/dz_j)^2``.
    It equals half of ``X_H(H)``.
    """
    sig = signature(spec)
    h = parse_hamiltonian(spec, sig)
    r = sig.zero()
    for x, y, i in roster(spec).pairs:
        if i == 0:
            continue
        r = r + diff(h, x) * diff(h, y) * _eps(spec, i)
    qs = _q_elements(spec, sig)
    for z, q in zip(roster(spec).zs, qs):
        hz = diff(h, z)
        r = r + hz * hz * inverse_unit(q) * Fraction(1, 4)
    return r


def check_master(spec: DarbouxSpec):
    """Returns ``(ok, residue, note)``."""
    r = master_residue(spec)
    note = ""
    if not r.is_zero() and r.is_constant():
        note = "residue is a nonzero constant"
    return r.is_zero(), r, note


def darboux_differential(spec: DarbouxSpec, sig: Optional[Signature] = None) -> dict:
    sig = sig or signature(spec)
    ros = roster(spec)
    h = parse_hamiltonian(spec, sig)
    qs = _q_elements(spec, sig)
    inv2q = [inverse_unit(q) * Fraction(1, 2) for q in qs]
    values: dict = {}
    for x, y, i in ros.pairs:
        hy = diff(h, y)
        if i == 0:
            if not hy.is_zero():
                raise CheckFailed(f"dH/d{y} should vanish for degree reasons but is {hy}")
        else:
            values[x] = hy
        hx = diff(h, x)
        if i == 0 and spec.family == "weak2":
            corr = sig.zero()
            for z, q, c in zip(ros.zs, qs, inv2q):
                corr = corr + sig.gen(z) * c * diff(q, x) * diff(h, z)
            hx = hx - corr
        values[y] = hx * _eps(spec, i)
    for z, c in zip(ros.zs, inv2q):
        values[z] = diff(h, z) * c
    return values


def darboux_omega0(spec: DarbouxSpec, sig: Signature) -> Element:
    ros = roster(spec)
    w = sig.zero()
    for x, y, _ in ros.pairs:
        w = w + sig.xi(y) * sig.xi(x)
    for z, q in zip(ros.zs, _q_elements(spec, sig)):
        w = w + de_rham(q * sig.gen(z)) * sig.xi(z)
    return w


def darboux_cdga(spec: DarbouxSpec, validate: bool = True) -> StandardFormCdga:
    sig = signature(spec)
    return StandardFormCdga(sig, darboux_differential(spec, sig), validate=validate)


@dataclass
class DarbouxPackage:
    spec: DarbouxSpec
    cdga: StandardFormCdga
    omega: ClosedForm
    pair: PhiPhiPair
    H: Element

    @property
    def k(self) -> int:
        return self.spec.k


def canonical_phi(omega0: Element, k: int) -> Element:
    return contract(euler_field(omega0.sig), omega0) * Fraction(1, k)


def generate(spec: DarbouxSpec) -> DarbouxPackage:
    """Build the model; refuses specs whose master equation fails and
    verifies every structural identity before returning."""
    ok, res, note = check_master(spec)
    if not ok:
        raise MasterEquationError(f"master equation fails{': ' + note if note else ''}", {"residue": res})
    a = darboux_cdga(spec)
    sig = a.sig
    k = spec.k
    h = parse_hamiltonian(spec, sig)
    w0 = darboux_omega0(spec, sig)
    omega = ClosedForm(k, [w0])
    phi = canonical_phi(w0, k)
    pair = PhiPhiPair(k, h * Fraction(1, k), phi)
    ok, res = check_closed(a, omega)
    if not ok:
        raise CheckFailed("generated form is not closed", res)
    if de_rham(phi) != w0:
        raise CheckFailed("d_dR phi != omega0")
    ok, res = check_pair(a, pair)
    if not ok:
        raise CheckFailed("(Phi, phi) identities fail", res)
    ok, res = is_strictly_nondegenerate(a, omega)
    if not ok:
        raise CheckFailed("generated form is degenerate", res)
    return DarbouxPackage(spec, a, omega, pair, h)


def virtual_dimension(spec: DarbouxSpec) -> int:
    return sum((-1) ** (-deg) for _, deg in roster(spec).generators)


# ------------------------------------------------------------ perturbation


def perturb_hamiltonian(spec: DarbouxSpec, rng: random.Random) -> DarbouxSpec:
    """Add a nonzero rational to one randomly chosen coefficient of H."""
    sig = signature(spec)
    h = parse_hamiltonian(spec, sig)
    if h.is_zero():
        raise ShapeError("nothing to perturb in H = 0")
    mons = sorted(h.terms, key=repr)
    m = rng.choice(mons)
    delta = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2, 3]))
    terms = dict(h.terms)
    terms[m] = terms[m] + delta
    if not terms[m]:
        terms[m] = delta
    new = Element(sig, terms, h.den)
    return DarbouxSpec(spec.family, spec.d, list(spec.base), list(spec.ranks), str(new),
                       list(spec.invertibles), list(spec.q), spec.gaussian)


# ------------------------------------------------------- weak to strong


@dataclass
class Substitution:
    source: DarbouxPackage
    target: DarbouxPackage
    variable_map: dict
    report: dict


def _verify_transport(src: DarbouxPackage, dst_cdga: StandardFormCdga, dst_omega: Element,
                      dst_pair: PhiPhiPair, sigma: AlgebraMap) -> dict:
    report = {}
    for i in range(src.cdga.sig.n_alg):
        g = src.cdga.sig.gens[i].name
        if sigma(src.cdga.values[i]) != dst_cdga.d(sigma.images[i]):
            report[f"d commutes on {g}"] = "fails"
    if sigma(src.omega.leading) != dst_omega:
        report["omega0"] = "fails"
    if sigma(src.pair.phi) != dst_pair.phi:
        report["phi"] = "fails"
    if sigma(src.pair.Phi) != dst_pair.Phi:
        report["Phi"] = "fails"
    return report


def weak_to_strong(pkg_or_spec, roots: Sequence[str]) -> Substitution:
    """Rescale ``z_j -> z_j / r_j`` with ``r_j^2 = q_j`` to turn a ``weak2``
    model into a ``strong2`` one, and check that the substitution carries
    the differential, the form and the potential across."""
    weak = pkg_or_spec if isinstance(pkg_or_spec, DarbouxPackage) else generate(pkg_or_spec)
    spec = weak.spec
    if spec.family != "weak2":
        raise UnsupportedError("weak_to_strong needs a weak2 spec")
    if len(roots) != len(spec.q):
        raise ShapeError(f"need one square root per q ({len(spec.q)}), got {len(roots)}")
    wsig = weak.cdga.sig
    new_inv = list(spec.invertibles)
    # designate each non-constant root as invertible so that 1/r makes sense
    probe = Signature([(b, 0) for b in spec.base], spec.invertibles, spec.gaussian)
    for q, r in zip(spec.q, roots):
        re_ = probe.parse(r)
        qe = probe.parse(q) if isinstance(q, str) else q
        if re_ * re_ != qe:
            raise PreconditionError(f"{r} squared is not {q}")
        if not re_.is_constant() and factor_unit(re_) is None:
            new_inv.append(str(re_))
    strong_proto = DarbouxSpec("strong2", spec.d, list(spec.base), list(spec.ranks), "0",
                               new_inv, [], spec.gaussian)
    ssig = signature(strong_proto)
    images = {}
    for z, r in zip(roster(spec).zs, roots):
        images[z] = ssig.gen(z) / ssig.parse(r)
    sigma = AlgebraMap(wsig, ssig, images)
    h_strong = sigma(weak.H)
    strong_spec = DarbouxSpec("strong2", spec.d, list(spec.base), list(spec.ranks), str(h_strong),
                              new_inv, [], spec.gaussian)
    strong = generate(strong_spec)
    sigma = AlgebraMap(wsig, strong.cdga.sig, images)
    report = _verify_transport(weak, strong.cdga, strong.omega.leading, strong.pair, sigma)
    if report:
        raise CheckFailed("weak-to-strong substitution does not commute", report)
    return Substitution(weak, strong, {k: str(v) for k, v in images.items()}, {"verified": "ok"})


# --------------------------------------------------------- split middle


@dataclass
class SplitModel:
    cdga: StandardFormCdga
    omega: ClosedForm
    pair: PhiPhiPair
    H: Element
    variable_map: dict
    vdim: int


def split_middle(pkg_or_spec) -> SplitModel:
    """Over Gaussian rationals, replace the ``2h`` self-paired ``z`` by ``h``
    pairs ``x = z_j + i z_{j+h}``, ``y = z_j - i z_{j+h}``.  The middle
    part of the form becomes ``sum dy dx`` like every other pair."""
    from .hamilton import differential_is_hamiltonian

    strong = pkg_or_spec if isinstance(pkg_or_spec, DarbouxPackage) else generate(pkg_or_spec)
    spec = strong.spec
    if spec.family != "strong2":
        raise UnsupportedError("split_middle needs a strong2 spec")
    if not spec.gaussian:
        raise UnsupportedError("split_middle needs the Gaussian field")
    m = spec.z_count
    if m % 2:
        raise UnsupportedError(f"split_middle needs an even number of z generators, got {m}")
    half = m // 2
    ros = roster(spec)
    mid = 2 * spec.d + 1
    xs = [f"x{mid}_{j}" for j in range(1, half + 1)]
    ys = [f"y{mid}_{j}" for j in range(1, half + 1)]
    gens = []
    for name, deg in ros.generators:
        if name in ros.zs:
            if name == ros.zs[0]:
                gens += [(n, -mid) for n in xs] + [(n, -mid) for n in ys]
            continue
        gens.append((name, deg))
    ssig = strong.cdga.sig
    nsig = Signature(gens, spec.invertibles, True)
    i_ = nsig.parse("i")
    sigma_images = {}
    tau_images = {}
    for j in range(half):
        xj, yj = nsig.gen(xs[j]), nsig.gen(ys[j])
        sigma_images[ros.zs[j]] = (xj + yj) * Fraction(1, 2)
        sigma_images[ros.zs[j + half]] = (xj - yj) * i_ * Fraction(-1, 2)
        za, zb = ssig.gen(ros.zs[j]), ssig.gen(ros.zs[j + half])
        ii = ssig.parse("i")
        tau_images[xs[j]] = za + zb * ii
        tau_images[ys[j]] = za - zb * ii
    sigma = AlgebraMap(ssig, nsig, sigma_images)
    tau = AlgebraMap(nsig, ssig, tau_images)
    values = {}
    for n in range(nsig.n_alg):
        g = nsig.gens[n].name
        values[g] = sigma(strong.cdga.d(tau.images[n]))
    new = StandardFormCdga(nsig, values)
    w = nsig.zero()
    for x, y, _ in ros.pairs:
        w = w + nsig.xi(y) * nsig.xi(x)
    for x, y in zip(xs, ys):
        w = w + nsig.xi(y) * nsig.xi(x)
    omega = ClosedForm(spec.k, [w])
    pair = PhiPhiPair(spec.k, sigma(strong.pair.Phi), sigma(strong.pair.phi))
    h = sigma(strong.H)
    report = _verify_transport(strong, new, w, pair, sigma)
    if report:
        raise CheckFailed("split substitution does not commute", report)
    ok, res = differential_is_hamiltonian(new, omega, h)
    if not ok:
        raise CheckFailed("split model differential is not Hamiltonian", res)
    vmap = {k: str(v) for k, v in sigma_images.items()}
    return SplitModel(new, omega, pair, h, vmap, virtual_dimension(spec))


# ----------------------------------------------------- geometric views


@dataclass
class GeometricView:
    """Classical data for k = -1, -2, -3.

    k = -1: a potential ``H`` on the base.
    k = -2: a section ``s`` of a quadratic bundle with form ``diag(q)``,
            ``H = sum z_j s_j`` and ``sum q_j^{-1} s_j^2 = 0``.
    k = -3: ``s`` and antisymmetric ``t`` with
            ``H = sum y_i s_i + sum x_i x_j t_ij`` and ``t s = 0``.
    """

    k: int
    family: str
    base: list
    ranks: list
    invertibles: list
    q: list = field(default_factory=list)
    H: Optional[str] = None
    s: list = field(default_factory=list)
    t: list = field(default_factory=list)
    gaussian: bool = False


def geometric_view(spec: DarbouxSpec) -> GeometricView:
    sig = signature(spec)
    h = parse_hamiltonian(spec, sig)
    ros = roster(spec)
    k = spec.k
    common = dict(family=spec.family, base=list(spec.base), ranks=list(spec.ranks),
                  invertibles=list(spec.invertibles), gaussian=spec.gaussian)
    if k == -1:
        return GeometricView(k, H=str(h), **common)
    if k == -2:
        s = [diff(h, z) for z in ros.zs]
        return GeometricView(k, q=list(spec.q), s=[str(v) for v in s], **common)
    if k == -3:
        ys = [y for _, y, i in ros.pairs if i == 1]
        xs = [x for x, _, i in ros.pairs if i == 1]
        s = [diff(h, y) for y in ys]
        t = [[diff(diff(h, xi), xj) * Fraction(1, 2) for xj in xs] for xi in xs]
        return GeometricView(k, s=[str(v) for v in s], t=[[str(v) for v in row] for row in t], **common)
    raise UnsupportedError(f"no classical view for k = {k}")


def from_geometric(view: GeometricView) -> DarbouxSpec:
    d = {-1: 0, -2: 0, -3: 1}.get(view.k)
    if d is None:
        raise UnsupportedError(f"no classical view for k = {view.k}")
    proto = DarbouxSpec(view.family, d, list(view.base), list(view.ranks), "0",
                        list(view.invertibles), list(view.q), view.gaussian)
    sig = signature(proto)
    ros = roster(proto)
    if view.k == -1:
        h = sig.parse(view.H)
    elif view.k == -2:
        h = sig.zero()
        for z, s in zip(ros.zs, view.s):
            h = h + sig.gen(z) * sig.parse(s)
    else:
        ys = [y for _, y, i in ros.pairs if i == 1]
        xs = [x for x, _, i in ros.pairs if i == 1]
        h = sig.zero()
        for y, s in zip(ys, view.s):
            h = h + sig.gen(y) * sig.parse(s)
        for a, xa in enumerate(xs):
            for b, xb in enumerate(xs):
                h = h + sig.gen(xa) * sig.gen(xb) * sig.parse(view.t[a][b])
    return DarbouxSpec(view.family, d, list(view.base), list(view.ranks), str(h),
                       list(view.invertibles), list(view.q), view.gaussian)


def view_invariant(view: GeometricView) -> Optional[list]:
    """``sum q^{-1} s^2`` for k = -2, ``t s`` for k = -3, None for k = -1."""
    if view.k == -1:
        return None
    spec = from_geometric(view)
    sig = signature(spec)
    s = [sig.parse(v) for v in view.s]
    if view.k == -2:
        qs = _q_elements(spec, sig)
        tot = sig.zero()
        for sv, q in zip(s, qs):
            tot = tot + sv * sv * inverse_unit(q)
        return [tot]
    t = [[sig.parse(v) for v in row] for row in view.t]
    return [sum((t[a][b] * s[b] for b in range(len(s))), sig.zero()) for a in range(len(s))]
