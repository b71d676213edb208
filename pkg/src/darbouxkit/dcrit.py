"""k = -1: derived critical loci of potentials, comparison certificates
between two critical charts, and the Hessian two-term complex."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import Element, Signature, diff
from .cdga import (
    StandardFormCdga,
    check_point,
    cotangent_restriction,
    scalar_at,
)
from .darboux import DarbouxPackage, DarbouxSpec, generate, roster
from .derham import de_rham
from .errors import (
    CheckFailed,
    LocallyConstantError,
    PointError,
    ShapeError,
)
from .maps import AlgebraMap


@dataclass
class CriticalChart:
    """A potential ``H`` on a smooth base; the critical locus is cut out by
    ``I = (dH/dx_j)`` and the section datum is the class of ``H`` mod ``I^2``."""

    base: list
    potential: str
    invertibles: list = field(default_factory=list)
    gaussian: bool = False

    def signature(self) -> Signature:
        return Signature([(b, 0) for b in self.base], self.invertibles, self.gaussian)

    def H(self, sig: Optional[Signature] = None) -> Element:
        sig = sig or self.signature()
        h = sig.parse(self.potential)
        if not h.in_base():
            raise ShapeError("the potential must be a function on the base")
        return h

    def ideal(self) -> list:
        h = self.H()
        return [diff(h, b) for b in self.base]

    def section(self) -> tuple:
        """``(H, I)``, standing for ``H + I^2``."""
        return self.H(), self.ideal()


def derived_critical_locus(chart: CriticalChart) -> DarbouxSpec:
    return DarbouxSpec("odd", 0, list(chart.base), [], chart.potential, list(chart.invertibles), [], chart.gaussian)


def normalize_potential(chart: CriticalChart, points: list) -> CriticalChart:
    """Subtract the common value of ``H`` at the given critical points.

    Points are ``{name: scalar}``.  Differing values mean ``H`` is only
    locally constant on the reduced locus, and the caller must split charts.
    """
    sig = chart.signature()
    h = chart.H(sig)
    ideal = [diff(h, b) for b in chart.base]
    if not points:
        raise PointError("need at least one critical point")
    values = []
    for p in points:
        pt = {sig.idx(k): v for k, v in p.items()}
        check_point(sig, pt)
        off = [str(g) for g in ideal if scalar_at(g, pt) != 0]
        if off:
            raise PointError(f"point {p} is not critical: {off}")
        values.append(scalar_at(h, pt))
    if any(v != values[0] for v in values):
        raise LocallyConstantError(
            "H is locally constant, not constant, on the supplied points",
            {str(i): v for i, v in enumerate(values)},
        )
    c = values[0]
    return CriticalChart(list(chart.base), str(h - c), list(chart.invertibles), chart.gaussian)


@dataclass
class HessianComplex:
    """``TU -> T*U`` at a critical point: the Hessian matrix, ranks ``(m, m)``
    and the power of the canonical bundle the determinant line matches."""

    matrix: list
    ranks: tuple
    canonical_power: int = 2


def hessian_complex_at(chart: CriticalChart, point: dict) -> HessianComplex:
    sig = chart.signature()
    h = chart.H(sig)
    pt = {sig.idx(k) if isinstance(k, str) else k: v for k, v in point.items()}
    check_point(sig, pt)
    off = [b for b in chart.base if scalar_at(diff(h, b), pt) != 0]
    if off:
        raise PointError(f"point is not on the critical locus (dH/d{', '.join(off)} nonzero)")
    m = [[scalar_at(diff(diff(h, a), b), pt) for b in chart.base] for a in chart.base]
    return HessianComplex(m, (len(chart.base), len(chart.base)))


def cotangent_matrix_at(chart: CriticalChart, point: dict) -> list:
    """``d^{-1}`` of the derived critical locus at ``point``."""
    pkg = generate(derived_critical_locus(chart))
    sig = pkg.cdga.sig
    pt = {sig.idx(k) if isinstance(k, str) else k: v for k, v in point.items()}
    mats = cotangent_restriction(pkg.cdga).at(pt)
    return mats.get(1, [])


# ------------------------------------------------------ comparison data


@dataclass
class ComparisonCertificate:
    """Two charts ``A``, ``B`` mapped into a k = -1 cdga ``C`` with degree
    -1 generators ``e_j`` and ``d e_j = I_j``.

    ``a_map``/``b_map`` send base coordinates to functions on ``C``'s base;
    ``J``, ``K`` give ``alpha(y_i) = sum J_ij e_j`` and
    ``beta(y_i) = sum K_ij e_j``; ``Psi = sum L_j e_j`` and
    ``psi = sum M_jj' e_j de_j' + sum N_jj'l e_j e_j' dz_l``.
    """

    chart_a: CriticalChart
    chart_b: CriticalChart
    c_base: list
    fibre: list
    I: list
    a_map: dict
    b_map: dict
    J: list
    K: list
    L: list
    M: list
    N: list
    c_invertibles: list = field(default_factory=list)
    gaussian: bool = False


@dataclass
class ComparisonReport:
    ok: bool
    residues: dict
    witness_h: Optional[Element] = None
    witness_phi: Optional[Element] = None
    witness_terms: list = field(default_factory=list)
    difference_h: Optional[Element] = None

    def lines(self) -> list:
        out = [f"status: {'pass' if self.ok else 'fail'}"]
        for k, v in self.residues.items():
            out.append(f"residue {k}: {v}")
        if self.ok:
            out.append(f"a*(H) - b*(H'): {self.difference_h}")
            out.append(f"witness for H: sum_j,j' I_j I_j' M_j'j = {self.witness_h}")
            out.append(f"witness for Phi: -sum_j,j' I_j I_j' M_j'j = {self.witness_phi}")
            for j, jp, c in self.witness_terms:
                out.append(f"  I_{j + 1} I_{jp + 1} * ({c})")
        return out


def _c_model(cert: ComparisonCertificate) -> StandardFormCdga:
    gens = [(b, 0) for b in cert.c_base] + [(e, -1) for e in cert.fibre]
    sig = Signature(gens, cert.c_invertibles, cert.gaussian)
    if len(cert.I) != len(cert.fibre):
        raise ShapeError("need one I_j per fibre generator")
    return StandardFormCdga(sig, {e: sig.parse(i) for e, i in zip(cert.fibre, cert.I)})


def _chart_map(pkg: DarbouxPackage, c: StandardFormCdga, base_map: dict, coeffs: list) -> AlgebraMap:
    csig = c.sig
    spec = pkg.spec
    ros = roster(spec)
    if set(base_map) != set(spec.base):
        raise ShapeError(f"base map must give images of exactly {spec.base}")
    m = len(c.sig.tier(1))
    ys = [y for _, y, _ in ros.pairs]
    if len(coeffs) != len(ys) or any(len(row) != m for row in coeffs):
        raise ShapeError(f"coefficient matrix must be {len(ys)}x{m}")
    images = {x: csig.parse(v) for x, v in base_map.items()}
    es = [csig.gen(i) for i in csig.tier(1)]
    for y, row in zip(ys, coeffs):
        images[y] = sum((csig.parse(cf) * e for cf, e in zip(row, es)), csig.zero())
    return AlgebraMap(pkg.cdga.sig, csig, images)


def verify_comparison(cert: ComparisonCertificate) -> ComparisonReport:
    """Check the cdga maps, the gauge identities
    ``alpha(Phi) - beta(Phi') = d Psi`` and
    ``alpha(phi) - beta(phi') = d_dR Psi + d psi``, and their coefficient
    forms; then emit the witness placing ``a*(H) - b*(H')`` in ``(I)^2``.

    With ``Phi = -H``, ``a*(Phi) - b*(Phi') = sum I_j L_j`` and
    ``L_j = -sum I_j' M_j'j`` give
    ``a*(H) - b*(H') = sum_{j,j'} I_j I_j' M_j'j``.
    """
    a = generate(derived_critical_locus(cert.chart_a))
    b = generate(derived_critical_locus(cert.chart_b))
    c = _c_model(cert)
    sig = c.sig
    m = len(cert.fibre)
    alpha = _chart_map(a, c, cert.a_map, cert.J)
    beta = _chart_map(b, c, cert.b_map, cert.K)
    res: dict = {}
    for name, f, pkg in (("alpha", alpha, a), ("beta", beta, b)):
        for i in range(pkg.cdga.sig.n_alg):
            r = f(pkg.cdga.values[i]) - c.d(f.images[i])
            if not r.is_zero():
                res[f"{name} d-compatibility on {pkg.cdga.sig.gens[i].name}"] = r
    if len(cert.L) != m or len(cert.M) != m or any(len(r) != m for r in cert.M):
        raise ShapeError("L must have m entries and M must be m x m")
    nz = len(cert.c_base)
    if len(cert.N) != m or any(len(r) != m or any(len(s) != nz for s in r) for r in cert.N):
        raise ShapeError("N must be m x m x (number of base coordinates of C)")
    I = [sig.parse(v) for v in cert.I]
    L = [sig.parse(v) for v in cert.L]
    M = [[sig.parse(v) for v in row] for row in cert.M]
    N = [[[sig.parse(v) for v in s] for s in row] for row in cert.N]
    for j in range(m):
        for jp in range(m):
            for l in range(nz):
                if N[j][jp][l] != -N[jp][j][l]:
                    res[f"N antisymmetry ({j + 1},{jp + 1},{l + 1})"] = N[j][jp][l] + N[jp][j][l]
    es = [sig.gen(e) for e in cert.fibre]
    zs = [sig.gen(z) for z in cert.c_base]
    psi_big = sum((L[j] * es[j] for j in range(m)), sig.zero())
    psi = sig.zero()
    for j in range(m):
        for jp in range(m):
            psi = psi + M[j][jp] * es[j] * de_rham(es[jp])
            for l in range(nz):
                psi = psi + N[j][jp][l] * es[j] * es[jp] * de_rham(zs[l])
    d = c.total_differential()
    r = alpha(a.pair.Phi) - beta(b.pair.Phi) - d(psi_big)
    if not r.is_zero():
        res["alpha(Phi) - beta(Phi') - d Psi"] = r
    r2 = alpha(a.pair.phi) - beta(b.pair.phi) - de_rham(psi_big) - d(psi)
    if not r2.is_zero():
        res["alpha(phi) - beta(phi') - d_dR Psi - d psi"] = r2
    diff_phi = alpha(a.pair.Phi) - beta(b.pair.Phi)
    r = diff_phi - sum((I[j] * L[j] for j in range(m)), sig.zero())
    if not r.is_zero():
        res["a*(Phi) - b*(Phi') - sum I_j L_j"] = r
    for j in range(m):
        r = L[j] + sum((I[jp] * M[jp][j] for jp in range(m)), sig.zero())
        if not r.is_zero():
            res[f"L_{j + 1} + sum I M"] = r
    # coefficient of e_j dz_l in the one-form identity
    xa = [alpha(sig_gen) for sig_gen in (a.cdga.sig.gen(x) for x in cert.chart_a.base)]
    xb = [beta(sig_gen) for sig_gen in (b.cdga.sig.gen(x) for x in cert.chart_b.base)]
    J = [[sig.parse(v) for v in row] for row in cert.J]
    K = [[sig.parse(v) for v in row] for row in cert.K]
    for j in range(m):
        for l, z in enumerate(cert.c_base):
            lhs = sum((J[i][j] * diff(xa[i], z) for i in range(len(xa))), sig.zero())
            lhs = lhs - sum((K[i][j] * diff(xb[i], z) for i in range(len(xb))), sig.zero())
            rhs = -diff(L[j], z) + sum((M[j][jp] * diff(I[jp], z) for jp in range(m)), sig.zero())
            rhs = rhs + sum((I[jp] * N[jp][j][l] for jp in range(m)), sig.zero()) * 2
            if lhs != rhs:
                res[f"e_{j + 1} d{z} coefficient"] = lhs - rhs
    if res:
        return ComparisonReport(False, res)
    terms = []
    wit = sig.zero()
    for j in range(m):
        for jp in range(m):
            if not M[jp][j].is_zero():
                terms.append((j, jp, M[jp][j]))
                wit = wit + I[j] * I[jp] * M[jp][j]
    diff_h = alpha(a.H) - beta(b.H)
    if wit != diff_h:
        raise CheckFailed("membership witness does not expand to a*(H) - b*(H')", {"residue": wit - diff_h})
    if -wit != diff_phi:
        raise CheckFailed("membership witness does not expand to a*(Phi) - b*(Phi')")
    return ComparisonReport(True, {}, wit, -wit, terms, diff_h)


def hand_built_certificate(c: str = "1") -> ComparisonCertificate:
    """``H = x^3`` against ``H' = x^3 + 9 x^4 c(x)`` compared on ``Q[z][e]``
    with ``d e = 3 z^2``: ``J = 1``, ``K = 1 + 12 z c + 3 z^2 c'``,
    ``L = 3 z^2 c``, ``M = -c``, ``N = 0``."""
    sig = Signature([("z", 0)])
    cz = sig.parse(c.replace("x", "z"))
    dc = diff(cz, "z")
    z = sig.gen("z")
    k = 1 + 12 * z * cz + 3 * z * z * dc
    return ComparisonCertificate(
        chart_a=CriticalChart(["x"], "x^3"),
        chart_b=CriticalChart(["x"], f"x^3 + 9*x^4*({c})"),
        c_base=["z"],
        fibre=["e"],
        I=["3*z^2"],
        a_map={"x": "z"},
        b_map={"x": "z"},
        J=[["1"]],
        K=[[str(k)]],
        L=[str(3 * z * z * cz)],
        M=[[str(-cz)]],
        N=[[["0"]]],
    )


def identity_certificate(chart: CriticalChart) -> ComparisonCertificate:
    """``A = B = C`` with identity maps and zero gauge data."""
    spec = derived_critical_locus(chart)
    ros = roster(spec)
    ys = [y for _, y, _ in ros.pairs]
    h = chart.H()
    ideal = [str(diff(h, x)) for x in chart.base]
    m = len(ys)
    eye = [["1" if i == j else "0" for j in range(m)] for i in range(m)]
    zero = [["0"] * m for _ in range(m)]
    return ComparisonCertificate(
        chart_a=chart,
        chart_b=chart,
        c_base=list(chart.base),
        fibre=ys,
        I=ideal,
        a_map={x: x for x in chart.base},
        b_map={x: x for x in chart.base},
        J=eye,
        K=[list(r) for r in eye],
        L=["0"] * m,
        M=zero,
        N=[[["0"] * len(chart.base) for _ in range(m)] for _ in range(m)],
        c_invertibles=list(chart.invertibles),
        gaussian=chart.gaussian,
    )



def relabel_certificate(chart: CriticalChart, fresh: str = "w") -> ComparisonCertificate:
    """The same chart on both sides, compared through a copy of its own model
    with renamed coordinates ``w1, w2, ...`` and fibre ``e1, e2, ...``."""
    base = list(chart.base)
    new = [f"{fresh}{j + 1}" for j in range(len(base))]
    sig = Signature([(b, 0) for b in base])
    ren = Signature([(n, 0) for n in new])

    def move(e: Element) -> str:
        img = AlgebraMap(sig, ren, {b: n for b, n in zip(base, new)})
        return str(img(e))

    if chart.invertibles:
        raise ShapeError("relabelling assumes a chart without invertibles")
    h = chart.H(sig)
    m = len(base)
    eye = [["1" if i == j else "0" for j in range(m)] for i in range(m)]
    return ComparisonCertificate(
        chart_a=chart,
        chart_b=chart,
        c_base=new,
        fibre=[f"e{j + 1}" for j in range(m)],
        I=[move(diff(h, b)) for b in base],
        a_map=dict(zip(base, new)),
        b_map=dict(zip(base, new)),
        J=eye,
        K=[list(r) for r in eye],
        L=["0"] * m,
        M=[["0"] * m for _ in range(m)],
        N=[[["0"] * m for _ in range(m)] for _ in range(m)],
    )
