"""Model files: one JSON document carrying a cdga and any of its attached
data.  Keys are written in a fixed order with two-space indent and a
trailing newline, and every expression is stored in printed form, so a
canonical file reads back and writes out byte-identically."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .algebra import Element, Signature
from .cdga import StandardFormCdga
from .darboux import DarbouxPackage, DarbouxSpec
from .dcrit import ComparisonCertificate, CriticalChart
from .errors import ParseError, ShapeError
from .forms import ClosedForm, PhiPhiPair

FIELDS = {"Q": False, "Q(i)": True}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GeneratorEntry(_Strict):
    name: str
    degree: int


class DarbouxSection(_Strict):
    family: Literal["odd", "divfour", "strong2", "weak2"]
    d: int
    ranks: list[int] = Field(default_factory=list)
    q: list[str] = Field(default_factory=list)
    hamiltonian: str


class ClosedFormSection(_Strict):
    k: int
    p: int = 2
    components: list[str]


class PhiPhiSection(_Strict):
    k: int
    Phi: str
    phi: str


class ChartSection(_Strict):
    base: list[str]
    potential: str
    invertibles: list[str] = Field(default_factory=list)


class CertificateSection(_Strict):
    chart_a: ChartSection
    chart_b: ChartSection
    c_base: list[str]
    c_invertibles: list[str] = Field(default_factory=list)
    fibre: list[str]
    I: list[str]
    a_map: dict[str, str]
    b_map: dict[str, str]
    J: list[list[str]]
    K: list[list[str]]
    L: list[str]
    M: list[list[str]]
    N: list[list[list[str]]]


class ModelFile(_Strict):
    field: Literal["Q", "Q(i)"] = "Q"
    base: list[str] = Field(default_factory=list)
    invertibles: list[str] = Field(default_factory=list)
    generators: list[GeneratorEntry] = Field(default_factory=list)
    differential: dict[str, str] = Field(default_factory=dict)
    darboux_spec: Optional[DarbouxSection] = None
    closed_form: Optional[ClosedFormSection] = None
    phi_phi: Optional[PhiPhiSection] = None
    hamiltonian: Optional[str] = None
    chart: Optional[ChartSection] = None
    comparison_certificate: Optional[CertificateSection] = None

    @property
    def gaussian(self) -> bool:
        return FIELDS[self.field]

    # ---------------------------------------------------------- builders

    def signature(self) -> Signature:
        gens = [(b, 0) for b in self.base] + [(g.name, g.degree) for g in self.generators]
        return Signature(gens, self.invertibles, self.gaussian)

    def cdga(self, validate: bool = True) -> StandardFormCdga:
        sig = self.signature()
        return StandardFormCdga(sig, {k: sig.parse(v) for k, v in self.differential.items()}, validate)

    def closed(self, sig: Signature) -> ClosedForm:
        cf = _need(self.closed_form, "closed_form")
        return ClosedForm(cf.k, [sig.parse(c) for c in cf.components], cf.p)

    def pair(self, sig: Signature) -> PhiPhiPair:
        pp = _need(self.phi_phi, "phi_phi")
        return PhiPhiPair(pp.k, sig.parse(pp.Phi), sig.parse(pp.phi))

    def darboux(self) -> DarbouxSpec:
        ds = _need(self.darboux_spec, "darboux_spec")
        return DarbouxSpec(ds.family, ds.d, list(self.base), list(ds.ranks), ds.hamiltonian,
                           list(self.invertibles), list(ds.q), self.gaussian)

    def critical_chart(self) -> CriticalChart:
        c = _need(self.chart, "chart")
        return CriticalChart(list(c.base), c.potential, list(c.invertibles), self.gaussian)

    def certificate(self) -> ComparisonCertificate:
        c = _need(self.comparison_certificate, "comparison_certificate")

        def chart(s: ChartSection) -> CriticalChart:
            return CriticalChart(list(s.base), s.potential, list(s.invertibles), self.gaussian)

        return ComparisonCertificate(
            chart(c.chart_a), chart(c.chart_b), list(c.c_base), list(c.fibre), list(c.I),
            dict(c.a_map), dict(c.b_map), c.J, c.K, list(c.L), c.M, c.N,
            list(c.c_invertibles), self.gaussian,
        )


def _need(section, name: str):
    if section is None:
        raise ShapeError(f"model file has no {name} section")
    return section


# ------------------------------------------------------------ text form


def loads(text: str) -> ModelFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    try:
        return ModelFile.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ParseError(f"bad model file at {where or '<root>'}: {first['msg']}") from None


def load(path) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(model: ModelFile) -> str:
    data = model.model_dump(exclude_none=True)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dump(model: ModelFile, path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8")


def canonical(model: ModelFile) -> ModelFile:
    """Reprint every expression of the cdga part in normal form and order the
    differential by generator table."""
    sig = model.signature()
    out = model.model_copy(deep=True)
    out.invertibles = [str(sig.parse(q)) for q in model.invertibles]
    diff = {}
    for name in sig.names():
        if name in model.differential:
            v = sig.parse(model.differential[name])
            if not v.is_zero():
                diff[name] = str(v)
    unknown = set(model.differential) - set(sig.names())
    if unknown:
        raise ShapeError(f"differential given on unknown generators {sorted(unknown)}")
    out.differential = diff
    if model.closed_form is not None:
        out.closed_form = ClosedFormSection(
            k=model.closed_form.k, p=model.closed_form.p,
            components=[str(sig.parse(c)) for c in model.closed_form.components],
        )
    if model.phi_phi is not None:
        out.phi_phi = PhiPhiSection(k=model.phi_phi.k, Phi=str(sig.parse(model.phi_phi.Phi)),
                                    phi=str(sig.parse(model.phi_phi.phi)))
    if model.hamiltonian is not None:
        out.hamiltonian = str(sig.parse(model.hamiltonian))
    return out


def _s(e: Element) -> str:
    return str(e)


def package_model(pkg: DarbouxPackage) -> ModelFile:
    """Full model file of a generated Darboux package."""
    spec = pkg.spec
    sig = pkg.cdga.sig
    gens = [GeneratorEntry(name=g.name, degree=g.degree) for g in sig.gens[: sig.n_alg] if g.degree < 0]
    diff = {sig.gens[i].name: _s(v) for i, v in pkg.cdga.values.items() if not v.is_zero()}
    return ModelFile(
        field="Q(i)" if spec.gaussian else "Q",
        base=list(spec.base),
        invertibles=list(spec.invertibles),
        generators=gens,
        differential=diff,
        darboux_spec=DarbouxSection(family=spec.family, d=spec.d, ranks=list(spec.ranks),
                                    q=list(spec.q), hamiltonian=_s(pkg.H)),
        closed_form=ClosedFormSection(k=pkg.omega.k, p=pkg.omega.p,
                                      components=[_s(c) for c in pkg.omega.components]),
        phi_phi=PhiPhiSection(k=pkg.pair.k, Phi=_s(pkg.pair.Phi), phi=_s(pkg.pair.phi)),
        hamiltonian=_s(pkg.H),
    )


def certificate_model(cert: ComparisonCertificate) -> ModelFile:
    def chart(c: CriticalChart) -> ChartSection:
        return ChartSection(base=list(c.base), potential=c.potential, invertibles=list(c.invertibles))

    sec = CertificateSection(
        chart_a=chart(cert.chart_a), chart_b=chart(cert.chart_b), c_base=list(cert.c_base),
        c_invertibles=list(cert.c_invertibles), fibre=list(cert.fibre), I=list(cert.I),
        a_map=dict(cert.a_map), b_map=dict(cert.b_map), J=cert.J, K=cert.K, L=list(cert.L),
        M=cert.M, N=cert.N,
    )
    return ModelFile(field="Q(i)" if cert.gaussian else "Q", comparison_certificate=sec)
