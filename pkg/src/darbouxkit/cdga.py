"""Standard-form cdgas: a free graded-commutative algebra over a smooth base,
with a differential of degree +1 built tier by tier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .algebra import Derivation, Element, Signature, diff
from .derham import de_rham
from .errors import DegreeMismatchError, NotSquareZeroError, PointError, ShapeError
from .scalars import Scalar, as_scalar


class StandardFormCdga:
    """Signature plus ``d`` on every generator.

    Degree-0 generators are killed by ``d``; a generator of degree ``-k`` maps
    to an element of degree ``1 - k`` in the generators of tiers below ``k``.
    Pass ``validate=False`` to build without the square-zero check (degree and
    tier checks always run).
    """

    def __init__(self, sig: Signature, differential: Mapping, validate: bool = True) -> None:
        self.sig = sig
        values = {}
        for key, v in differential.items():
            i = sig.idx(key) if isinstance(key, str) else key
            if i >= sig.n_alg:
                raise ShapeError("the differential is given on algebra generators only")
            values[i] = v
        self.values: dict[int, Element] = {i: values.get(i, sig.zero()) for i in range(sig.n_alg)}
        self._check_shape()
        self.d = Derivation(sig, 1, 0, self.values)
        if validate:
            res = self.square_zero_residues()
            if res:
                raise NotSquareZeroError("d o d is not zero", res)

    def _check_shape(self) -> None:
        sig = self.sig
        for i, v in self.values.items():
            g = sig.gens[i]
            if g.degree == 0:
                if not v.is_zero():
                    raise DegreeMismatchError(f"d({g.name}) must be zero on a degree-0 generator")
                continue
            if v.is_zero():
                continue
            if not v.free_of_forms():
                raise DegreeMismatchError(f"d({g.name}) involves one-forms")
            if not v.is_homogeneous() or v.bidegree() != (g.degree + 1, 0):
                raise DegreeMismatchError(
                    f"d({g.name}) = {v} has degree {sorted(v.bidegrees())}, expected {g.degree + 1}"
                )
            low = [sig.gens[j].name for j in v.generators_used() if sig.degrees[j] <= g.degree]
            if low:
                raise DegreeMismatchError(f"d({g.name}) uses generators {low} from its own tier or above")

    def square_zero_residues(self) -> dict:
        out = {}
        for i, v in self.values.items():
            r = self.d(v)
            if not r.is_zero():
                out[self.sig.gens[i].name] = r
        return out

    def differential(self, name: str) -> Element:
        return self.values[self.sig.idx(name)]

    def total_differential(self) -> Derivation:
        """Extension of ``d`` to forms: ``d(dg) = -d_dR(d g)``."""
        sig = self.sig
        vals = dict(self.values)
        for i, v in self.values.items():
            vals[sig.xi_index(i)] = -de_rham(v)
        return Derivation(sig, 1, 0, vals)

    def h0_presentation(self) -> list[Element]:
        """Generators of the ideal cut out in the base: ``d`` of tier 1."""
        return [self.values[i] for i in self.sig.tier(1)]

    def ranks(self) -> list[int]:
        return self.sig.ranks()


# ------------------------------------------------------------- points


def parse_point(sig: Signature, text: str) -> dict:
    """``"x1=0,x2=1/2"`` -> ``{index: Scalar}`` over the base generators."""
    out = {}
    text = text.strip()
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise PointError(f"bad coordinate {part!r}; expected name=value")
        name, val = (s.strip() for s in part.split("=", 1))
        if name not in sig.index or sig.index[name] >= sig.n_alg:
            raise PointError(f"unknown coordinate {name!r}")
        i = sig.index[name]
        if sig.degrees[i] != 0:
            raise PointError(f"{name} is not a degree-0 coordinate")
        try:
            v = sig.parse(val)
        except Exception as exc:
            raise PointError(f"bad value for {name}: {exc}") from None
        if not v.is_constant():
            raise PointError(f"value for {name} is not a scalar")
        out[i] = v.constant_value()
    return out


def point_from_mapping(sig: Signature, point: Mapping) -> dict:
    out = {}
    for k, v in point.items():
        i = sig.idx(k) if isinstance(k, str) else k
        if i >= sig.n_alg or sig.degrees[i] != 0:
            raise PointError(f"{sig.gens[i].name} is not a degree-0 coordinate")
        out[i] = as_scalar(v)
    return out


def check_point(sig: Signature, point: dict) -> None:
    missing = [sig.gens[i].name for i in sig.base if i not in point]
    if missing:
        raise PointError(f"point does not give values for {missing}")
    for j in range(sig.n_inv):
        if sig.invertible(j).evaluate(point).constant_value() == 0:
            raise PointError(f"invertible {sig.invertible(j)} vanishes at the point")


def scalar_at(e: Element, point: dict) -> Scalar:
    v = e.evaluate(point)
    if not v.is_constant():
        raise PointError(f"{e} does not reduce to a scalar at the point")
    return v.constant_value()


def point_on_locus(a: StandardFormCdga, point: dict) -> list:
    """Names of tier-1 generators whose ``d`` does not vanish at the point."""
    bad = []
    for i in a.sig.tier(1):
        if scalar_at(a.values[i], point) != 0:
            bad.append(a.sig.gens[i].name)
    return bad


# ------------------------------------------------------- cotangent complex


@dataclass
class CotangentRestriction:
    """Matrices of the cotangent complex restricted to the base.

    ``matrices[k]`` has rows indexed by tier ``k-1`` and columns by tier
    ``k``; entry ``(g', g)`` is ``d(d g)/d g'`` with every negative-degree
    generator set to zero.
    """

    sig: Signature
    ranks: list
    rows: dict = field(default_factory=dict)
    cols: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)

    def at(self, point: dict) -> dict:
        return {k: [[scalar_at(e, point) for e in row] for row in m] for k, m in self.matrices.items()}


def cotangent_restriction(a: StandardFormCdga) -> CotangentRestriction:
    sig = a.sig
    top = sig.top_tier()
    cr = CotangentRestriction(sig, sig.ranks())
    for k in range(1, top + 1):
        rows = sig.tier(k - 1)
        cols = sig.tier(k)
        cr.rows[k] = [sig.gens[i].name for i in rows]
        cr.cols[k] = [sig.gens[i].name for i in cols]
        cr.matrices[k] = [[diff(a.values[g], r).drop_negative() for g in cols] for r in rows]
    return cr


def matmul(x: list, y: list) -> list:
    if not x or not y:
        return []
    n = len(y)
    return [[sum((row[t] * y[t][j] for t in range(n)), Fraction(0)) for j in range(len(y[0]))] for row in x]


def is_minimal_at(a: StandardFormCdga, point: dict):
    """Minimal at ``point`` iff every restricted cotangent matrix vanishes.

    Returns ``(ok, offending)`` with offending entries as
    ``(k, row name, column name, value)``.
    """
    sig = a.sig
    extra = [i for i in point if i >= sig.n_alg or sig.degrees[i] != 0]
    if extra:
        raise PointError("point assigns non-coordinate generators")
    check_point(sig, point)
    off = point_on_locus(a, point)
    if off:
        raise PointError(f"point is not on the zero locus: d({', '.join(off)}) nonzero")
    cr = cotangent_restriction(a)
    bad = []
    for k, m in cr.at(point).items():
        for r, row in enumerate(m):
            for c, v in enumerate(row):
                if v != 0:
                    bad.append((k, cr.rows[k][r], cr.cols[k][c], v))
    return not bad, bad


def composite_residues(a: StandardFormCdga, point: Optional[dict] = None) -> list:
    """Products ``d^{1-k} d^{-k}`` at a point of the locus; all should vanish."""
    cr = cotangent_restriction(a)
    mats = cr.at(point) if point is not None else None
    out = []
    for k in range(2, a.sig.top_tier() + 1):
        if mats is None:
            continue
        prod = matmul(mats[k - 1], mats[k])
        if any(v != 0 for row in prod for v in row):
            out.append((k, prod))
    return out
