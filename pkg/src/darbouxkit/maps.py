"""Degree-preserving algebra maps between signatures, extended to forms by
``dg -> d_dR(image of g)``."""

from __future__ import annotations

from typing import Mapping

from .algebra import ONE, Element, Signature, inverse_unit
from .derham import de_rham
from .errors import DegreeMismatchError, NotInvertibleError, ShapeError


class AlgebraMap:
    """Images of the algebra generators of ``source``.  Generators left out
    map to the same-named generator of ``target``."""

    def __init__(self, source: Signature, target: Signature, images: Mapping[str, Element]) -> None:
        self.source = source
        self.target = target
        imgs = []
        for i in range(source.n_alg):
            g = source.gens[i]
            if g.name in images:
                v = images[g.name]
                if isinstance(v, str):
                    v = target.parse(v)
            elif g.name in target.index:
                v = target.gen(g.name)
            else:
                raise ShapeError(f"no image given for {g.name}")
            if not v.free_of_forms():
                raise DegreeMismatchError(f"image of {g.name} involves one-forms")
            if not v.is_zero() and v.bidegree() != (g.degree, 0):
                raise DegreeMismatchError(f"image of {g.name} has degree {sorted(v.bidegrees())}, expected {g.degree}")
            imgs.append(v)
        for i in range(source.n_alg):
            imgs.append(de_rham(imgs[i]))
        self.images = imgs
        self._cache: dict = {}
        self._inv_den = []
        for j in range(source.n_inv):
            q = self(source.invertible(j), _num_only=True)
            try:
                self._inv_den.append(inverse_unit(q))
            except NotInvertibleError:
                raise NotInvertibleError(f"image of invertible {source.invertible(j)} is {q}, not a unit") from None

    def _mono(self, m) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.one()
        for i, e in m:
            out = out * self.images[i] ** e
        self._cache[m] = out
        return out

    def __call__(self, x: Element, _num_only: bool = False) -> Element:
        if x.sig is not self.source and x.sig != self.source:
            raise ShapeError("element is not in the source signature")
        out = self.target.zero()
        for m, c in x.terms.items():
            out = out + (self._mono(m) if m != ONE else self.target.one()) * c
        if not _num_only:
            for j, a in enumerate(x.den):
                if a:
                    out = out * self._inv_den[j] ** a
        return out

    def on_generators(self) -> dict:
        return {self.source.gens[i].name: self.images[i] for i in range(self.source.n_alg)}

