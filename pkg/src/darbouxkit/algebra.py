"""Free graded-commutative algebras with a de Rham extension.

A ``Signature`` is an ordered table of generators with integer degrees
(all <= 0).  For every generator ``g`` it also carries a one-form generator
``dg`` of degree ``|g| - 1`` and weight 1, placed after all algebra
generators.  Koszul signs only ever look at the degree, never the weight.

Monomials are sorted tuples ``((index, exponent), ...)``; an odd generator
never has exponent above 1.  An ``Element`` is a sparse map from monomials to
exact scalars, divided by a product of powers of designated invertible
polynomials in the degree-0 generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DegreeMismatchError,
    NotHomogeneousError,
    NotInvertibleError,
    PointError,
    SignatureError,
)
from .scalars import GaussianRational, Scalar, as_scalar

Monomial = tuple  # tuple[tuple[int, int], ...]
Terms = dict  # dict[Monomial, Scalar]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
ONE: Monomial = ()


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: int
    # for a one-form generator, the index of the generator it differentiates
    source: Optional[int] = None

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0


class Signature:
    """Generator table plus designated invertible base polynomials.

    ``generators`` is a sequence of ``(name, degree)`` pairs with degree <= 0.
    ``invertibles`` are polynomial expressions (strings or elements) in the
    degree-0 generators that may appear in denominators.
    """

    def __init__(
        self,
        generators: Sequence[tuple[str, int]],
        invertibles: Sequence = (),
        gaussian: bool = False,
    ) -> None:
        gens = []
        names = set()
        for name, degree in generators:
            if not isinstance(name, str) or not _NAME.match(name) or name == "i":
                raise SignatureError(f"bad generator name {name!r}")
            if name in names:
                raise SignatureError(f"duplicate generator {name!r}")
            if not isinstance(degree, int) or degree > 0:
                raise SignatureError(f"generator {name} must have integer degree <= 0")
            names.add(name)
            gens.append(Generator(name, degree, 0))
        for g in list(gens):
            if "d" + g.name in names:
                raise SignatureError(f"name d{g.name} clashes with the one-form of {g.name}")
        n = len(gens)
        for i, g in enumerate(list(gens)):
            gens.append(Generator("d" + g.name, g.degree - 1, 1, i))
        self.gaussian = bool(gaussian)
        self.gens: tuple[Generator, ...] = tuple(gens)
        self.n_alg = n
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.degrees = tuple(g.degree for g in self.gens)
        self.weights = tuple(g.weight for g in self.gens)
        self.odd = tuple(g.degree % 2 != 0 for g in self.gens)
        self.base = tuple(i for i in range(n) if self.degrees[i] == 0)
        self._base_pos = {i: p for p, i in enumerate(self.base)}
        self.inv_terms: tuple[Terms, ...] = ()
        self._qpow: dict = {}
        polys = []
        for q in invertibles:
            e = self.parse(q) if isinstance(q, str) else q
            if not isinstance(e, Element):
                raise SignatureError(f"invertible {q!r} must be a polynomial")
            if any(e.den):
                raise SignatureError(f"invertible {q!r} must be a polynomial")
            if e.is_constant():
                raise SignatureError(f"invertible {q!r} must be non-constant")
            for m in e.terms:
                if any(i not in self._base_pos for i, _ in m):
                    raise SignatureError(f"invertible {q!r} must only involve degree-0 generators")
            polys.append(dict(e.terms))
        self.inv_terms = tuple(polys)
        self._key = (
            tuple((g.name, g.degree) for g in self.gens[:n]),
            tuple(tuple(sorted(t.items(), key=lambda kv: kv[0])) for t in polys),
            self.gaussian,
        )
        self._hash = hash(repr(self._key))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Signature):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{g.name}:{g.degree}" for g in self.gens[: self.n_alg])
        return f"Signature({body})"

    # lookup
    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise SignatureError(f"unknown generator {name!r}") from None

    def xi_index(self, i: int) -> int:
        return self.n_alg + i

    def names(self) -> list[str]:
        return [g.name for g in self.gens[: self.n_alg]]

    def tier(self, k: int) -> list[int]:
        """Indices of algebra generators of degree -k."""
        return [i for i in range(self.n_alg) if self.degrees[i] == -k]

    def top_tier(self) -> int:
        return max((-d for d in self.degrees[: self.n_alg]), default=0)

    def ranks(self) -> list[int]:
        return [len(self.tier(k)) for k in range(self.top_tier() + 1)]

    @property
    def n_inv(self) -> int:
        return len(self.inv_terms)

    # constructors
    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.const(1)

    def const(self, c) -> "Element":
        c = as_scalar(c)
        if isinstance(c, GaussianRational) and not self.gaussian:
            raise SignatureError("Gaussian scalar in a rational signature")
        return Element(self, {ONE: c} if c else {})

    def gen(self, name_or_index: Union[str, int]) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else self.idx(name_or_index)
        return Element(self, {((i, 1),): Fraction(1)})

    def xi(self, name_or_index: Union[str, int]) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else self.idx(name_or_index)
        if i >= self.n_alg:
            raise SignatureError("one-forms are only defined for algebra generators")
        return self.gen(self.n_alg + i)

    def invertible(self, j: int) -> "Element":
        return Element(self, dict(self.inv_terms[j]))

    def parse(self, text: str) -> "Element":
        from .expr import parse_expression

        return parse_expression(self, text)

    def q_power(self, j: int, a: int) -> Terms:
        key = (j, a)
        t = self._qpow.get(key)
        if t is None:
            t = {ONE: Fraction(1)} if a == 0 else _mul_terms(self, self.q_power(j, a - 1), self.inv_terms[j])
            self._qpow[key] = t
        return t


# ---------------------------------------------------------------- monomials


def mul_monomials(sig: Signature, m1: Monomial, m2: Monomial):
    """Return ``(sign, monomial)`` for ``m1 * m2``, or ``(0, None)``."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    odd = sig.odd
    n1 = len(m1)
    suffix = [0] * (n1 + 1)
    for p in range(n1 - 1, -1, -1):
        suffix[p] = suffix[p + 1] + (1 if odd[m1[p][0]] else 0)
    out = []
    sign = 1
    i = j = 0
    n2 = len(m2)
    while i < n1 and j < n2:
        a, ea = m1[i]
        b, eb = m2[j]
        if a < b:
            out.append(m1[i])
            i += 1
        elif a > b:
            if odd[b] and suffix[i] & 1:
                sign = -sign
            out.append(m2[j])
            j += 1
        else:
            if odd[a]:
                return 0, None
            out.append((a, ea + eb))
            i += 1
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, tuple(out)


def mono_degree(sig: Signature, m: Monomial) -> int:
    return sum(sig.degrees[i] * e for i, e in m)


def mono_weight(sig: Signature, m: Monomial) -> int:
    return sum(sig.weights[i] * e for i, e in m)


def _add_into(acc: Terms, m: Monomial, c) -> None:
    v = acc.get(m)
    v = c if v is None else v + c
    if v:
        acc[m] = v
    else:
        acc.pop(m, None)


def _mul_terms(sig: Signature, t1: Terms, t2: Terms) -> Terms:
    out: Terms = {}
    for m1, c1 in t1.items():
        for m2, c2 in t2.items():
            s, m = mul_monomials(sig, m1, m2)
            if s:
                _add_into(out, m, c1 * c2 if s > 0 else -(c1 * c2))
    return out


def _scale_terms(t: Terms, c) -> Terms:
    if not c:
        return {}
    return {m: v * c for m, v in t.items()}


def _dense_base(sig: Signature, m: Monomial) -> tuple:
    v = [0] * len(sig.base)
    for i, e in m:
        v[sig._base_pos[i]] = e
    return tuple(v)


def _split_base(sig: Signature, m: Monomial):
    base = tuple(p for p in m if p[0] in sig._base_pos)
    rest = tuple(p for p in m if p[0] not in sig._base_pos)
    return base, rest


def _mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    da = dict(a)
    for i, e in b:
        if da.get(i, 0) < e:
            return None
        da[i] -= e
    return tuple(sorted((i, e) for i, e in da.items() if e))


def _divide_base_poly(sig: Signature, p: Terms, q: Terms) -> Optional[Terms]:
    """Exact division of base polynomials, or None if q does not divide p.

    With a single divisor the remainder of lex division is zero exactly when
    q divides p, so a leading term not divisible by lt(q) means failure.
    """
    key = lambda m: _dense_base(sig, m)  # noqa: E731
    ltq = max(q, key=key)
    cq = q[ltq]
    r = dict(p)
    quo: Terms = {}
    while r:
        lt = max(r, key=key)
        t = _mono_div(lt, ltq)
        if t is None:
            return None
        c = r[lt] / cq
        _add_into(quo, t, c)
        for m, v in q.items():
            _s, mm = mul_monomials(sig, t, m)
            _add_into(r, mm, -(c * v))
    return quo


def _divide_terms(sig: Signature, n: Terms, q: Terms) -> Optional[Terms]:
    groups: dict = {}
    for m, c in n.items():
        base, rest = _split_base(sig, m)
        groups.setdefault(rest, {})[base] = c
    out: Terms = {}
    for rest, poly in groups.items():
        quo = _divide_base_poly(sig, poly, q)
        if quo is None:
            return None
        for b, c in quo.items():
            _s, m = mul_monomials(sig, b, rest)
            out[m] = c
    return out


# ------------------------------------------------------------------ element


class Element:
    """Numerator terms over ``prod q_j ** den[j]``.  Treat as immutable."""

    __slots__ = ("sig", "terms", "den")

    def __init__(self, sig: Signature, terms: Terms, den: Optional[tuple] = None) -> None:
        self.sig = sig
        self.terms = terms
        self.den = den if den is not None else (0,) * sig.n_inv
        if any(self.den) and terms:
            self._cancel()
        elif not terms:
            self.den = (0,) * sig.n_inv

    def _cancel(self) -> None:
        den = list(self.den)
        terms = self.terms
        for j, a in enumerate(den):
            while a > 0:
                quo = _divide_terms(self.sig, terms, self.sig.inv_terms[j])
                if quo is None:
                    break
                terms = quo
                a -= 1
            den[j] = a
        self.terms = terms
        self.den = tuple(den)

    # coercion
    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.sig is not self.sig and other.sig != self.sig:
                raise SignatureError("elements live in different signatures")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.sig.const(other)
        raise TypeError(f"cannot combine Element with {type(other).__name__}")

    def _lifted(self, den: tuple) -> Terms:
        t = self.terms
        for j, (have, want) in enumerate(zip(self.den, den)):
            if want > have:
                t = _mul_terms(self.sig, t, self.sig.q_power(j, want - have))
        return t

    def _align(self, other: "Element"):
        if self.den == other.den:
            return self.terms, other.terms, self.den
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return self._lifted(den), other._lifted(den), den

    # arithmetic
    def __add__(self, other) -> "Element":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        a, b, den = self._align(other)
        out = dict(a)
        for m, c in b.items():
            _add_into(out, m, c)
        return Element(self.sig, out, den)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.sig, {m: -c for m, c in self.terms.items()}, self.den)

    def __sub__(self, other) -> "Element":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Element":
        return (-self) + other

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, GaussianRational)):
            if isinstance(other, GaussianRational) and not self.sig.gaussian:
                raise SignatureError("Gaussian scalar in a rational signature")
            return Element(self.sig, _scale_terms(self.terms, other), self.den)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        den = tuple(a + b for a, b in zip(self.den, other.den))
        return Element(self.sig, _mul_terms(self.sig, self.terms, other.terms), den)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = self.sig.one()
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / as_scalar(other))
        other = self._coerce(other)
        return self * inverse_unit(other)

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except (TypeError, SignatureError):
            return NotImplemented
        a, b, _ = self._align(other)
        return a == b

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"Element({self})"

    def __str__(self) -> str:
        from .expr import format_element

        return format_element(self)

    # structure
    def numerator(self) -> "Element":
        return Element(self.sig, self.terms)

    def denominator(self) -> "Element":
        t: Terms = {ONE: Fraction(1)}
        for j, a in enumerate(self.den):
            if a:
                t = _mul_terms(self.sig, t, self.sig.q_power(j, a))
        return Element(self.sig, t)

    def bidegrees(self) -> set:
        return {(mono_degree(self.sig, m), mono_weight(self.sig, m)) for m in self.terms}

    def bidegree(self) -> Optional[tuple]:
        """``(degree, weight)``; None for zero; raises if inhomogeneous.

        Denominators are degree-0 and weight-0, so they never contribute.
        """
        bd = self.bidegrees()
        if not bd:
            return None
        if len(bd) > 1:
            raise NotHomogeneousError(f"element is not homogeneous: {sorted(bd)}")
        return next(iter(bd))

    def degree(self) -> Optional[int]:
        bd = self.bidegree()
        return None if bd is None else bd[0]

    def weight(self) -> Optional[int]:
        bd = self.bidegree()
        return None if bd is None else bd[1]

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def component(self, degree: int, weight: int) -> "Element":
        t = {
            m: c
            for m, c in self.terms.items()
            if mono_degree(self.sig, m) == degree and mono_weight(self.sig, m) == weight
        }
        return Element(self.sig, t, self.den)

    def is_constant(self) -> bool:
        return not any(self.den) and all(m == ONE for m in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("element is not constant")
        return self.terms.get(ONE, Fraction(0))

    def generators_used(self) -> set:
        return {i for m in self.terms for i, _ in m}

    def free_of_forms(self) -> bool:
        n = self.sig.n_alg
        return all(i < n for m in self.terms for i, _ in m)

    def in_base(self) -> bool:
        return all(i in self.sig._base_pos for m in self.terms for i, _ in m)

    def drop_negative(self) -> "Element":
        """Set every negative-degree algebra generator to zero."""
        degs = self.sig.degrees
        n = self.sig.n_alg
        t = {m: c for m, c in self.terms.items() if all(i >= n or degs[i] == 0 for i, _ in m)}
        return Element(self.sig, t, self.den)

    def evaluate(self, point: Mapping[int, Scalar]) -> "Element":
        """Substitute scalars for the degree-0 generators in ``point``."""
        sig = self.sig
        out: Terms = {}
        for m, c in self.terms.items():
            v = c
            rest = []
            for i, e in m:
                if i in point:
                    v = v * as_scalar(point[i]) ** e
                else:
                    rest.append((i, e))
            if v:
                _add_into(out, tuple(rest), v)
        denval: Scalar = Fraction(1)
        for j, a in enumerate(self.den):
            if a:
                qv = Element(sig, dict(sig.inv_terms[j])).evaluate(point)
                if not qv.is_constant():
                    raise PointError("point does not fix every base coordinate")
                qv = qv.constant_value()
                if not qv:
                    raise PointError(f"invertible {Element(sig, dict(sig.inv_terms[j]))} vanishes at the point")
                denval = denval * qv**a
        if denval != 1:
            out = _scale_terms(out, 1 / denval)
        return Element(sig, out)

    def form_coefficients(self) -> dict:
        """For a weight-1 element, ``{algebra index g: coefficient of dg}``.

        One-form generators sort after algebra generators, so each monomial
        is ``a * dg`` with the coefficient on the left.
        """
        n = self.sig.n_alg
        out: dict = {}
        for m, c in self.terms.items():
            forms = [(i, e) for i, e in m if i >= n]
            if len(forms) != 1 or forms[0][1] != 1:
                raise DegreeMismatchError("expected a one-form (weight 1)")
            g = forms[0][0] - n
            out.setdefault(g, {})
            _add_into(out[g], m[:-1], c)
        return {g: Element(self.sig, t, self.den) for g, t in out.items() if t}


def from_terms(sig: Signature, terms: Mapping) -> Element:
    return Element(sig, {m: as_scalar(c) for m, c in terms.items() if c})


# -------------------------------------------------------------------- units


def factor_unit(e: Element):
    """Write ``e`` as ``c * prod q_j ** a_j`` (``a_j`` may be negative).

    Returns ``(c, exponents)`` or None when ``e`` is not of that form.
    """
    sig = e.sig
    if not e.terms:
        return None
    terms = e.terms
    exps = [0] * sig.n_inv
    for j in range(sig.n_inv):
        while True:
            quo = _divide_terms(sig, terms, sig.inv_terms[j])
            if quo is None:
                break
            terms = quo
            exps[j] += 1
    if len(terms) != 1 or ONE not in terms:
        return None
    return terms[ONE], tuple(a - b for a, b in zip(exps, e.den))


def unit_element(sig: Signature, c, exps: Sequence[int]) -> Element:
    num: Terms = {ONE: as_scalar(c)}
    den = []
    for j, a in enumerate(exps):
        if a > 0:
            num = _mul_terms(sig, num, sig.q_power(j, a))
            den.append(0)
        else:
            den.append(-a)
    return Element(sig, num, tuple(den))


def inverse_unit(e: Element) -> Element:
    f = factor_unit(e)
    if f is None:
        raise NotInvertibleError(f"{e} is not a scalar times a product of invertibles")
    c, exps = f
    return unit_element(e.sig, 1 / c, [-a for a in exps])


def is_unit(e: Element) -> bool:
    return factor_unit(e) is not None


# --------------------------------------------------------------- derivations


class Derivation:
    """A graded derivation given by its values on generators.

    ``D(a b) = D(a) b + (-1)**(|D||a|) a D(b)``.  Generators missing from
    ``values`` map to zero.  Denominators are handled by the quotient rule.
    """

    __slots__ = ("sig", "degree", "weight", "values", "_cache", "_fast")

    def __init__(self, sig: Signature, degree: int, weight: int, values: Mapping[int, Element]) -> None:
        self.sig = sig
        self.degree = degree
        self.weight = weight
        self.values = {i: v for i, v in values.items() if v.terms}
        self._cache: dict = {}
        self._fast = not any(any(v.den) for v in self.values.values())

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0

    def check_degrees(self) -> None:
        for i, v in self.values.items():
            bd = v.bidegree()
            want = (self.sig.degrees[i] + self.degree, self.sig.weights[i] + self.weight)
            if bd != want:
                raise DegreeMismatchError(
                    f"value on {self.sig.gens[i].name} has bidegree {bd}, expected {want}"
                )

    def value(self, name_or_index: Union[str, int]) -> Element:
        i = name_or_index if isinstance(name_or_index, int) else self.sig.idx(name_or_index)
        return self.values.get(i, self.sig.zero())

    def _on_monomial(self, m: Monomial) -> Terms:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        sig = self.sig
        out: Terms = {}
        prefix_deg = 0
        for p, (i, e) in enumerate(m):
            v = self.values.get(i)
            if v is not None:
                sign = -1 if (self.odd and prefix_deg % 2) else 1
                lead = m[:p] + (((i, e - 1),) if e > 1 else ())
                coeff = sign * e
                left = _mul_terms(sig, {lead: Fraction(coeff)}, v.terms)
                t = _mul_terms(sig, left, {m[p + 1:]: Fraction(1)})
                for mm, c in t.items():
                    _add_into(out, mm, c)
            prefix_deg += sig.degrees[i] * e
        self._cache[m] = out
        return out

    def _apply_poly(self, terms: Terms) -> Element:
        if self._fast:
            out: Terms = {}
            for m, c in terms.items():
                for mm, v in self._on_monomial(m).items():
                    _add_into(out, mm, c * v)
            return Element(self.sig, out)
        return self._apply_slow(terms)

    def _apply_slow(self, terms: Terms) -> Element:
        sig = self.sig
        acc = sig.zero()
        for m, c in terms.items():
            prefix_deg = 0
            for p, (i, e) in enumerate(m):
                v = self.values.get(i)
                if v is not None:
                    sign = -1 if (self.odd and prefix_deg % 2) else 1
                    lead = m[:p] + (((i, e - 1),) if e > 1 else ())
                    left = Element(sig, {lead: c * (sign * e)})
                    acc = acc + left * v * Element(sig, {m[p + 1:]: Fraction(1)})
                prefix_deg += sig.degrees[i] * e
        return acc

    def __call__(self, x: Element) -> Element:
        if x.sig is not self.sig and x.sig != self.sig:
            raise SignatureError("derivation and element live in different signatures")
        num = self._apply_poly(x.terms)
        if not any(x.den):
            return num
        # D(n / Q) = (D(n) - sum_j a_j D(q_j) n / q_j) / Q
        sig = self.sig
        out = num * Element(sig, {ONE: Fraction(1)}, x.den)
        n = Element(sig, x.terms)
        for j, a in enumerate(x.den):
            if a:
                dq = self._apply_poly(sig.inv_terms[j])
                den = list(x.den)
                den[j] += 1
                out = out - (dq * n) * Element(sig, {ONE: Fraction(a)}, tuple(den))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self.value(i) == other.value(i) for i in keys)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Derivation") -> "Derivation":
        if not self.values:
            return other
        if not other.values:
            return self
        if (self.degree, self.weight) != (other.degree, other.weight):
            raise DegreeMismatchError("adding derivations of different bidegree")
        keys = set(self.values) | set(other.values)
        return Derivation(self.sig, self.degree, self.weight, {i: self.value(i) + other.value(i) for i in keys})

    def __neg__(self) -> "Derivation":
        return Derivation(self.sig, self.degree, self.weight, {i: -v for i, v in self.values.items()})

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return Derivation(self.sig, self.degree, self.weight, {i: v * c for i, v in self.values.items()})

    def left_multiply(self, a: Element) -> "Derivation":
        """The derivation ``x -> a * D(x)``."""
        bd = a.bidegree() or (0, 0)
        return Derivation(self.sig, self.degree + bd[0], self.weight + bd[1], {i: a * v for i, v in self.values.items()})

    def __repr__(self) -> str:
        body = ", ".join(f"{self.sig.gens[i].name}->{v}" for i, v in sorted(self.values.items()))
        return f"Derivation(deg={self.degree}, wt={self.weight}; {body})"


def bracket(p: Derivation, q: Derivation) -> Derivation:
    """Graded commutator ``[P, Q] = P Q - (-1)**(|P||Q|) Q P``."""
    sig = p.sig
    values = {}
    for i in range(len(sig.gens)):
        v = compose_bracket(p, q, sig.gen(i))
        if v.terms:
            values[i] = v
    return Derivation(sig, p.degree + q.degree, p.weight + q.weight, values)


def compose_bracket(p: Derivation, q: Derivation, x: Element) -> Element:
    """``[P, Q](x)`` computed as operator compositions."""
    if p.odd and q.odd:
        return p(q(x)) + q(p(x))
    return p(q(x)) - q(p(x))


def partial(sig: Signature, name_or_index: Union[str, int]) -> Derivation:
    """Left partial derivative with respect to a generator."""
    i = name_or_index if isinstance(name_or_index, int) else sig.idx(name_or_index)
    g = sig.gens[i]
    return Derivation(sig, -g.degree, -g.weight, {i: sig.one()})


def diff(x: Element, name_or_index: Union[str, int]) -> Element:
    return partial(x.sig, name_or_index)(x)


def derivation_from_values(sig: Signature, values: Mapping[str, Element], degree: int, weight: int = 0) -> Derivation:
    d = Derivation(sig, degree, weight, {sig.idx(k): v for k, v in values.items()})
    d.check_degrees()
    return d


def elements_equal(xs: Iterable[Element], ys: Iterable[Element]) -> bool:
    xs, ys = list(xs), list(ys)
    return len(xs) == len(ys) and all(a == b for a, b in zip(xs, ys))
