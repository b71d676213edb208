"""Seeded random elements, vector fields and signatures for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional

from .algebra import Derivation, Element, Signature, mono_degree, mono_weight, mul_monomials

_TABLES: dict = {}


def _monomial_table(sig: Signature, max_factors: int) -> dict:
    """``{(degree, weight): [monomials]}`` over non-base generators with at
    most ``max_factors`` factors."""
    key = (sig, max_factors)
    hit = _TABLES.get(key)
    if hit is not None:
        return hit
    nonbase = [i for i in range(len(sig.gens)) if i not in sig._base_pos]
    table: dict = {}
    for n in range(max_factors + 1):
        for combo in combinations_with_replacement(nonbase, n):
            m: tuple = ()
            ok = True
            for i in combo:
                s, m = mul_monomials(sig, m, ((i, 1),))
                if not s:
                    ok = False
                    break
            if ok:
                table.setdefault((mono_degree(sig, m), mono_weight(sig, m)), []).append(m)
    _TABLES[key] = table
    return table


def bidegrees(sig: Signature, max_factors: int = 3, max_weight: int = 2) -> list:
    return sorted(bd for bd in _monomial_table(sig, max_factors) if bd[1] <= max_weight)


def _coeff(rng: random.Random, gaussian: bool):
    c = Fraction(rng.choice([1, 1, 2, -1, -2, 3]), rng.choice([1, 1, 2, 3]))
    if gaussian and rng.random() < 0.25:
        from .scalars import GaussianRational

        return GaussianRational(c, rng.choice([1, -1]))
    return c


def random_element(
    sig: Signature,
    rng: random.Random,
    degree: Optional[int] = None,
    weight: int = 0,
    max_terms: int = 3,
    max_base_exp: int = 2,
    max_factors: int = 3,
) -> Element:
    """Random homogeneous element; zero if the bidegree has no monomials."""
    table = _monomial_table(sig, max_factors)
    if degree is None:
        choices = [bd for bd in table if bd[1] == weight]
        if not choices:
            return sig.zero()
        degree = rng.choice(sorted(choices))[0]
    mons = table.get((degree, weight), [])
    if not mons:
        return sig.zero()
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        m = rng.choice(mons)
        base = tuple((i, e) for i in sig.base if (e := rng.randint(0, max_base_exp)))
        _s, mm = mul_monomials(sig, base, m)
        terms[mm] = terms.get(mm, 0) + _coeff(rng, sig.gaussian)
    return Element(sig, {m: c for m, c in terms.items() if c})


def random_vector_field(sig: Signature, rng: random.Random, degree: int, max_terms: int = 2) -> Derivation:
    values = {}
    for i in range(sig.n_alg):
        if rng.random() < 0.3:
            continue
        v = random_element(sig, rng, sig.degrees[i] + degree, 0, max_terms, max_factors=2)
        if not v.is_zero():
            values[i] = v
    return Derivation(sig, degree, 0, values)


def random_signature(rng: random.Random, max_gens: int = 6, min_degree: int = -3) -> Signature:
    n = rng.randint(2, max_gens)
    gens = [("x0", 0)]
    for j in range(1, n):
        gens.append((f"g{j}", rng.randint(min_degree, 0)))
    return Signature(gens)
