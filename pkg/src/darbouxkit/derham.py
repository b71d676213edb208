"""De Rham operators on forms: d_dR, contraction, Lie derivative, Euler field.

Every operator here is a graded derivation of the full form algebra, so they
are all ``Derivation`` objects on the same signature and compose through
``algebra.bracket``.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Derivation, Element, Signature
from .errors import DegreeMismatchError, InvalidVectorField, NoWitnessError, PreconditionError


def de_rham_derivation(sig: Signature) -> Derivation:
    """``g -> dg`` on algebra generators, zero on one-forms."""
    return Derivation(sig, -1, 1, {i: sig.xi(i) for i in range(sig.n_alg)})


def de_rham(x: Element) -> Element:
    return de_rham_derivation(x.sig)(x)


def check_vector_field(x: Derivation) -> None:
    """A vector field is a weight-0 derivation of the algebra: no values on
    one-forms and no one-forms in its values."""
    sig = x.sig
    if x.weight != 0:
        raise InvalidVectorField("vector field must have weight 0")
    for i, v in x.values.items():
        if i >= sig.n_alg:
            raise InvalidVectorField("vector field must not act on one-form generators")
        if not v.free_of_forms():
            raise InvalidVectorField(f"value on {sig.gens[i].name} involves one-forms")
    try:
        x.check_degrees()
    except DegreeMismatchError as exc:
        raise InvalidVectorField(str(exc)) from None


def vector_field(sig: Signature, values: dict, degree: int) -> Derivation:
    """Vector field from ``{name: Element}``."""
    x = Derivation(sig, degree, 0, {sig.idx(k): v for k, v in values.items()})
    check_vector_field(x)
    return x


def contraction(x: Derivation) -> Derivation:
    """``iota_X``: zero on the algebra, ``dg -> X(g)``; degree ``|X| + 1``."""
    check_vector_field(x)
    sig = x.sig
    return Derivation(sig, x.degree + 1, -1, {sig.xi_index(i): v for i, v in x.values.items()})


def contract(x: Derivation, alpha: Element) -> Element:
    return contraction(x)(alpha)


def lie_derivative_op(x: Derivation) -> Derivation:
    """``L_X = iota_X d_dR + (-1)**|X| d_dR iota_X`` as a derivation.

    On an algebra generator it is ``X(g)``; on ``dg`` it is
    ``(-1)**|X| d_dR(X(g))``.
    """
    check_vector_field(x)
    sig = x.sig
    sign = -1 if x.degree % 2 else 1
    values = {}
    for i, v in x.values.items():
        values[i] = v
        values[sig.xi_index(i)] = de_rham(v) * sign
    return Derivation(sig, x.degree, 0, values)


def lie_derivative(x: Derivation, alpha: Element) -> Element:
    return lie_derivative_op(x)(alpha)


def euler_field(sig: Signature) -> Derivation:
    """``E(g) = |g| g`` on algebra generators."""
    return Derivation(sig, 0, 0, {i: sig.gen(i) * sig.degrees[i] for i in range(sig.n_alg) if sig.degrees[i]})


def exactness_witness(alpha: Element) -> Element:
    """For a closed homogeneous form of degree m and weight p with m + p != 0,
    return beta with ``d_dR beta = alpha``, namely ``iota_E alpha / (m + p)``.
    """
    bd = alpha.bidegree()
    if bd is None:
        return alpha
    m, p = bd
    if m + p == 0:
        raise NoWitnessError(f"degree {m} and weight {p} sum to zero; the Euler argument gives no primitive")
    if not de_rham(alpha).is_zero():
        raise PreconditionError("form is not d_dR-closed", {"d_dR alpha": de_rham(alpha)})
    beta = contract(euler_field(alpha.sig), alpha) * Fraction(1, m + p)
    if de_rham(beta) != alpha:
        raise PreconditionError("witness failed verification")
    return beta

