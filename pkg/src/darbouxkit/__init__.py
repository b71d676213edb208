"""Exact symbolic models of shifted symplectic derived schemes: standard-form
cdgas, de Rham calculus, Darboux normal forms, shifted Poisson brackets and
k = -1 critical-chart comparisons."""

from .algebra import Derivation, Element, Signature
from .cdga import StandardFormCdga, cotangent_restriction, is_minimal_at, parse_point
from .darboux import DarbouxPackage, DarbouxSpec, check_master, generate
from .dcrit import ComparisonCertificate, CriticalChart, derived_critical_locus, verify_comparison
from .errors import CheckFailed, DarbouxError, ShapeError
from .forms import ClosedForm, PhiPhiPair
from .hamilton import HamiltonianSolver, extract_hamiltonian, poisson_bracket
from .scalars import GaussianRational

__version__ = "0.1.0"

__all__ = [
    "CheckFailed",
    "ClosedForm",
    "ComparisonCertificate",
    "CriticalChart",
    "DarbouxError",
    "DarbouxPackage",
    "DarbouxSpec",
    "Derivation",
    "Element",
    "GaussianRational",
    "HamiltonianSolver",
    "PhiPhiPair",
    "ShapeError",
    "Signature",
    "StandardFormCdga",
    "check_master",
    "cotangent_restriction",
    "derived_critical_locus",
    "extract_hamiltonian",
    "generate",
    "is_minimal_at",
    "parse_point",
    "poisson_bracket",
    "verify_comparison",
]
