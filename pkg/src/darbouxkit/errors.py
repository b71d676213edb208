"""Exception hierarchy.

``ShapeError`` covers malformed input (bad degrees, unknown names, wrong
shapes); ``CheckFailed`` covers well-formed input that fails a mathematical
check.  The CLI maps them to exit codes 2 and 1.
"""

from __future__ import annotations


class DarbouxError(Exception):
    pass


class ShapeError(DarbouxError):
    pass


class CheckFailed(DarbouxError):
    def __init__(self, message: str, residues=None) -> None:
        super().__init__(message)
        self.residues = residues or {}


class SignatureError(ShapeError):
    pass


class ParseError(ShapeError):
    pass


class DegreeMismatchError(ShapeError):
    pass


class NotHomogeneousError(ShapeError):
    pass


class InvalidVectorField(ShapeError):
    pass


class PointError(ShapeError):
    pass


class UnsupportedError(ShapeError):
    pass


class NotInvertibleError(ShapeError):
    pass


class NotSquareZeroError(CheckFailed):
    pass


class MasterEquationError(CheckFailed):
    pass


class DegenerateFormError(CheckFailed):
    pass


class PreconditionError(CheckFailed):
    pass


class NoWitnessError(CheckFailed):
    pass


class LocallyConstantError(CheckFailed):
    pass
