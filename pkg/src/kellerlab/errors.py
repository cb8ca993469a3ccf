"""Exception hierarchy for the lab.

Three broad families, used by the CLI to pick exit codes:

* input/domain errors (bad data, violated preconditions)   -> exit 3
* numerical errors (non-convergence, degenerate systems)   -> exit 4
* assertion failures are not exceptions; experiment reports
  carry per-assertion pass/fail flags                       -> exit 2
"""

from __future__ import annotations


class KellerLabError(Exception):
    """Base class for all lab errors."""

    kind = "input"


class InputError(KellerLabError):
    kind = "input"


class NumericalError(KellerLabError):
    kind = "numeric"


# -- polynomial core -------------------------------------------------------

class EvaluationOverflow(NumericalError):
    """Floating evaluation produced a non-finite value."""


class DegreeBoundViolated(InputError):
    """A polynomial exceeded the degree bound of a grid-equality check."""


# -- automorphism words ----------------------------------------------------

class NotKeller(InputError):
    """Map does not have Jacobian determinant identically one."""


class NotAnAutomorphism(InputError):
    """Degree reduction failed: no elementary factor matches the leading form."""


class DegenerateAffine(InputError):
    """Both diagonal candidates of an affine factor rounded to zero."""


# -- fiber counting --------------------------------------------------------

class BothConstantInY(InputError):
    """Resultant elimination needs at least one input with positive Y-degree."""


class NonConvergence(NumericalError):
    """Root iteration failed to converge within the iteration cap."""


class ResultantVanishes(NumericalError):
    """Identically zero resultant: positive-dimensional fiber or non-dominant map."""


class Unstable(NumericalError):
    """Observed fiber cardinality exceeded the Bezout bound."""


# -- asymptotic tracts -----------------------------------------------------

class NotPolynomial(InputError):
    """Negative powers survive composition: not an asymptotic tract of the map."""


class BothConstant(InputError):
    """Implicitization needs a non-constant parametrization."""


class NoPositiveValuation(InputError):
    """No positive power of X divides the composed polynomial."""


class IdenticallyZero(InputError):
    """Composed polynomial vanishes identically."""


# -- characteristic sets ---------------------------------------------------

class InvariantViolation(InputError):
    """Characteristic-set construction failed a build-time invariant."""


# -- volume estimation -----------------------------------------------------

class BoxOverflow(NumericalError):
    """Padded bounding box is degenerate or non-finite."""


class DivisionByZeroDistance(NumericalError):
    """Denominator distance estimate is zero in a ratio computation."""


# -- catalog / experiment configuration ------------------------------------

class SchemaError(InputError):
    """Malformed catalog or config document."""

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class TagMismatch(InputError):
    """Catalog entry tag contradicts the re-derived property."""


class DuplicateName(InputError):
    """Two catalog entries share a name."""
