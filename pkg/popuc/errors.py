"""Error hierarchy for popuc.

Every failure the library can signal is a PopucError subclass carrying a
stable kebab-case `code` plus an optional `hint` telling the caller what to
change. The CLI turns these into machine-readable error JSON through
`error_payload()`; anything that is not a PopucError is reported with a
generic message and the details go to the log only.
"""

from __future__ import annotations

from typing import Any, ClassVar

from loguru import logger


class PopucError(Exception):
    """Base class for all popuc errors."""

    code: ClassVar[str] = "popuc-error"

    def __init__(self, message: str, *, hint: str = "") -> None:
        self.hint = hint
        super().__init__(message)


# ===================================================================
# Polynomial and rational arithmetic
# ===================================================================


class InvalidDeclaredDegree(PopucError):
    """Declared degree for the *-reversal is below the actual degree."""

    code = "invalid-declared-degree"


class UndefinedRoots(PopucError):
    """Roots requested for the zero polynomial or a constant."""

    code = "undefined-roots"


class DivideByZero(PopucError):
    """Division by the zero rational function."""

    code = "divide-by-zero"


# ===================================================================
# Measures and sequences
# ===================================================================


class InvalidVerblunsky(PopucError):
    """A Verblunsky coefficient outside the open unit disk."""

    code = "invalid-verblunsky"


class DegenerateMeasure(PopucError):
    """Measure is not a probability measure, or a discrete support has repeated points."""

    code = "degenerate-measure"


class InvalidSupport(PopucError):
    """A discrete support point is not on the unit circle."""

    code = "invalid-support"


class InsufficientSequence(PopucError):
    """Requested degree exceeds what the sequence was built through."""

    code = "insufficient-sequence"


class NoDerivative(PopucError):
    """Weight derivative requested for a discrete measure."""

    code = "no-derivative"


# ===================================================================
# Cauchy transforms and ODE assembly
# ===================================================================


class SingularIntegrand(PopucError):
    code = "singular-integrand"


class NearSingularEvaluation(PopucError):
    code = "near-singular-evaluation"


class DegeneratePair(PopucError):
    code = "degenerate-pair"


class DegenerateH(PopucError):
    code = "degenerate-h"


class UnsupportedBetaZero(PopucError):
    code = "unsupported-beta-zero"


class MalformedOde(PopucError):
    code = "malformed-ode"


# ===================================================================
# Electrostatics
# ===================================================================


class DegenerateLame(PopucError):
    """S_1 vanishes identically, so there is no Lamé form to extract."""

    code = "degenerate"


class GeneratorCollision(PopucError):
    """A computed generator landed on one of the mobile points."""

    code = "generator-collides-with-point"


class InvalidConfiguration(PopucError):
    """Inconsistent inputs: coincident charges, bad CLI flags, unreadable files."""

    code = "invalid-configuration"


class NotDisjoint(PopucError):
    code = "not-disjoint"


def error_payload(exc: BaseException) -> dict[str, Any]:
    """Build the error JSON emitted by the CLI.

    Known errors keep their message and hint. Anything else is logged in
    full and replaced by a generic message so internals never leak into
    output files.
    """
    if isinstance(exc, PopucError):
        return {"error": exc.code, "message": str(exc), "hint": exc.hint}
    logger.opt(exception=exc).error("Unhandled error: {}", exc)
    return {"error": "internal-error", "message": "Internal error, see the log for details.", "hint": ""}
