"""Exception hierarchy.

``EngineInvariantError`` and its subclasses flag conditions the theory
rules out for valid inputs; seeing one means either the input violated
a hypothesis that was certified earlier or the engine has a bug, so
they are never caught internally.
"""


class OrenakaError(Exception):
    """Base class for all errors raised by this package."""


class NoSolutionError(OrenakaError):
    """An affine linear system has no solution."""


class NotInvertibleError(OrenakaError):
    """A matrix that must be invertible is singular."""


class NotAdmissibleError(OrenakaError):
    """An automorphism does not preserve R, or a derivation lift
    violates delta(R) <= R(x)V + V(x)R."""


class CertificationError(OrenakaError):
    """Koszul complex exactness failed at some position within the
    requested degree bound."""

    def __init__(self, message, degree=None, position=None):
        super().__init__(message)
        self.degree = degree
        self.position = position


class NotASRegularError(OrenakaError):
    """The finite AS-regularity checks failed."""


class NotCertifiedError(OrenakaError):
    """An operation needing an AS certificate ran on an uncertified
    algebra."""


class NonUniqueTwistError(OrenakaError):
    """The twist-condition solve for the Nakayama automorphism had free
    variables; the input superpotential is degenerate."""


class CasePreconditionError(OrenakaError):
    """Parameters passed to a catalog solution case violate that case's
    preconditions."""


class EngineInvariantError(OrenakaError):
    """A condition guaranteed by the certified hypotheses failed."""


class LeftImageEscapeError(EngineInvariantError):
    """A left-tower map's image left V(x)W_i."""


class AutomorphismCheckFailedError(EngineInvariantError):
    """The assembled Nakayama automorphism of the Ore extension does
    not preserve R-hat."""


class FormMismatchError(EngineInvariantError):
    """The two closed forms of the twisted superpotential disagree."""


class NotInHatWError(EngineInvariantError):
    """The twisted superpotential is not in the top Koszul space of the
    Ore extension."""


class TwistFailureError(EngineInvariantError):
    """The twisted superpotential fails its twist condition."""
