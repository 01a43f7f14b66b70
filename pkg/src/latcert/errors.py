"""Exception types shared across the package.

Every domain error derives from LatcertError so the CLI can map any failure
to a machine-readable payload (class name + message) with exit code 1.
"""


class LatcertError(Exception):
    """Base class for all domain errors raised by this package."""

    def payload(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class SingularMatrix(LatcertError):
    """Square matrix with zero determinant where an inverse was required."""


class DegenerateForm(LatcertError):
    """Symmetric form with nontrivial radical where non-degeneracy was required."""


class UnsupportedIndefinite(LatcertError):
    """Definite-only routine invoked on an indefinite (or negative) form."""


class NotEven(LatcertError):
    """Even form required: some diagonal entry is odd."""


class IncompatibleCokernels(LatcertError):
    """Smith normal forms disagree, so no cokernel identification exists."""


class TooLarge(LatcertError):
    """Finite group or search space exceeds the supported size bound."""


class BadRank(LatcertError):
    """Rank outside the domain of the requested construction."""


class PullbackMismatch(LatcertError):
    """Plus/minus data violate the parity constraints needed to glue a form."""


class GlueIncompatible(LatcertError):
    """Isometry pair disagrees on the shared mod-2 quotient; no glued map."""


class ForbiddenBlock(LatcertError):
    """Mod-2 hyperbolic block is not one of the two liftable matrices."""


class InvariantViolated(LatcertError):
    """A pipeline check that must hold for every admissible input failed."""


class CertificateInvalid(LatcertError):
    """A recorded certificate equation fails to re-verify."""
