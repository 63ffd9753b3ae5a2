"""Exception types shared across the package."""


class QtomoError(Exception):
    """Base class for all package-specific errors."""


class NonCommutingBlocks(QtomoError):
    """Coefficient blocks that must commute for a closed-form branch do not."""


class SingularBlock(QtomoError):
    """A coefficient block that must be invertible (or positive definite) is not."""


class NegativeSpectrum(QtomoError):
    """The block product has a non-positive eigenvalue.

    The trigonometric closed form covers oscillatory systems only; anything
    with a hyperbolic direction must go through the general integrator.
    """


class StepTooLarge(QtomoError):
    """The integration step is too coarse: a conserved-structure residual
    exceeded its ceiling."""


class OrderOverflow(QtomoError):
    """A requested polynomial order exceeds the configured maximum."""


class DomainError(QtomoError):
    """Evaluation was requested outside the real-valued domain of a special
    function, or with invalid index arguments."""


class SingularLambdaP(QtomoError):
    """The momentum coefficient matrix of the mode transform is singular, so
    the position-representation closed forms are undefined at this instant."""


class DegenerateFrame(QtomoError):
    """The tomographic frame matrix is singular for this state and (mu, nu)."""


class NonPositiveDispersion(QtomoError):
    """A dispersion matrix that must be positive definite is not."""


class FrameRequiresNu(QtomoError):
    """The integral form of the tomogram needs nu != 0 in every mode."""


class NotSymplectic(QtomoError):
    """A mode-space transform violates the symplectic pairing conditions."""


class SingularD(QtomoError):
    """The two-time overlap kernel is degenerate for these invariants."""


class ParseError(QtomoError):
    """Malformed configuration text.

    The message carries the line number of the offending entry.
    """


class ValidationError(QtomoError):
    """Configuration parsed cleanly but violates a field constraint."""
