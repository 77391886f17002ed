"""Exception hierarchy.

ValidationError subclasses map to CLI exit code 2, NumericalError subclasses
to exit code 3.
"""


class ValidationError(ValueError):
    """Bad inputs: out-of-domain parameters, malformed configuration."""


class ConfigError(ValidationError):
    """Configuration file problems.  Carries the full list of messages."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NumericalError(RuntimeError):
    """Evaluation failed for numerical reasons (not bad user input)."""


class SingularityError(NumericalError):
    """Band-edge pole reached: gamma31 must be strictly positive."""


class DegenerateInputError(NumericalError):
    """Linear-response denominator collapsed; the model has broken down."""


class BranchPolicyError(NumericalError):
    """Square-root branch selection produced an unphysical (gain) response."""


class DerivativeUnstableError(NumericalError):
    """Finite-difference refinement did not converge."""


class WindowTooSmallError(NumericalError):
    """Pulse grid cannot hold the spectral or temporal support."""


class NotConvergedError(NumericalError):
    """Trajectory did not reach steady state within the allotted time."""


class StiffnessError(NumericalError):
    """Integrator step size underflowed."""
