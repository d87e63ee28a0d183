"""Exception types shared across the package."""


class SpinMemoryError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SpinMemoryError):
    """Invalid or inconsistent configuration input."""


class UnstableSystemError(SpinMemoryError):
    """Drift matrix has a non-negative stability margin; no steady state."""

    def __init__(self, margin):
        self.margin = margin
        super().__init__(f"drift is not strictly stable (margin {margin:.3e} s^-1)")


class EigenSolverError(SpinMemoryError):
    """Eigenvalue computation failed (distinct from instability)."""


class SingularSolveError(SpinMemoryError):
    """Steady-state linear solve is singular or too ill-conditioned."""

    def __init__(self, message, condition_estimate=None):
        self.condition_estimate = condition_estimate
        if condition_estimate is not None:
            message = f"{message} (condition estimate {condition_estimate:.3e})"
        super().__init__(message)


class StepSizeError(SpinMemoryError):
    """Integrator step size or horizon violates its precondition."""


class NoSqueezingError(SpinMemoryError):
    """Requested squeezing-dip analysis but no squeezing at zero frequency."""


class ValidityError(SpinMemoryError):
    """Adiabatic-reduction validity conditions are violated."""

    def __init__(self, failures):
        self.failures = list(failures)
        detail = "; ".join(failures)
        super().__init__(f"adiabatic validity violated: {detail}")


class ZeroDetuningError(SpinMemoryError):
    """One-photon detuning is zero where a finite value is required."""


class NoPositiveFieldError(SpinMemoryError):
    """Resonance matching has no positive magnetic-field solution."""
