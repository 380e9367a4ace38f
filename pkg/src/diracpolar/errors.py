"""Exception types shared across the package."""


class DiracPolarError(Exception):
    """Base class for all domain errors raised by this package."""


class SingularSpinor(DiracPolarError):
    """Spinor fails the regularity condition theta^2 + phi^2 > eps * |psi|^4."""


class OffShell(DiracPolarError):
    """Plane-wave momentum violates p.p = m^2 or is not future-pointing timelike."""


class OutOfDomain(DiracPolarError):
    """Point lies outside a gridded field's extents or off its nodes."""


class PhaseJump(DiracPolarError):
    """Residual phase varies by more than pi/2 across a finite-difference stencil."""


class DegenerateX(DiracPolarError):
    """|X| = |m cos(beta) - Y.s| fell below the guard threshold."""


class DegenerateInversion(DiracPolarError):
    """Velocity-inversion denominator 1 + z.z + (z.s)^2 fell below the guard threshold."""


class ImmediateSingularity(DiracPolarError):
    """Trajectory seed point is singular before the first integration step."""


class ConfigError(DiracPolarError):
    """Run configuration is invalid.  Carries every problem found, not just the first."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
