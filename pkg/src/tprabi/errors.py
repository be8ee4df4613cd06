"""Exception types shared across the solver."""


class SolverError(Exception):
    """Base class for all tprabi errors."""


class RejectedParameters(SolverError):
    """Parameters outside the admissible regime (e.g. x <= 1, kappa >= 1)."""


class SolverNumericalError(SolverError):
    """Base class for numerical failures (CLI exit code 3)."""


class DegenerateWindow(SolverNumericalError):
    """Growth estimation window contains vanishing coefficients."""


class NearSingularity(SolverNumericalError):
    """Evaluation point or path too close to a singular point of the system."""


class StepSizeUnderflow(SolverNumericalError):
    """Adaptive integrator step collapsed (path passes too close to a pole)."""


class ToleranceNotMet(SolverNumericalError):
    """Integrator or quadrature could not reach the requested tolerance."""


class AmbiguousClassification(SolverNumericalError):
    """Holonomy sits in the gray zone between Jordan and identity; tighten tol."""


class NullVectorNotFound(SolverNumericalError):
    """Cauchy-evaluated matrix is numerically full rank (chi not in spectrum)."""


class ResonantExponent(SolverNumericalError):
    """Frobenius recursion hit an integer exponent gap without a log term."""


class SlowConvergence(SolverNumericalError):
    """Factorial series failed to reach the requested relative tolerance."""


class NoConvergence(SolverNumericalError):
    """Truncated diagonalization did not stabilize within the size cap."""


class NotApplicable(SolverError):
    """Operation invoked outside its classification branch."""
