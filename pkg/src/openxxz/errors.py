"""Exception hierarchy. Every failure mode raised by the library derives from
:class:`OpenXXZError` so callers (CLI, tests) can fence the whole pipeline."""


class OpenXXZError(Exception):
    pass


class InvalidStateError(OpenXXZError):
    """Phase-space state violates an invariant (e.g. k = 0)."""


class DomainError(OpenXXZError):
    """Argument outside the operation's domain (z = 0, r-matrix pole, ...)."""


class DivisibilityError(OpenXXZError):
    """Exact Laurent/polynomial division left a large remainder."""


class SymmetryError(OpenXXZError):
    """Input lacks a symmetry the operation requires."""


class ConstructionError(OpenXXZError):
    """A constructed object failed its defining identities."""


class ExtractionError(OpenXXZError):
    """Two independent coefficient extractions disagree."""


class DegenerateDivisorError(OpenXXZError):
    """Separation divisor degenerate (Q ~ 0 or colliding roots)."""


class BranchPointError(OpenXXZError):
    """Separation root sits on |w| = 1 where the w-branch is ambiguous."""


class TrackingError(OpenXXZError):
    """Root labels could not be continued unambiguously along a trajectory."""


class IntegrationError(OpenXXZError):
    """ODE integration failed."""


class SingularCurveError(OpenXXZError):
    """Spectral curve has repeated branch points."""


class BasisError(OpenXXZError):
    """Homology basis construction failed (clustered branch points)."""


class PeriodError(OpenXXZError):
    """Period quadrature failed to converge or invariants failed."""


class PathError(OpenXXZError):
    """Abel-map path could not avoid branch points."""


class ContourError(OpenXXZError):
    """Action contour hit a zero/branch point of the log integrand."""


class ThetaError(OpenXXZError):
    """Theta-function evaluation impossible (Im B not positive definite, ...)."""


class KSolveError(OpenXXZError):
    """Riemann-constant solve failed from every seed."""


class SpecialDivisorError(OpenXXZError):
    """Riemann-constant validation failed (special divisor)."""


class ReconstructionError(OpenXXZError):
    """Monodromy reconstruction impossible at this spectral parameter."""


class ConfigError(OpenXXZError):
    """Bad run configuration."""
