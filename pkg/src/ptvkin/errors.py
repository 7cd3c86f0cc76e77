"""Exception types shared across the library."""


class DomainError(ValueError):
    """Rotation-vector magnitude outside the supported range [0, pi - 1e-6)."""


class KindError(TypeError):
    """A translation vector of the wrong kind was passed to a map."""


class SingularMapError(ArithmeticError):
    """A translation-vector map solve hit a singular system.

    Unreachable for sigma inside the domain; treat as a bug signal.
    """


class ConvergenceError(RuntimeError):
    """Ground-truth generator failed its Richardson refinement check."""
