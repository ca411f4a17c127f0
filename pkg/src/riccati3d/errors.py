"""Exception types shared across the toolkit."""


class Riccati3dError(Exception):
    """Base class for all toolkit errors."""


class ZeroDivisor(Riccati3dError):
    """Raised when inverting a biquaternion whose modulus vanishes.

    Biquaternions have genuine zero divisors (e.g. ``i + e1``), so this can
    happen for nonzero elements.
    """


class DomainError(Riccati3dError):
    """A point, stencil point or integration path left the field's domain."""


class QuadratureFailure(Riccati3dError):
    """A quadrature rule exceeded its subdivision budget or was misconfigured."""


class ZeroCrossing(Riccati3dError):
    """A denominator field (psi, phi, A[w/phi], ...) vanished at the point."""


class NotPureVector(Riccati3dError):
    """An operation requiring a pure-vector argument received a scalar part."""


class NonRealPotential(Riccati3dError):
    """The symmetry machinery only accepts real-valued potentials q."""


class PoleError(Riccati3dError):
    """A group action denominator (alpha or 1 - x*lambda) vanished."""


class ConfigError(Riccati3dError):
    """Invalid run configuration (CLI exit code 2)."""
