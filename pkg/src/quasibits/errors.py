"""Exception hierarchy for quasibits.

All domain errors derive from :class:`QuasibitsError` so callers (and the
CLI) can catch one type and map it to a validation failure.
"""


class QuasibitsError(Exception):
    """Base class for all quasibits domain errors."""


class InvalidState(QuasibitsError):
    """A frame distribution fails normalization or ball membership."""


class BlochOutOfBall(InvalidState):
    """A Bloch vector has norm greater than one."""


class InvalidProcess(QuasibitsError):
    """A process matrix violates its structural contract."""


class NotARotation(InvalidProcess):
    """A matrix expected to encode a rotation does not reduce to one."""


class NotOrthogonal(InvalidProcess):
    """A 3x3 matrix expected to be orthogonal is not, within tolerance."""


class BallNotPreserved(InvalidProcess):
    """An affine Bloch map sends some unit direction outside the ball."""


class NotUnitAxis(InvalidProcess):
    """A measurement axis is not a unit 3-vector."""


class NormalizationViolated(InvalidProcess):
    """Measurement output tags do not sum to zero."""


class DimensionMismatch(QuasibitsError):
    """Operands have incompatible shapes for the requested contraction."""


class NotPositive(QuasibitsError):
    """A two-qubit parameter set has no underlying positive density matrix."""


class InvalidSettings(QuasibitsError):
    """Measurement settings are not orthogonal matrices of the right shape."""


class InvalidBehavior(QuasibitsError):
    """A behavior table fails normalization or positivity."""


class SignalingDetected(InvalidBehavior):
    """A behavior table has setting-dependent marginals."""


class DegenerateDenominator(QuasibitsError):
    """A conditioning distribution vanished where it is provably positive."""


class NegativeDistribution(QuasibitsError):
    """A distribution handed to the sampler has a genuinely negative entry."""


class NotHermitian(QuasibitsError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class InvalidDensity(QuasibitsError):
    """A matrix fails the density-matrix checks (trace, Hermiticity, spectrum)."""
