"""Exception hierarchy shared by all ultradisk modules."""


class UltradiskError(Exception):
    """Base class for all library-specific errors."""


class IndeterminateMag(UltradiskError):
    """A magnitude cannot be certified from the known terms of a value."""


class ZeroToNonpositivePower(UltradiskError):
    """Raising the zero magnitude to a nonpositive exponent."""


class ZeroSeries(UltradiskError):
    """An operation that needs a provably nonzero series got zero."""


class UncertifiedRadius(UltradiskError):
    """Requested data at a radius where truncation prevents certification."""


class CenterOutsideDisk(UltradiskError):
    """A disk center (or the disk itself) does not sit inside the domain."""


class DuplicateNodes(UltradiskError):
    """Interpolation nodes are not provably pairwise distinct."""


class IndeterminatePivot(UltradiskError):
    """Elimination hit a pivot whose magnitude the truncation cannot certify."""


class SeparatorCollision(UltradiskError):
    """A separator radius collides with an existing critical radius."""


class VerificationFailed(UltradiskError):
    """A constructed object contradicts a property it must satisfy by design."""


class InfeasibleHorizon(UltradiskError):
    """The finite prescription data cannot satisfy the stage inequality chain."""


class TargetOutOfRange(UltradiskError):
    """A requested target value is outside the solvable range."""


class TargetNotInValueGroup(UltradiskError):
    """Reserved: a solver target whose exponent is not rational.

    Cannot occur for rational inputs; kept so callers can handle the case
    uniformly if irrational targets are ever admitted.
    """


class DenseSetTooCoarse(UltradiskError):
    """The dense-set denominator bound admits no value in a required window."""


class DuplicateCenters(UltradiskError):
    """Two centers that must be distinct coincide."""


class PrescriptionError(UltradiskError):
    """Prescription data violates its own invariants."""


class SchemaError(UltradiskError):
    """Input data does not match the documented JSON schema."""
