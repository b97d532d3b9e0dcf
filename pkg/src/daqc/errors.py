"""Exception types shared across the package."""


class DaqcError(Exception):
    """Base class for all package errors."""


class InvalidHamiltonian(DaqcError):
    """Operator expected to be Hermitian is not."""


class DimensionError(DaqcError):
    """Operands live on different Hilbert-space dimensions."""


class ConvergenceError(DaqcError):
    """Iterative routine exhausted its iteration budget."""


class IndexRangeError(DaqcError, IndexError):
    """Pair or qubit index out of range."""


class SingularSignMatrix(DaqcError):
    """The coupling sign matrix is singular (N = 4).

    All-to-all targets cannot be synthesised with paired X conjugations at
    this size; a modified per-site rotation set would be required and is not
    provided here.
    """


class SingularPhaseSystem(DaqcError):
    """User-supplied rotation phases make the per-pair system singular."""


class UnsupportedSize(DaqcError):
    """System size not covered by the requested construction."""


class TooFewQubits(DaqcError):
    """Construction needs a larger register."""


class WrongMode(DaqcError):
    """Schedule mode does not match the requested analysis."""


class RequiresDensityMatrix(DaqcError):
    """Channel application needs a density-matrix state."""


class ParamError(DaqcError, ValueError):
    """Parameter outside its admissible range."""


class InvalidProblem(DaqcError):
    """Problem instance violates its preconditions."""


class SpectrumError(DaqcError):
    """Matrix spectrum outside the range the algorithm can encode."""


class InvalidLayer(DaqcError):
    """Single-qubit layer is not unitary."""


class Unsupported(DaqcError):
    """Model / lattice combination not supported."""


class DegenerateSamples(DaqcError):
    """Extrapolation samples share an x value."""


class PlanError(DaqcError):
    """Sweep plan is inconsistent."""


class ConfigError(DaqcError):
    """Configuration file or flags failed validation."""
