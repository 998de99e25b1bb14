"""Exception taxonomy shared across the package.

Two broad families: format errors (malformed input files, reported with
file/line context) and domain errors (well-formed input that violates a
precondition of the requested computation). The CLI maps format errors to
exit code 2 and domain errors to exit code 1.
"""


class PathgmError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(PathgmError):
    """Malformed input file (dataset or graph)."""


class DatasetFormatError(FormatError):
    """CSV dataset did not parse or violated a declared cardinality."""


class GraphFormatError(FormatError):
    """Graph file did not parse or referenced an invalid vertex."""


class InvalidQueryError(PathgmError):
    """A statistics or scoring query named variables that do not exist,
    repeated a parent, or used the target as its own parent."""


class InvalidStructureError(PathgmError):
    """A structure object or parent-set map violates its invariants."""


class SolverLimitError(PathgmError):
    """An exact solver was asked to exceed its configured size limit."""


class InstanceTooSmallError(PathgmError):
    """The reduction needs at least two vertices to produce any cases."""


class UndefinedScoreError(PathgmError):
    """The requested score is undefined for this input (MDL on an empty
    dataset: the ln N penalty term has no value at N = 0)."""


class ReductionMismatchError(PathgmError):
    """The score-level decision and the structural witness disagreed on a
    reduction instance; indicates a broken invariant, not bad user input."""
