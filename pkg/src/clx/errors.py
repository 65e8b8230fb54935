"""Exception hierarchy.

Every error raised by the library derives from :class:`ClxError`. The CLI maps
:class:`InputError` subclasses to exit code 2 and :class:`AnalysisError`
subclasses to exit code 1.
"""


class ClxError(Exception):
    """Base class for all library errors."""

    code = "ClxError"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class InputError(ClxError, ValueError):
    code = "InputError"


class AnalysisError(ClxError, ArithmeticError):
    code = "AnalysisError"


# graph construction / ingestion
class DuplicateEdge(InputError):
    code = "DuplicateEdge"


class SelfLoop(InputError):
    code = "SelfLoop"


class PhaseOutOfRange(InputError):
    code = "PhaseOutOfRange"


class IndexOutOfBounds(InputError, IndexError):
    code = "IndexOutOfBounds"


class ParseError(InputError):
    code = "ParseError"


class NegativeCount(InputError):
    code = "NegativeCount"


class DimensionMismatch(InputError):
    code = "DimensionMismatch"


class DTooSmall(InputError):
    code = "DTooSmall"


class DuplicateTargets(InputError):
    code = "DuplicateTargets"


class EmptyGrid(InputError):
    code = "EmptyGrid"


# spectral / analysis
class ConvergenceFailure(AnalysisError):
    code = "ConvergenceFailure"


class RankAmbiguous(AnalysisError):
    code = "RankAmbiguous"


class CorankNotOne(AnalysisError):
    code = "CorankNotOne"


class DefectiveSpectrum(AnalysisError):
    code = "DefectiveSpectrum"


class NotAnEigenvector(AnalysisError):
    code = "NotAnEigenvector"


class IndeterminateRatio(AnalysisError):
    code = "IndeterminateRatio"


class Overflow(AnalysisError, OverflowError):
    code = "Overflow"


class DivergentFlow(AnalysisError):
    code = "DivergentFlow"


class ZeroEigenvalueInJReduced(AnalysisError):
    code = "ZeroEigenvalueInJReduced"


class NoGloballyReachableNode(AnalysisError):
    code = "NoGloballyReachableNode"


class ZeroDegreeNode(AnalysisError):
    code = "ZeroDegreeNode"
