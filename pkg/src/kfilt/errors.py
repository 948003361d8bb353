"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`KFiltError`
so the CLI can map it to an exit code.
"""


class KFiltError(Exception):
    """Base class for all library errors."""


class ValidationError(KFiltError):
    """Input is malformed or violates a precondition."""


class ParseError(ValidationError):
    def __init__(self, message, text="", pos=None, line=None):
        self.text = text
        self.pos = pos
        self.line = line
        where = ""
        if line is not None:
            where += f"line {line}, "
        if pos is not None:
            where += f"column {pos + 1}: "
        super().__init__(where + message)


class MixedDegree(ValidationError):
    pass


class AmbientMismatch(ValidationError):
    pass


class RingMismatch(ValidationError):
    pass


class IdealNotPreserved(ValidationError):
    def __init__(self, relation_index, message=None):
        self.relation_index = relation_index
        super().__init__(message or f"relation #{relation_index} is not weight-homogeneous")


class NotExhaustiveWithinBound(ValidationError):
    def __init__(self, k, bound):
        self.k = k
        self.bound = bound
        super().__init__(f"flag in degree {k} does not reach R_{k} for i <= {bound}")


class DegreeZeroGenerator(ValidationError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"generator #{index} has t-power 0, so A meets R in more than the constants")


class BoundExceeded(ValidationError):
    pass


class OutOfBounds(ValidationError):
    pass


class DegenerateTorus(ValidationError):
    pass


class NotEquivariant(ValidationError):
    pass


class ZeroNorm(ValidationError):
    pass


class FitError(KFiltError):
    """A sequence could not be certified as eventually polynomial."""


class NotYetPolynomial(FitError):
    def __init__(self, first_bad_k):
        self.first_bad_k = first_bad_k
        super().__init__(f"sequence leaves the fitted polynomial at k={first_bad_k}")


class FitNotCertified(FitError):
    def __init__(self, message, sequences=None):
        self.sequences = sequences
        super().__init__(message)


class UncertifiedFit(FitError):
    pass


class ApproximationUnstable(KFiltError):
    def __init__(self, disagreement_degree, trace):
        self.disagreement_degree = disagreement_degree
        self.trace = trace
        super().__init__(
            f"no approximation order reproduces the weight functions; "
            f"first disagreement at k={disagreement_degree}"
        )


class CrossCheckFailure(KFiltError):
    """Two independent routes to the same object disagreed."""
