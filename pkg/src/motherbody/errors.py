"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (used by the CLI in
its ``{"error": code, "detail": ...}`` payloads) and a ``rejection`` flag
telling whether it is an analysis verdict (exit status 2) rather than a
malformed input (exit status 1).
"""


class MotherbodyError(Exception):
    code = "MotherbodyError"
    rejection = True

    def __init__(self, detail="", **info):
        super().__init__(detail or self.code)
        self.detail = detail
        self.info = info


# polyalg
class ZeroPolynomial(MotherbodyError):
    code = "ZeroPolynomial"
    rejection = False


class NotSimplePole(MotherbodyError):
    code = "NotSimplePole"


# branch
class NecessaryConditionFails(MotherbodyError):
    code = "NecessaryConditionFails"


class SufficientConditionFails(MotherbodyError):
    code = "SufficientConditionFails"


class MultiplePole(MotherbodyError):
    code = "MultiplePole"


class NonRealResidue(MotherbodyError):
    code = "NonRealResidue"


class NotCoprime(MotherbodyError):
    code = "NotCoprime"


# eigen
class NotBalanced(MotherbodyError):
    code = "NotBalanced"


class NoConstantTerm(MotherbodyError):
    code = "NoConstantTerm"


class NoProbabilityBranch(MotherbodyError):
    code = "NoProbabilityBranch"


class NoUnitRoot(MotherbodyError):
    code = "NoUnitRoot"


class MultipleRootLambda(MotherbodyError):
    code = "MultipleRootLambda"


class Resonance(MotherbodyError):
    code = "Resonance"


class EvalAtRoot(MotherbodyError):
    code = "EvalAtRoot"


# quaddiff
class DegenerateDifferential(MotherbodyError):
    code = "DegenerateDifferential"


class StartAtHigherPole(MotherbodyError):
    code = "StartAtHigherPole"


class BranchPointAtInfinity(MotherbodyError):
    code = "BranchPointAtInfinity"


class TraceBudgetExceeded(MotherbodyError):
    code = "TraceBudgetExceeded"


# mother
class TooManyEdges(MotherbodyError):
    code = "TooManyEdges"


class InconsistentSection(MotherbodyError):
    code = "InconsistentSection"


class NotSpanning(MotherbodyError):
    code = "NotSpanning"


class MultiplePoleOfP(MotherbodyError):
    code = "MultiplePoleOfP"


class NonRealDensity(MotherbodyError):
    code = "NonRealDensity"


class NotStrebel(MotherbodyError):
    code = "NotStrebel"


class DegenerateEmbedding(MotherbodyError):
    code = "DegenerateEmbedding"


# verify
class TooCloseToSupport(MotherbodyError):
    code = "TooCloseToSupport"


class LevelCurveNotClosed(MotherbodyError):
    code = "LevelCurveNotClosed"


# cli / io
class SchemaError(MotherbodyError):
    code = "SchemaError"
    rejection = False
