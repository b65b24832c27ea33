"""Exception hierarchy shared by all modules.

Every error carries a short ``category`` string; the CLI maps categories
to distinct exit codes.
"""


class SFHError(Exception):
    category = "error"
    exit_code = 1


class MalformedInput(SFHError):
    category = "malformed-input"
    exit_code = 2


class InconsistentCellStructure(SFHError):
    category = "inconsistent-cell-structure"
    exit_code = 3


class UnbalancedDiagram(SFHError):
    category = "unbalanced-diagram"
    exit_code = 4


class RegionNotOnBoundary(SFHError):
    category = "region-not-on-boundary"
    exit_code = 5


class TranslateConstructionFailed(SFHError):
    category = "translate-construction-failed"
    exit_code = 6


class SubordinateConditionViolated(SFHError):
    category = "subordinate-condition-violated"
    exit_code = 7


class NotAChainComplex(SFHError):
    category = "not-a-chain-complex"
    exit_code = 8


class MalformedDomain(SFHError):
    category = "malformed-domain"
    exit_code = 9


class TruncationWithoutCertificate(SFHError):
    category = "truncation-without-certificate"
    exit_code = 10


class NotNice(SFHError):
    category = "not-nice"
    exit_code = 11


class NotAdmissible(SFHError):
    category = "not-admissible"
    exit_code = 12


class NotTranslateType(SFHError):
    category = "not-translate-type"
    exit_code = 13


class MarkedSubdiagramInvalid(SFHError):
    category = "marked-subdiagram-invalid"
    exit_code = 14


class UncertifiedTriple(SFHError):
    category = "uncertified-triple"
    exit_code = 15


class DimensionMismatch(SFHError):
    category = "dimension-mismatch"
    exit_code = 16


class MarkingNotCycleCertified(SFHError):
    category = "marking-not-cycle-certified"
    exit_code = 17


class GluingConditionViolated(SFHError):
    category = "gluing-condition-violated"
    exit_code = 18


class StepMismatch(SFHError):
    category = "step-mismatch"
    exit_code = 19


class OddOrNonpositivePointCount(SFHError):
    category = "odd-or-nonpositive-point-count"
    exit_code = 20
