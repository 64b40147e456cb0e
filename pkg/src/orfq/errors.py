"""Exception hierarchy.

Errors are split into two families so the command line can map them onto
exit codes: problems with the caller's input (``SpecError``) and numerical
breakdowns (``NumericalError``).
"""


class OrfqError(Exception):
    """Base class for every error raised by the package."""


class SpecError(OrfqError):
    """Invalid input: malformed files, bad parameters, inconsistent shapes."""


class NumericalError(OrfqError):
    """A computation broke down or produced data violating an invariant."""


class BadSpec(SpecError):
    pass


class SequenceMismatch(SpecError):
    pass


class ShapeMismatch(SpecError):
    pass


class SpaceMismatch(SpecError):
    pass


class BadTau(SpecError):
    pass


class ParamRegionViolation(SpecError):
    pass


class TooLarge(SpecError):
    pass


class ReducibleFactor(SpecError):
    pass


class PoleHit(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class NormalizationDegenerate(NumericalError):
    pass


class NonPositiveESquared(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class TooCloseToSupport(NumericalError):
    pass


class ZeroOffCircle(NumericalError):
    pass


class DerivativeDegenerate(NumericalError):
    pass


class SingularResolvent(NumericalError):
    pass


class EigFailure(NumericalError):
    pass


class NoConvergence(EigFailure):
    pass


class DefectiveCluster(EigFailure):
    pass


class DegenerateLeading(NumericalError):
    pass


class SingularPencilEverywhere(NumericalError):
    pass
