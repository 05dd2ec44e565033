"""Exception hierarchy.

Every error carries a one-line ``remedy`` that the command-line front-end
prints next to the error name.
"""

from __future__ import annotations


class QExtendError(Exception):
    remedy = "check the inputs"

    @property
    def name(self) -> str:
        return type(self).__name__


class EmptyGenerators(QExtendError, ValueError):
    remedy = "pass at least one generator"


class NonPositiveScale(QExtendError, ValueError):
    remedy = "scale factors must be strictly positive"


class InvalidCorridor(QExtendError, ValueError):
    remedy = "use gamma_minus in (0, 1] and gamma_plus in [1, +inf)"


class ResolutionZeroInFloatMode(QExtendError, ValueError):
    remedy = "use a positive resolution when generators are not exact"


class BudgetExceeded(QExtendError, RuntimeError):
    remedy = "lower the depth or raise the budget (QEXTEND_POINT_BUDGET)"


class AnotSubsetOfI(QExtendError, ValueError):
    remedy = "intersect A with I before applying the extension operator"


class UNotNontrivial(QExtendError, ValueError):
    remedy = "the starting set U needs positive length"


class UNotSubsetOfI(QExtendError, ValueError):
    remedy = "choose U inside I"


class XNotInI(QExtendError, ValueError):
    remedy = "choose a starting point inside I"


class InconsistentAtOne(QExtendError, ValueError):
    remedy = "c(1) must be 0 when 1 is a generator"


class InconsistentInverse(QExtendError, ValueError):
    remedy = "c(t) and c(1/t) must satisfy c(t) = -t^p c(1/t); no solution exists otherwise"


class NoTestablePairs(QExtendError, ValueError):
    remedy = "sample more densely so that x and t*x both fall on the grid"


class SeedEmpty(QExtendError, ValueError):
    remedy = "provide at least one seed sample"


class OrbitOverlap(QExtendError, ValueError):
    remedy = "pick a base support whose orbit copies are disjoint (or shrink I)"


class OrbitNotClosed(QExtendError, RuntimeError):
    remedy = "increase the depth so the support orbit closes"


class ExpressionError(QExtendError, ValueError):
    remedy = "use infix arithmetic over x, y, t and log/exp/pow"


class ConfigParse(QExtendError, ValueError):
    remedy = "fix the JSON config (see docs/schemas)"


class DepthZeroNoWork(UserWarning):
    """Propagation was asked to run zero rounds."""


class RatioTooLarge(UserWarning):
    """sup I / inf I is not known to lie below the limit ratio."""
