"""Exception types shared across the library."""


class QentwineError(Exception):
    pass


class DivisionByZero(QentwineError, ZeroDivisionError):
    pass


class DenominatorVanishes(QentwineError):
    pass


class RewriteBudgetExceeded(QentwineError):
    pass


class DegreeOverflow(QentwineError):
    pass


class WindowExceeded(QentwineError):
    pass


class Inconsistent(QentwineError):
    pass


class NotFiltered(QentwineError):
    pass


class NotUnitalAtE(QentwineError):
    pass


class SingularComponent(QentwineError):
    pass


class SectionUndefined(QentwineError):
    pass


class SectionIncompatible(QentwineError):
    pass


class ValuesNotInM(QentwineError):
    pass


class BetaConditionFails(QentwineError):
    pass


class NotInKernel(QentwineError):
    pass


class CovarianceFails(QentwineError):
    pass


class NotHomogeneous(QentwineError):
    pass


class HypothesisFails(QentwineError):
    pass


class RepresentativeDependent(QentwineError):
    pass


class NoConsistentConvention(QentwineError):
    pass


class ConfigInvalid(QentwineError):
    pass


class ParseError(QentwineError):
    pass
