"""Exception hierarchy shared by all iqgklo modules."""


class IQGKLOError(Exception):
    """Base class for all errors raised by this package."""


# --- diagram / instance validation ---

class NotADE(IQGKLOError):
    pass


class TauNotInvolution(IQGKLOError):
    pass


class TauNotAutomorphism(IQGKLOError):
    pass


class NotDominant(IQGKLOError):
    pass


class NotInCorootLattice(IQGKLOError):
    pass


class NegativeMultiplicity(IQGKLOError):
    pass


class IncompatibleOrientation(IQGKLOError):
    pass


class ThetaOutsideFixedSet(IQGKLOError):
    pass


class AdjacentThetas(IQGKLOError):
    pass


class WrongCase(IQGKLOError):
    pass


# --- exact arithmetic ---

class DivisionByZero(IQGKLOError):
    pass


class DenominatorVanishes(IQGKLOError):
    pass


# --- torus / delta calculus ---

class LocalizationViolation(IQGKLOError):
    pass


class DoublePin(IQGKLOError):
    pass


class NonSimplePole(IQGKLOError):
    pass


class UnpinnedResidual(IQGKLOError):
    pass


class DegreeMismatch(IQGKLOError):
    pass


# --- oracle / cli ---

class BadSpecialization(IQGKLOError):
    pass


class ParseError(IQGKLOError):
    pass


class ValidationError(IQGKLOError):
    pass
