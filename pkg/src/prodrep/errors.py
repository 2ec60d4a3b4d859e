"""Exception types raised across the toolkit."""


class ProdRepError(ValueError):
    pass


class NonPrime(ProdRepError):
    pass


class SizeCapExceeded(ProdRepError):
    pass


class ZeroElement(ProdRepError):
    pass


class NotADivisor(ProdRepError):
    pass


class ZeroPolynomial(ProdRepError):
    pass


class ConstantPolynomial(ProdRepError):
    pass


class HypothesisViolated(ProdRepError):
    pass


class NotCoprime(ProdRepError):
    pass


class NotAUnit(ProdRepError):
    pass


class Degenerate(ProdRepError):
    pass


class EmptyConstruction(ProdRepError):
    pass


class NoValidB0(ProdRepError):
    pass


class PrecondViolated(ProdRepError):
    pass


class ConfigInvalid(ProdRepError):
    pass
