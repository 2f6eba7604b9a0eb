"""Exception types shared across the package."""


class MarketModelError(ValueError):
    """Base class for all input and model errors raised by this package."""


class NegativeMass(MarketModelError):
    pass


class ColumnSumMismatch(MarketModelError):
    pass


class InfeasibleSpread(MarketModelError):
    pass


class ZeroMassOutcome(MarketModelError):
    pass


class NotBinary(MarketModelError):
    pass


class LengthMismatch(MarketModelError):
    pass


class DegeneratePrior(MarketModelError):
    pass


class NonMonotoneStrategy(MarketModelError):
    pass


class GridOutOfRange(MarketModelError):
    pass


class NotComparable(MarketModelError):
    pass


class ParamOutOfRange(MarketModelError):
    pass


class NoFocalBuyer(MarketModelError):
    pass


class SchemaError(MarketModelError):
    pass


class ValidationError(MarketModelError):
    pass


class NoEquilibriumFound(RuntimeError):
    """Raised if the cutoff scan finds no equilibrium; indicates a solver defect."""
