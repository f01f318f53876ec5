"""Exception hierarchy.

Every numerical failure derives from :class:`NumericalFailure` so the CLI can map
it to exit code 3; malformed inputs derive from :class:`SpecError` (exit code 2).
"""


class MembraneError(Exception):
    pass


class SpecError(MembraneError, ValueError):
    pass


class InvalidMap(SpecError):
    pass


class InvalidPoint(MembraneError, ValueError):
    pass


class NumericalFailure(MembraneError, ArithmeticError):
    pass


class NonconvergedIntegral(NumericalFailure):
    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = tuple(estimates) if estimates is not None else ()


class NonintegrableExponent(NumericalFailure, ValueError):
    pass


class PrevertexSingularity(NumericalFailure, ValueError):
    pass


class UnboundedDerivative(NumericalFailure, ValueError):
    pass


class AlphaOutOfRange(MembraneError, ValueError):
    pass


class ExponentOutOfRange(MembraneError, ValueError):
    pass


class NonconvergedDiameter(NumericalFailure):
    pass


class DerivativeZeroOnSamples(NumericalFailure):
    pass


class SolverNonconvergence(NumericalFailure):
    pass


class SingularMass(NumericalFailure):
    pass


class NoSpectralGap(NumericalFailure):
    pass
