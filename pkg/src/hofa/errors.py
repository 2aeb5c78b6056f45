"""Exception hierarchy.

Validation errors (bad input, caps exceeded) map to CLI exit code 2;
analysis errors (a computation that cannot deliver a trustworthy answer)
map to exit code 3.
"""


class HofaError(Exception):
    pass


class ValidationError(HofaError, ValueError):
    pass


class AnalysisError(HofaError, RuntimeError):
    pass


# group_core
class EmptyFactors(ValidationError):
    pass


class FactorTooSmall(ValidationError):
    pass


class OrderExceedsCap(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


# function_space
class GroupMismatch(ValidationError):
    pass


class InvalidP(ValidationError):
    pass


class BadSubset(ValidationError):
    pass


class NotPrimeFactor(ValidationError):
    pass


# gowers / multilinear
class InvalidOrder(ValidationError):
    pass


class EnumerationTooLarge(ValidationError):
    pass


class IncompleteSystem(ValidationError):
    pass


class NotPrimeCyclic(ValidationError):
    pass


class NotUnimodular(AnalysisError):
    pass


class NotBilinear(AnalysisError):
    pass


class InternalConsistencyError(AnalysisError):
    pass


# spectral
class InvalidEpsilon(ValidationError):
    pass


class UnsupportedOrder(ValidationError):
    pass


class NonHermitian(AnalysisError):
    pass


class SeparationFailed(AnalysisError):
    pass


# regularity
class InvalidSamples(ValidationError):
    pass


class CapExceeded(ValidationError):
    pass


class DecompositionMismatch(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


# cli
class ParseError(ValidationError):
    pass


class UnknownGenerator(ValidationError):
    pass


class BadParameter(ValidationError):
    pass
