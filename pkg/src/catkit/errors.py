"""Exception hierarchy shared by every catkit module."""


class CatkitError(Exception):
    """Base class for all catkit errors."""


class ValidationError(CatkitError):
    """Input data violates a structural invariant."""


class SizeLimit(CatkitError):
    """A brute-force search space exceeds the configured candidate bound."""


# group_core
class NotLatinSquare(ValidationError):
    pass


class NoIdentityAtZero(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class MissingInverse(ValidationError):
    pass


class NotAHomomorphism(ValidationError):
    pass


# cat_core
class NotWellDefined(ValidationError):
    pass


class InvalidCategory(ValidationError):
    pass


# extensions
class NotInjective(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class ImageKernelMismatch(ValidationError):
    pass


class FiberEscape(ValidationError):
    pass


class CocycleViolation(ValidationError):
    pass


class CompatibilityViolation(ValidationError):
    pass


# nerve
class TruncationTooShallow(CatkitError):
    pass


# topology
class NotATopology(ValidationError):
    pass


class NotContinuous(ValidationError):
    pass


class ParseError(CatkitError):
    pass
