"""Exception hierarchy.

Every domain error derives from :class:`FlagpathError` (itself a
``ValueError``) so callers can catch the whole family at once; the CLI maps
these to exit status 1.
"""


class FlagpathError(ValueError):
    pass


class DimensionMismatch(FlagpathError):
    pass


class WrongStepMultiset(FlagpathError):
    pass


class IllegalSwitch(FlagpathError):
    pass


class InfeasiblePrefix(FlagpathError):
    pass


class NotAPartition(FlagpathError):
    pass


class EmptyPath(FlagpathError):
    pass


class OutOfRange(FlagpathError):
    pass


class GroundTooLarge(FlagpathError):
    pass


class GroundMismatch(FlagpathError):
    pass


class BadRank(FlagpathError):
    pass


class EmptyFamily(FlagpathError):
    pass


class IllegalMove(FlagpathError):
    pass


class WrongCardinality(FlagpathError):
    pass


class NotAFlagBasis(FlagpathError):
    pass
