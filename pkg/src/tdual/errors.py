class TDualError(Exception):
    """Base class for every error raised by tdual."""


class IllFormedHom(TDualError):
    pass


class UnknownDescriptor(TDualError):
    pass


class BadParameters(TDualError):
    pass


class DegreeOverflow(TDualError):
    pass


class DegreeOutOfRange(TDualError):
    pass


class ObstructionNonzero(TDualError):
    """The cup product that must vanish (c u t, or c0 u c1) does not."""


class BaseMismatch(TDualError):
    pass


class UnsupportedDimension(TDualError):
    pass


class UnsupportedTwist(TDualError):
    pass


class NotDualizable(TDualError):
    pass
