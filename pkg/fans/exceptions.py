class TropFanError(Exception):
    """Base class for every error raised by the fans application."""


class InvalidFanError(TropFanError, ValueError):
    """The fan description violates a structural requirement."""


class NotUnimodularError(TropFanError):
    """An operation that needs a unimodular fan received one that is not."""

    def __init__(self, message, cones=()):
        super().__init__(message)
        self.cones = tuple(cones)


class UnbalancedFanError(TropFanError):
    """The weighted fan does not satisfy the balancing condition."""


class MissingWeightsError(TropFanError):
    pass


class ConeNotInFanError(TropFanError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else 'cone not in fan'


class InvalidConeError(TropFanError, ValueError):
    """The cone exists but does not meet the operation's requirements."""


class InvalidFunctionError(TropFanError, ValueError):
    """A conewise linear function has the wrong shape or non-integer values."""


class MatroidError(TropFanError, ValueError):
    pass


class ChowDegreeError(TropFanError, ValueError):
    """A Chow class has the wrong degree for the requested operation."""


class MalformedFileError(TropFanError, ValueError):
    """The text of an input file does not follow the section format."""


class UnknownFixtureError(TropFanError, LookupError):
    def __str__(self):
        return str(self.args[0]) if self.args else 'unknown fixture'
