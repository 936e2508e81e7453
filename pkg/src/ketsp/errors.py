"""Exception hierarchy shared by the library and the command line."""


class KetspError(Exception):
    """Base class for all solver errors."""


class EmptyInstanceError(KetspError, ValueError):
    pass


class DistinctnessError(KetspError, ValueError):
    pass


class DegenerateInstanceError(KetspError, ValueError):
    pass


class PreconditionError(KetspError, ValueError):
    pass


class CapacityError(KetspError):
    """An exact oracle was asked to solve an instance above its size limit."""


class SearchExhaustedError(KetspError):
    """No separator produced a valid decomposition and no fallback was possible."""


class ParseError(KetspError, ValueError):
    pass
