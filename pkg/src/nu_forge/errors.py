"""Exception hierarchy shared by all engines.

Every error raised for bad user input derives from :class:`InputError` so the
CLI can map it to exit code 2; resource exhaustion derives from
:class:`ResourceLimit` (exit code 3).
"""


class NuForgeError(Exception):
    pass


class InputError(NuForgeError, ValueError):
    pass


class ResourceLimit(NuForgeError):
    pass


class UnknownGenerator(InputError):
    def __init__(self, name):
        super().__init__(f"unknown generator {name!r}")
        self.name = name


class WordSyntaxError(InputError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PresentationError(InputError):
    pass


class CosetLimitExceeded(ResourceLimit):
    def __init__(self, cap):
        super().__init__(f"coset enumeration did not complete within {cap} cosets")
        self.cap = cap


class IncompleteTable(NuForgeError):
    pass


class DegreeMismatch(InputError):
    pass


class ElementOutsideGroup(InputError):
    pass


class NotNormal(InputError):
    pass


class NotAbelian(InputError):
    pass


class GroupTooLarge(ResourceLimit):
    def __init__(self, order, bound):
        super().__init__(f"group order {order} exceeds enumeration bound {bound}")
        self.order = order
        self.bound = bound


class InvalidCayleyTable(InputError):
    pass


class UnknownGroup(InputError):
    pass
