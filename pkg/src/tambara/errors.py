"""Exception hierarchy shared by all modules."""


class TambaraError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TambaraError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


class NotAssociative(InputError):
    def __init__(self, a, b, c):
        self.triple = (a, b, c)
        super().__init__(f"multiplication not associative at triple {a},{b},{c}")


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element {element} has no two-sided inverse")


class IndexOutOfRange(InputError):
    def __init__(self, value, bound):
        super().__init__(f"table entry {value} outside [0, {bound})")


class NotSubgroup(InputError):
    pass


class GroupMismatch(InputError):
    pass


class TargetMismatch(InputError):
    pass


class NotComposable(InputError):
    pass


class ShapeError(InputError):
    pass


class PortMismatch(InputError):
    pass


class WindowMiss(InputError):
    pass


class NotPrime(InputError):
    pass


class UnknownName(InputError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown name {name!r}")


class TnrSyntaxError(InputError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class VerificationFailure(TambaraError):
    """A checked property failed (CLI exit code 1)."""


class IsoNotFound(VerificationFailure):
    pass


class WitnessFailed(VerificationFailure):
    def __init__(self, basis_key):
        self.basis_key = basis_key
        super().__init__(f"no verified witness for basis class {basis_key!r}")


class ResourceBound(TambaraError):
    """An enumeration exceeded a configured cap (CLI exit code 3)."""

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__(f"resource bound exceeded: {what} > {limit}")
