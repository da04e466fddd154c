"""Exception hierarchy shared by every module of the package."""


class CommensurError(Exception):
    """Base class for all errors raised by commensur."""


class RankMismatch(CommensurError, ValueError):
    pass


class NotASublattice(CommensurError, ValueError):
    pass


class NotIsogeny(CommensurError, ValueError):
    """A map whose kernel or cokernel is infinite.

    ``side`` is one of ``"kernel"``, ``"cokernel"`` or ``"both"``.
    """

    def __init__(self, side, message=None):
        self.side = side
        super().__init__(message or f"not an isogeny: infinite {side}")


class NotFinite(CommensurError, ValueError):
    pass


class ObjectMismatch(CommensurError, ValueError):
    pass


class EndpointMismatch(CommensurError, ValueError):
    pass


class NotInCommutant(CommensurError, ValueError):
    pass


class Singular(CommensurError, ValueError):
    pass


class NotCommensurable(CommensurError, ValueError):
    pass


class OrderNotSemisimple(CommensurError, ValueError):
    pass


class NotSubmodule(CommensurError, ValueError):
    pass


class NotPrimePower(CommensurError, ValueError):
    pass


class MalformedInput(CommensurError, ValueError):
    pass


class CapExceeded(CommensurError, RuntimeError):
    """An enumeration would exceed its configured cap.

    Brute-force routines never truncate silently; they raise this instead.
    """

    def __init__(self, needed, cap, what="elements"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what}: {needed} exceeds cap {cap}")
