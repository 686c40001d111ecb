"""Exception types shared across the package."""


class CapacityError(Exception):
    """An input exceeds a hard size cap (single-word bitmask limits)."""


class GraphParseError(ValueError):
    """Malformed graph text.

    `offset` is the byte position of the offending token within the input.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class VerificationError(RuntimeError):
    """A mandatory runtime self-check failed.

    Raised when a constructed witness family fails its initiality, height or
    rank verification. This signals an implementation bug, not a usage error.
    """
