"""Exception types shared across the package."""


class PolygameError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        out.update(self.details)
        return out


class InvalidInput(PolygameError, ValueError):
    code = "invalid-input"


class InvalidSpec(InvalidInput):
    code = "invalid-spec"


class NotInBase(InvalidInput):
    code = "not-in-base"


class UnstableSystem(InvalidInput):
    code = "unstable-system"


class CapExceeded(PolygameError):
    """Raised when an enumerating operation is asked for a ground set above the cap."""

    code = "cap-exceeded"
