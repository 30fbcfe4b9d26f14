"""Exception types shared across the package."""


class StructureError(ValueError):
    """Malformed data: bad shapes, unknown names, unparsable scalars.

    Raised before any mathematical checking starts.
    """


class ValidationFailure(Exception):
    """An upstream entity failed validation and a construction refused it.

    Carries the offending report so callers can surface the witnesses.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InternalCheckError(RuntimeError):
    """A fact guaranteed by construction failed to hold.

    Seeing this means the library itself is inconsistent, not the input.
    """
