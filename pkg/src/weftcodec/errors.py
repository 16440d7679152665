"""Exception hierarchy shared across the toolkit.

Grouped so the CLI can map failures onto exit-code families:
validation errors, I/O errors, and decode-stage errors.
"""


class WeftError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(WeftError, ValueError):
    """Bad argument or malformed input data."""


class LayoutError(InvalidInputError):
    """Pattern does not fit the render canvas."""


class EmptyObjectError(InvalidInputError):
    """Distance transform requested on a mask with no object pixels."""


class AxisEstimationError(WeftError):
    """Too few local minima to place warp or weft axes."""


class DegenerateColorsError(WeftError):
    """Image intensity range too flat to split into two yarn colors."""


class CollisionError(InvalidInputError):
    """Two crossing points round to the same pixel."""


class ContractViolationError(WeftError):
    """External likelihood map breaks the agreed file contract."""


class StaleRevisionError(WeftError):
    """Annotation edit based on an out-of-date revision."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"stale revision: session is at {expected}, edit based on {got}")
        self.expected = expected
        self.got = got


class InvalidStateError(WeftError):
    """Annotation session is not in a state that allows the operation."""


class DecodeStageError(WeftError):
    """Failure inside a decode stage, labeled with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"decode stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
