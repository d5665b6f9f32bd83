"""Error codes and exceptions raised by the shape_nerve library."""
from typing import Any, Dict, Optional

DEGENERATE_TRIANGLE = "DEGENERATE_TRIANGLE"
TOO_FEW_VERTICES = "TOO_FEW_VERTICES"
POLYGON_INVALID = "POLYGON_INVALID"
TRIANGULATION_IMPOSSIBLE = "TRIANGULATION_IMPOSSIBLE"
ISOLATED_VERTEX = "ISOLATED_VERTEX"
HOST_MISMATCH = "HOST_MISMATCH"
EMPTY_COVER = "EMPTY_COVER"
SCHEMA_ERROR = "SCHEMA_ERROR"
NUMBER_PARSE_ERROR = "NUMBER_PARSE_ERROR"
UNKNOWN_VERTEX = "UNKNOWN_VERTEX"
INVALID_COMPLEX = "INVALID_COMPLEX"
INVALID_ARGUMENT = "INVALID_ARGUMENT"
IO_ERROR = "IO_ERROR"


class ShapeNerveError(Exception):
    """Base error carrying a machine-readable code and optional context.

    The context dictionary holds locating details such as ``field`` or
    ``line`` for document errors, or the offending indices for geometry errors.
    """

    code = INVALID_ARGUMENT

    def __init__(self, message: str, code: Optional[str] = None, **context: Any):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        """Result dictionary in the shape returned by the MCP tools."""
        result: Dict[str, Any] = {
            "success": False,
            "error": self.message,
            "code": self.code,
        }
        if self.context:
            result["context"] = {k: _plain(v) for k, v in self.context.items()}
        return result

    def error_line(self) -> str:
        """Single-line machine-readable form used by the CLI."""
        parts = [f"error code={self.code}"]
        for key in sorted(self.context):
            value = _plain(self.context[key])
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            parts.append(f"{key}={value}")
        parts.append(f'message="{self.message}"')
        return " ".join(parts)


class GeometryError(ShapeNerveError):
    code = DEGENERATE_TRIANGLE


class PolygonError(ShapeNerveError):
    code = POLYGON_INVALID


class TriangulationError(ShapeNerveError):
    code = TRIANGULATION_IMPOSSIBLE


class ComplexError(ShapeNerveError):
    code = INVALID_COMPLEX


class HostMismatchError(ShapeNerveError):
    code = HOST_MISMATCH


class DocumentError(ShapeNerveError):
    code = SCHEMA_ERROR


def _plain(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
