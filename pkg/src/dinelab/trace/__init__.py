from .io import SCHEMA, SCHEMA_VERSION, TraceFormatError, export_trace, import_trace, traces_equal
from .store import (
    RefilteredDines,
    StandardizedView,
    Trace,
    TraceMeta,
    TraceRecord,
    refilter,
    standardize,
)

__all__ = [
    "RefilteredDines",
    "SCHEMA",
    "SCHEMA_VERSION",
    "StandardizedView",
    "Trace",
    "TraceFormatError",
    "TraceMeta",
    "TraceRecord",
    "export_trace",
    "import_trace",
    "refilter",
    "standardize",
    "traces_equal",
]
