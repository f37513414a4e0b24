from .decoder import (
    CycleResult,
    MergeCapExceeded,
    SnowflakeDecoder,
    SnowflakeError,
    TopSheetError,
    TraceEvent,
    WindowState,
)
from .invariants import check_quiescent

__all__ = [
    "CycleResult",
    "MergeCapExceeded",
    "SnowflakeDecoder",
    "SnowflakeError",
    "TopSheetError",
    "TraceEvent",
    "WindowState",
    "check_quiescent",
]
