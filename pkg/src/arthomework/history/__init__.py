from arthomework.history.analytics import (
    BrushFrequencyTable,
    EngagementAggregate,
    UsageOverview,
    aggregate_engagement,
    brush_usage_stats,
    compute_overview,
    round_hours,
)
from arthomework.history.export import export_history, import_archive
from arthomework.history.records import (
    RECORD_NAMESPACE,
    SEGMENT_NAMESPACE,
    HistoryRecord,
    compile_session_record,
)

__all__ = [
    "RECORD_NAMESPACE",
    "SEGMENT_NAMESPACE",
    "BrushFrequencyTable",
    "EngagementAggregate",
    "HistoryRecord",
    "UsageOverview",
    "aggregate_engagement",
    "brush_usage_stats",
    "compile_session_record",
    "compute_overview",
    "export_history",
    "import_archive",
    "round_hours",
]
