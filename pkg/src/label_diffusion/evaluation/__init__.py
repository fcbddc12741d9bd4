from .metrics import average_recall, average_recall_exact, iou, subcategory_report
from .reports import RECORD_COLUMNS, write_ablation_csv, write_records_csv, write_summary_csv
from .runner import EvalSettings, evaluate_scenes

__all__ = [
    "EvalSettings",
    "RECORD_COLUMNS",
    "average_recall",
    "average_recall_exact",
    "evaluate_scenes",
    "iou",
    "subcategory_report",
    "write_ablation_csv",
    "write_records_csv",
    "write_summary_csv",
]
