"""Multiple-choice QA benchmark harness and its analyses."""

from .analyses import (
    ABSENT_BIN,
    PositionBin,
    RecallPoint,
    SourceProportion,
    gold_recall_at_k,
    position_analysis,
    recall_curve,
    snippet_source,
    source_proportion,
)
from .runner import (
    EvalRecord,
    RunConfig,
    TaskReport,
    average_score,
    binomial_std_percent,
    evaluate_item,
    evaluate_task,
    scaling_sweep,
    score_task,
)
from .tasks import TASK_KINDS, QAItem, Task, load_task, task_to_dict

__all__ = [
    "ABSENT_BIN",
    "EvalRecord",
    "PositionBin",
    "QAItem",
    "RecallPoint",
    "RunConfig",
    "SourceProportion",
    "TASK_KINDS",
    "Task",
    "TaskReport",
    "average_score",
    "binomial_std_percent",
    "evaluate_item",
    "evaluate_task",
    "gold_recall_at_k",
    "load_task",
    "position_analysis",
    "recall_curve",
    "scaling_sweep",
    "score_task",
    "snippet_source",
    "source_proportion",
    "task_to_dict",
]
