"""
Training package: loop de treino, avaliação e relatórios
"""

from .trainer import DECISION_THRESHOLD, EpochRecord, Trainer, accuracy, train
from .evaluator import (
    ClassMetrics,
    ConfusionMatrix,
    EvalReport,
    Metrics,
    Prediction,
    compute_metrics,
    evaluate,
    predict,
    report_from_predictions,
)
from .reports import (
    format_confusion_grid,
    format_report_table,
    read_history_csv,
    write_confusion,
    write_eval_report,
    write_history_csv,
)

__all__ = [
    'DECISION_THRESHOLD', 'EpochRecord', 'Trainer', 'accuracy', 'train',
    'ClassMetrics', 'ConfusionMatrix', 'EvalReport', 'Metrics', 'Prediction',
    'compute_metrics', 'evaluate', 'predict', 'report_from_predictions',
    'format_confusion_grid', 'format_report_table', 'read_history_csv',
    'write_confusion', 'write_eval_report', 'write_history_csv',
]
