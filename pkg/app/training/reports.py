"""
📝 Reports

Exportação de histórico (CSV), EvalReport (JSON + tabela texto) e matriz
de confusão (JSON + grade texto).
"""

import json
import logging
from pathlib import Path
from typing import List, Sequence

import pandas as pd

from app.data.dataset_io import Label
from app.training.evaluator import ConfusionMatrix, EvalReport
from app.training.trainer import EpochRecord

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ["epoch", "train_loss", "train_acc", "val_loss", "val_acc"]


# ─────────────────────────────────────────────
# HISTÓRICO
# ─────────────────────────────────────────────

def history_frame(history: Sequence[EpochRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            [r.epoch, r.train_loss, r.train_accuracy, r.val_loss, r.val_accuracy]
            for r in history
        ],
        columns=HISTORY_COLUMNS,
    )


def write_history_csv(history: Sequence[EpochRecord], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # repr do float garante CSV idêntico para históricos idênticos
    history_frame(history).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    logger.info(f"📝 Histórico salvo: {path} ({len(history)} épocas)")
    return path


def read_history_csv(path) -> List[EpochRecord]:
    df = pd.read_csv(path, float_precision="round_trip")
    return [
        EpochRecord(
            epoch=int(row.epoch),
            train_loss=float(row.train_loss),
            train_accuracy=float(row.train_acc),
            val_loss=float(row.val_loss),
            val_accuracy=float(row.val_acc),
        )
        for row in df.itertuples(index=False)
    ]


# ─────────────────────────────────────────────
# EVAL REPORT
# ─────────────────────────────────────────────

def _pct(value: float, decimals: int) -> str:
    return f"{value * 100:.{decimals}f}%"


def format_report_table(report: EvalReport, decimals: int = 2) -> str:
    """
    Tabela alinhada: linhas Fake / Real / Average, colunas Precision,
    Recall, F1 Score e Accuracy (só na primeira linha).
    """
    header = ["", "Precision", "Recall", "F1 Score", "Accuracy"]
    rows = [
        ["Fake", report.fake, _pct(report.accuracy, decimals)],
        ["Real", report.real, ""],
        ["Average", report.macro, ""],
    ]
    table = [header] + [
        [name, _pct(m.precision, decimals), _pct(m.recall, decimals), _pct(m.f1, decimals), acc]
        for name, m, acc in rows
    ]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = [
        "  ".join(cell.ljust(widths[0]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(r)).rstrip()
        for r in table
    ]
    if report.loss is not None:
        lines.append(f"Loss: {report.loss:.4f}   Exemplos: {report.examples}")
    return "\n".join(lines) + "\n"


def write_eval_report(report: EvalReport, json_path, text_path=None) -> None:
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    if text_path is not None:
        Path(text_path).write_text(format_report_table(report), encoding="utf-8")
    logger.info(f"📝 EvalReport salvo: {json_path}")


# ─────────────────────────────────────────────
# CONFUSION MATRIX
# ─────────────────────────────────────────────

def format_confusion_grid(cm: ConfusionMatrix) -> str:
    """Grade 2×2 em termos de classes: linhas = real, colunas = previsto."""
    fake_view = cm if cm.positive is Label.FAKE else cm.swapped()
    cells = [
        ["", "pred fake", "pred real"],
        ["true fake", str(fake_view.tp), str(fake_view.fn)],
        ["true real", str(fake_view.fp), str(fake_view.tn)],
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(3)]
    lines = [
        "  ".join(c.ljust(widths[0]) if i == 0 else c.rjust(widths[i]) for i, c in enumerate(r)).rstrip()
        for r in cells
    ]
    lines.append(f"(classe positiva: {cm.positive.value})")
    return "\n".join(lines) + "\n"


def write_confusion(cm: ConfusionMatrix, json_path, text_path=None) -> None:
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(json.dumps(cm.counts(), indent=2), encoding="utf-8")
    if text_path is not None:
        Path(text_path).write_text(format_confusion_grid(cm), encoding="utf-8")
    logger.info(f"📝 Matriz de confusão salva: {json_path}")
