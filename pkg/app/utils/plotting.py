"""
📈 Figuras opcionais (--plots)

Figure + FigureCanvasAgg, sem pyplot.
"""

import logging
from pathlib import Path
from typing import Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from app.data.dataset_io import ClassCounts, Label

logger = logging.getLogger(__name__)

CLASS_COLORS = {"fake": "#d62728", "real": "#1f77b4"}


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    logger.info(f"📈 Figura salva: {path}")
    return path


def plot_class_distribution(counts: ClassCounts, path, title: str = "Class distribution") -> Path:
    fig = Figure(figsize=(4.5, 3.5))
    ax = fig.add_subplot(111)
    names = [Label.FAKE.value, Label.REAL.value]
    values = [counts.fake, counts.real]
    bars = ax.bar(names, values, color=[CLASS_COLORS[n] for n in names])
    for bar, value in zip(bars, values):
        ax.annotate(str(value), (bar.get_x() + bar.get_width() / 2, value), ha="center", va="bottom")
    ax.set_ylabel("documents")
    ax.set_title(title)
    return _save(fig, path)


def plot_history(history: Sequence, path) -> Path:
    """Curvas de loss e accuracy (treino vs validação), lado a lado."""
    epochs = [r.epoch for r in history]
    fig = Figure(figsize=(9, 3.5))
    ax_loss, ax_acc = fig.subplots(1, 2)

    ax_loss.plot(epochs, [r.train_loss for r in history], marker="o", label="train")
    ax_loss.plot(epochs, [r.val_loss for r in history], marker="o", label="validation")
    ax_loss.set_title("Training and validation loss")
    ax_loss.set_xlabel("epoch")
    ax_loss.legend()

    ax_acc.plot(epochs, [r.train_accuracy for r in history], marker="o", label="train")
    ax_acc.plot(epochs, [r.val_accuracy for r in history], marker="o", label="validation")
    ax_acc.set_title("Training and validation accuracy")
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylim(0, 1.02)
    ax_acc.legend()
    return _save(fig, path)


def plot_confusion(cm, path) -> Path:
    """Heatmap 2×2: linhas = classe real, colunas = classe prevista (fake, real)."""
    view = cm if cm.positive is Label.FAKE else cm.swapped()
    grid = [[view.tp, view.fn], [view.fp, view.tn]]
    labels = [Label.FAKE.value, Label.REAL.value]

    fig = Figure(figsize=(4, 3.5))
    ax = fig.add_subplot(111)
    image = ax.imshow(grid, cmap="Blues")
    fig.colorbar(image, ax=ax)
    peak = max(max(row) for row in grid) or 1
    for i in range(2):
        for j in range(2):
            color = "white" if grid[i][j] > peak / 2 else "black"
            ax.text(j, i, str(grid[i][j]), ha="center", va="center", color=color)
    ax.set_xticks([0, 1], labels=labels)
    ax.set_yticks([0, 1], labels=labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title("Confusion matrix")
    return _save(fig, path)
