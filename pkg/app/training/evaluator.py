"""
📊 Evaluator

Matriz de confusão, métricas por classe e média macro:

    Precision = TP / (TP + FP)
    Recall    = TP / (TP + FN)
    F1        = 2TP / (2TP + FP + FN)
    Accuracy  = (TP + TN) / (TP + TN + FP + FN)

Casos 0/0 valem 0 e geram um warning no relatório.
"""

import logging
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from app.data.dataset_io import Label
from app.errors import DataError
from app.neural.gru_model import forward_batch, mean_bce, predict_proba
from app.persistence.model_bundle import ModelBundle
from app.text.text_pipeline import LemmatizerMode, TextSource, preprocess
from app.text.vectorizer import LABEL_IDS, EncodedDataset, encode, pad
from app.training.trainer import DECISION_THRESHOLD

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════
# MODELS
# ═══════════════════════════════════════════════════════════

class ConfusionMatrix(BaseModel):
    """Contagens 2×2 relativas à classe positiva"""

    tp: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)
    tn: int = Field(0, ge=0)
    positive: Label = Label.FAKE

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def swapped(self) -> "ConfusionMatrix":
        """Mesma matriz com a outra classe como positiva."""
        other = Label.REAL if self.positive is Label.FAKE else Label.FAKE
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp, positive=other)

    def counts(self) -> Dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}

    @classmethod
    def from_predictions(cls, y_true, y_pred, positive: Label = Label.FAKE) -> "ConfusionMatrix":
        """y_true/y_pred em ids de label (fake=0, real=1)."""
        positive = Label(positive)
        y_true = np.asarray(y_true).astype(np.int64)
        y_pred = np.asarray(y_pred).astype(np.int64)
        pos = LABEL_IDS[positive.value]
        return cls(
            tp=int(np.sum((y_true == pos) & (y_pred == pos))),
            fp=int(np.sum((y_true != pos) & (y_pred == pos))),
            fn=int(np.sum((y_true == pos) & (y_pred != pos))),
            tn=int(np.sum((y_true != pos) & (y_pred != pos))),
            positive=positive,
        )


class Metrics(BaseModel):
    precision: float = Field(..., ge=0, le=1)
    recall: float = Field(..., ge=0, le=1)
    f1: float = Field(..., ge=0, le=1)
    accuracy: float = Field(..., ge=0, le=1)
    warnings: List[str] = Field(default_factory=list)


class ClassMetrics(BaseModel):
    precision: float = Field(..., ge=0, le=1)
    recall: float = Field(..., ge=0, le=1)
    f1: float = Field(..., ge=0, le=1)
    support: Optional[int] = Field(None, description="Exemplos reais da classe (None na média)")


class EvalReport(BaseModel):
    """Métricas no layout da tabela de performance"""

    fake: ClassMetrics
    real: ClassMetrics
    macro: ClassMetrics
    accuracy: float = Field(..., ge=0, le=1)
    loss: Optional[float] = Field(None, ge=0, description="BCE média no conjunto avaliado")
    confusion_matrix: ConfusionMatrix
    examples: int = Field(..., ge=1)
    warnings: List[str] = Field(default_factory=list)


class Prediction(BaseModel):
    label: Label
    probability: float = Field(..., ge=0, le=1, description="P(real)")
    warning: Optional[str] = None


# ═══════════════════════════════════════════════════════════
# METRICS
# ═══════════════════════════════════════════════════════════

def _ratio(num: int, den: int, name: str, warnings: List[str]) -> float:
    if den == 0:
        warnings.append(f"{name}: 0/0 definido como 0")
        return 0.0
    return num / den


def compute_metrics(cm: ConfusionMatrix) -> Metrics:
    """
    Precision, recall, F1 e accuracy da matriz.

    Raises:
        DataError: matriz toda zerada
    """
    if cm.total == 0:
        raise DataError("matriz de confusão vazia: nenhum exemplo contado")

    warnings: List[str] = []
    tag = cm.positive.value
    metrics = Metrics(
        precision=_ratio(cm.tp, cm.tp + cm.fp, f"precision[{tag}]", warnings),
        recall=_ratio(cm.tp, cm.tp + cm.fn, f"recall[{tag}]", warnings),
        f1=_ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, f"f1[{tag}]", warnings),
        accuracy=(cm.tp + cm.tn) / cm.total,
        warnings=warnings,
    )
    for w in warnings:
        logger.warning(f"⚠️ {w}")
    return metrics


def report_from_predictions(
    y_true,
    y_pred,
    loss: Optional[float] = None,
    positive: Label = Label.FAKE,
) -> EvalReport:
    """EvalReport a partir de pares (label, predição) em ids 0/1."""
    y_true = np.asarray(y_true)
    if len(y_true) == 0:
        raise DataError("empty test set: nada para avaliar")

    cm = ConfusionMatrix.from_predictions(y_true, y_pred, positive=positive)
    by_class = {cm.positive: compute_metrics(cm), cm.swapped().positive: compute_metrics(cm.swapped())}
    fake, real = by_class[Label.FAKE], by_class[Label.REAL]

    def per_class(m: Metrics, label: Label) -> ClassMetrics:
        support = int(np.sum(y_true.astype(np.int64) == LABEL_IDS[label.value]))
        return ClassMetrics(precision=m.precision, recall=m.recall, f1=m.f1, support=support)

    return EvalReport(
        fake=per_class(fake, Label.FAKE),
        real=per_class(real, Label.REAL),
        macro=ClassMetrics(
            precision=(fake.precision + real.precision) / 2,
            recall=(fake.recall + real.recall) / 2,
            f1=(fake.f1 + real.f1) / 2,
        ),
        accuracy=fake.accuracy,
        loss=loss,
        confusion_matrix=cm,
        examples=len(y_true),
        warnings=fake.warnings + real.warnings,
    )


def evaluate(model: ModelBundle, test_set: EncodedDataset, positive: Label = Label.FAKE) -> EvalReport:
    """Avalia o modelo no conjunto (threshold 0.5: p ≥ 0.5 → real)."""
    if len(test_set) == 0:
        raise DataError("empty test set: nada para avaliar")

    p = predict_proba(test_set.ids, model.params, model.hyperparams)
    y_pred = (p >= DECISION_THRESHOLD).astype(np.int64)
    report = report_from_predictions(
        test_set.labels,
        y_pred,
        loss=mean_bce(p, test_set.labels, model.hyperparams.clip_epsilon),
        positive=positive,
    )

    logger.info("📊 Avaliação:")
    logger.info(f"   - Exemplos: {report.examples}")
    logger.info(f"   - Accuracy: {report.accuracy:.4f}")
    logger.info(f"   - Loss: {report.loss:.4f}")
    logger.info(f"   - F1 fake/real: {report.fake.f1:.4f} / {report.real.f1:.4f}")
    return report


# ═══════════════════════════════════════════════════════════
# INFERENCE
# ═══════════════════════════════════════════════════════════

def text_settings(model: ModelBundle):
    """(TextSource, LemmatizerMode) usados no treino do bundle."""
    config = model.config or {}
    return (
        TextSource(config.get("text_source", TextSource.BOTH)),
        LemmatizerMode(config.get("lemmatizer", LemmatizerMode.IDENTITY)),
    )


def predict(model: ModelBundle, raw_headline: str, raw_content: str) -> Prediction:
    """
    Pipeline completo para uma notícia: clean → tokenize → lemmatize →
    encode → pad → forward.

    Texto vazio após limpeza gera warning, mas ainda prevê (sequência só PAD).
    """
    if model.vocab is None:
        raise DataError("model bundle sem vocabulário: não dá para codificar texto")

    source, mode = text_settings(model)
    tokens = preprocess(raw_headline, raw_content, source, mode)

    warning = None
    if not tokens:
        warning = "texto vazio após limpeza; previsão feita sobre sequência só de PAD"
        logger.warning(f"⚠️ {warning}")

    ids = np.asarray([pad(encode(tokens, model.vocab), model.hyperparams.seq_len)])
    p, _ = forward_batch(ids, model.params, model.hyperparams)
    probability = float(p[0])
    label = Label.REAL if probability >= DECISION_THRESHOLD else Label.FAKE
    return Prediction(label=label, probability=probability, warning=warning)
