"""
🏋️ Trainer

Loop de mini-batches com Adam e histórico por época.

Por época:
1. shuffle do treino com o gerador da seed
2. batches de batch_size (o último batch parcial entra)
3. por batch: forward, BCE média, gradiente médio, um adam_step
4. loss/accuracy de treino (média dos batches) e de validação
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.errors import DataError, NumericError
from app.neural.gru_model import (
    GradSet,
    Hyperparams,
    ModelParams,
    backward,
    forward_batch,
    init_params,
    mean_bce,
    predict_proba,
)
from app.neural.optimizer import AdamState, adam_step
from app.persistence.model_bundle import ModelBundle
from app.text.vectorizer import EncodedDataset, Vocabulary

logger = logging.getLogger(__name__)

DECISION_THRESHOLD = 0.5


class EpochRecord(BaseModel):
    """Uma linha do histórico de treino"""

    epoch: int = Field(..., ge=1)
    train_loss: float = Field(..., ge=0)
    train_accuracy: float = Field(..., ge=0, le=1)
    val_loss: float = Field(..., ge=0)
    val_accuracy: float = Field(..., ge=0, le=1)


def accuracy(p: np.ndarray, y: np.ndarray) -> float:
    """Fração de acertos com threshold 0.5 (p ≥ 0.5 → classe 1)."""
    if len(y) == 0:
        return 0.0
    return float(np.mean((np.asarray(p) >= DECISION_THRESHOLD) == (np.asarray(y) == 1)))


class Trainer:
    """
    Treina um modelo GRU do zero.

    threads > 1 divide cada batch em blocos contíguos processados em paralelo;
    os gradientes dos blocos são somados sempre na ordem crescente do bloco,
    então o resultado é reprodutível para um mesmo número de threads.
    """

    def __init__(self, hp: Hyperparams, threads: int = 1):
        if threads < 1:
            raise ValueError(f"threads deve ser ≥ 1 (recebido {threads})")
        self.hp = hp
        self.threads = threads

    def _chunk_gradients(self, ids, y, params: ModelParams) -> Tuple[np.ndarray, GradSet]:
        p, cache = forward_batch(ids, params, self.hp)
        return p, backward(cache, params, y, self.hp)

    def _batch_gradients(self, ids, y, params: ModelParams, pool) -> Tuple[np.ndarray, GradSet]:
        if pool is None or len(ids) < 2:
            return self._chunk_gradients(ids, y, params)

        chunks = [c for c in np.array_split(np.arange(len(ids)), self.threads) if len(c)]
        results = list(pool.map(lambda c: self._chunk_gradients(ids[c], y[c], params), chunks))

        # backward devolve a média do bloco; repondera para a média do batch
        total = GradSet.zeros_like(params)
        for c, (_, g) in zip(chunks, results):
            weight = params.E.dtype.type(len(c) / len(ids))
            for name, acc in total.items():
                acc += weight * getattr(g, name)
        return np.concatenate([p for p, _ in results]), total

    def fit(
        self,
        train_set: EncodedDataset,
        val_set: EncodedDataset,
        seed: Optional[int] = None,
    ) -> Tuple[ModelParams, List[EpochRecord]]:
        """
        Treina por hp.epochs épocas.

        Returns:
            (parâmetros finais, histórico com uma EpochRecord por época)

        Raises:
            DataError: "empty train set" / validação vazia
            NumericError: loss ou parâmetros não-finitos
        """
        hp = self.hp
        seed = hp.seed if seed is None else seed

        if len(train_set) == 0:
            raise DataError("empty train set: nada para treinar")
        if len(val_set) == 0:
            raise DataError("validação vazia: ajuste split_ratios ou validation_split")

        params = init_params(hp, seed)
        state = AdamState.fresh(params)
        rng = np.random.default_rng(seed)
        history: List[EpochRecord] = []
        n = len(train_set)

        logger.info("🏋️ Iniciando treino:")
        logger.info(f"   - Exemplos de treino: {n}")
        logger.info(f"   - Exemplos de validação: {len(val_set)}")
        logger.info(f"   - Épocas: {hp.epochs}, batch: {hp.batch_size}, lr: {hp.learning_rate}")
        logger.info(f"   - Parâmetros: {hp.param_count()}, threads: {self.threads}")

        pool = ThreadPoolExecutor(max_workers=self.threads) if self.threads > 1 else None
        try:
            for epoch in range(1, hp.epochs + 1):
                order = rng.permutation(n)
                batch_losses: List[float] = []
                correct = 0

                for start in range(0, n, hp.batch_size):
                    idx = order[start:start + hp.batch_size]
                    ids = train_set.ids[idx]
                    y = train_set.labels[idx]

                    p, grads = self._batch_gradients(ids, y, params, pool)
                    loss = mean_bce(p, y, hp.clip_epsilon)
                    if not np.isfinite(loss):
                        raise NumericError(
                            f"loss não-finita na época {epoch}, batch {start // hp.batch_size + 1}: {loss}"
                        )

                    batch_losses.append(loss)
                    correct += int(np.sum((p >= DECISION_THRESHOLD) == (y == 1)))
                    params, state = adam_step(params, grads, state, hp)

                if not params.all_finite():
                    raise NumericError(f"parâmetros não-finitos após a época {epoch}")

                p_val = predict_proba(val_set.ids, params, hp)
                record = EpochRecord(
                    epoch=epoch,
                    train_loss=float(np.mean(batch_losses)),
                    train_accuracy=correct / n,
                    val_loss=mean_bce(p_val, val_set.labels, hp.clip_epsilon),
                    val_accuracy=accuracy(p_val, val_set.labels),
                )
                history.append(record)

                logger.info(
                    f"📊 Época {epoch}/{hp.epochs}: "
                    f"loss={record.train_loss:.4f} acc={record.train_accuracy:.4f} "
                    f"val_loss={record.val_loss:.4f} val_acc={record.val_accuracy:.4f}"
                )
        finally:
            if pool is not None:
                pool.shutdown()

        logger.info("✅ Treino concluído")
        return params, history


def train(
    train_set: EncodedDataset,
    val_set: EncodedDataset,
    hp: Hyperparams,
    seed: Optional[int] = None,
    vocab: Optional[Vocabulary] = None,
    config: Optional[Dict[str, Any]] = None,
    threads: int = 1,
) -> Tuple[ModelBundle, List[EpochRecord]]:
    """Treina e empacota os pesos com vocabulário, hiperparâmetros e config."""
    params, history = Trainer(hp, threads=threads).fit(train_set, val_set, seed=seed)
    bundle = ModelBundle(params=params, hyperparams=hp, vocab=vocab, config=config)
    return bundle, history
