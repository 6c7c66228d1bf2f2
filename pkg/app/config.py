"""
🔧 RunConfig

Configuração de uma execução: arquivo JSON opcional + flags da CLI
(flags explícitas sobrescrevem o arquivo; o resto fica no default).
Nenhuma variável de ambiente é lida.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.data.dataset_io import DEFAULT_RATIOS, Label, holdout_ratios
from app.errors import UsageError
from app.neural.gru_model import Hyperparams
from app.text.text_pipeline import LemmatizerMode, TextSource
from app.text.vectorizer import DEFAULT_MAX_WORDS, DEFAULT_MAXLEN

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    """Tudo que define um run (validado antes de qualquer trabalho)"""

    model_config = ConfigDict(extra="forbid")

    # Dados
    data_path: Optional[str] = Field(None, description="CSV headLine/content/label")
    synthetic_size: Optional[int] = Field(None, ge=20, description="Usa corpus sintético de N docs")
    output_dir: str = Field("runs/default", description="Onde os artefatos são escritos")
    seed: int = Field(42, ge=0, lt=2**64)
    split_ratios: Tuple[float, float, float] = Field(DEFAULT_RATIOS, description="train/val/test")
    validation_split: Optional[float] = Field(
        None, gt=0, lt=1, description="Validação como fração do treino (substitui o ratio de val)"
    )
    oversample: bool = True

    # Texto
    text_source: TextSource = TextSource.BOTH
    lemmatizer: LemmatizerMode = LemmatizerMode.IDENTITY
    max_words: int = Field(DEFAULT_MAX_WORDS, ge=1)

    # Modelo / otimizador
    seq_len: int = Field(DEFAULT_MAXLEN, ge=1)
    embed_dim: int = Field(100, ge=1)
    gru_units: int = Field(32, ge=1)
    learning_rate: float = Field(1e-4, ge=0, lt=1)
    beta1: float = Field(0.9, gt=0, lt=1)
    beta2: float = Field(0.999, gt=0, lt=1)
    adam_epsilon: float = Field(1e-8, gt=0, lt=1)
    clip_epsilon: float = Field(1e-7, gt=0, lt=0.5)
    batch_size: int = Field(32, ge=1)
    epochs: int = Field(10, ge=1)

    # Execução
    threads: int = Field(1, ge=1)
    positive_class: Label = Label.FAKE
    plots: bool = False

    @field_validator("split_ratios")
    @classmethod
    def _check_ratios(cls, v):
        if any(r <= 0 for r in v):
            raise ValueError(f"ratios devem ser positivas: {v}")
        if abs(sum(v) - 1.0) > 1e-9:
            raise ValueError(f"ratios devem somar 1 (soma={sum(v)!r})")
        return v

    @field_validator("synthetic_size")
    @classmethod
    def _check_synthetic(cls, v):
        if v is not None and v % 2:
            raise ValueError(f"synthetic_size precisa ser par (recebido {v})")
        return v

    def effective_ratios(self) -> Tuple[float, float, float]:
        if self.validation_split is None:
            return tuple(self.split_ratios)
        return holdout_ratios(self.split_ratios, self.validation_split)

    def to_hyperparams(self, vocab_rows: int) -> Hyperparams:
        return Hyperparams(
            vocab_rows=vocab_rows,
            embed_dim=self.embed_dim,
            gru_units=self.gru_units,
            seq_len=self.seq_len,
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            adam_epsilon=self.adam_epsilon,
            clip_epsilon=self.clip_epsilon,
            batch_size=self.batch_size,
            epochs=self.epochs,
            seed=self.seed,
        )

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def load_config_file(path) -> Dict[str, Any]:
    """Lê o JSON de config. Erros viram UsageError (exit 1)."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"arquivo de config não encontrado: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise UsageError(f"config JSON inválido em {path}: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"config em {path} precisa ser um objeto JSON")
    return data


def build_config(config_path=None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Monta o RunConfig: defaults ← arquivo ← overrides (só valores não-None).

    Raises:
        UsageError: chave desconhecida ou valor inválido
    """
    values: Dict[str, Any] = load_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        config = RunConfig.model_validate(values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise UsageError(f"config inválida: {problems}") from e

    logger.debug(f"🔧 RunConfig: {config.snapshot()}")
    return config
