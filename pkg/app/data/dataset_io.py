"""
📂 Dataset IO

Ingestão do corpus (CSV headLine/content/label), contagem de classes,
split estratificado determinístico e oversampling do split de treino.

Todas as funções são puras: mesma entrada + mesma seed → mesma saída.
"""

import csv
import logging
import math
import re
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from sklearn.utils import resample

from app.errors import DataError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("headline", "content", "label")
DEFAULT_RATIOS = (0.8, 0.1, 0.1)


# ═══════════════════════════════════════════════════════════
# MODELS
# ═══════════════════════════════════════════════════════════

class Label(str, Enum):
    """Classe de uma notícia (fake → 0, real → 1)."""

    FAKE = "fake"
    REAL = "real"


class Document(BaseModel):
    """Uma notícia do corpus"""

    model_config = ConfigDict(frozen=True)

    headline: str = Field(..., description="Manchete (headLine)")
    content: str = Field(..., description="Texto da notícia")
    label: Label = Field(..., description="fake | real")


class LoadReport(BaseModel):
    """Contagem de linhas descartadas no load"""

    total_rows: int = 0
    missing_field: int = 0
    blank_field: int = 0
    bad_label: int = 0
    kept: int = 0

    @property
    def dropped(self) -> int:
        return self.missing_field + self.blank_field + self.bad_label


class Corpus(BaseModel):
    """Lista ordenada de documentos (ordem do arquivo)"""

    documents: List[Document] = Field(default_factory=list)
    source_path: str = ""
    load_report: Optional[LoadReport] = None

    def __len__(self) -> int:
        return len(self.documents)

    def labels(self) -> List[Label]:
        return [d.label for d in self.documents]


class ClassCounts(BaseModel):
    """Distribuição de classes"""

    fake: int = Field(0, ge=0)
    real: int = Field(0, ge=0)

    @property
    def total(self) -> int:
        return self.fake + self.real


class SplitSet(BaseModel):
    """Partição train/validation/test (antes do oversampling)"""

    train: Corpus
    validation: Corpus
    test: Corpus
    seed: int
    ratios: Tuple[float, float, float]
    train_indices: List[int] = Field(default_factory=list)
    validation_indices: List[int] = Field(default_factory=list)
    test_indices: List[int] = Field(default_factory=list)


# ═══════════════════════════════════════════════════════════
# LOAD
# ═══════════════════════════════════════════════════════════

def _error_line(message: str) -> str:
    """Linha do arquivo (1-based) citada num ParserError do pandas."""
    match = re.search(r"\b(line|row) (\d+)", message)
    if not match:
        return "?"
    # "line N" já é a linha do arquivo; "row N" conta a partir de 0 (header = 0)
    number = int(match.group(2))
    return str(number + 1 if match.group(1) == "row" else number)


def _field_counts(path: Path) -> List[int]:
    """Número de campos de cada registro de dados (sem header e linhas vazias)."""
    try:
        with open(path, "r", encoding="utf-8-sig", newline="") as f:
            # linhas em branco (ou só espaços) são puladas, como no pandas
            records = [len(r) for r in csv.reader(f) if r and (len(r) > 1 or r[0].strip())]
    except csv.Error as e:
        logger.warning(f"⚠️ csv.reader falhou ({e}), contagem de campos indisponível")
        return []
    return records[1:]


def load_corpus(path) -> Corpus:
    """
    Carrega o CSV do corpus.

    Colunas headLine, content, label (match case-insensitive, qualquer ordem).
    Linhas com campo ausente/em branco ou label inválida são descartadas e
    contadas no LoadReport anexado ao Corpus.

    Raises:
        DataError: arquivo inexistente, CSV malformado (com linha), colunas
            faltando ou nenhuma linha sobrevivente ("empty corpus").
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")

    logger.info(f"📂 Carregando corpus: {path}")

    try:
        df = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8-sig",
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise DataError(f"empty corpus: {path} não tem linhas")
    except pd.errors.ParserError as e:
        raise DataError(f"malformed CSV {path} (line {_error_line(str(e))}): {e}") from e
    except UnicodeDecodeError as e:
        raise DataError(f"CSV não é UTF-8 válido: {path} ({e})") from e

    columns = {str(c).strip().lower(): c for c in df.columns}
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise DataError(
            f"CSV sem colunas obrigatórias {missing} (encontradas: {list(df.columns)})"
        )

    report = LoadReport(total_rows=len(df))
    documents: List[Document] = []

    # o pandas completa linhas curtas com "" ou NaN conforme a versão
    counts = _field_counts(path)
    if len(counts) != len(df):
        logger.warning(
            f"⚠️ Contagem de campos ignorada: {len(counts)} registros no csv, {len(df)} no pandas"
        )
        counts = [len(df.columns)] * len(df)

    for n_fields, headline, content, raw_label in zip(
        counts, df[columns["headline"]], df[columns["content"]], df[columns["label"]]
    ):
        values = (headline, content, raw_label)
        if n_fields < len(df.columns) or any(not isinstance(v, str) for v in values):
            report.missing_field += 1
            continue
        if any(not v.strip() for v in values):
            report.blank_field += 1
            continue
        try:
            label = Label(raw_label.strip().lower())
        except ValueError:
            report.bad_label += 1
            continue
        documents.append(Document(headline=headline, content=content, label=label))

    report.kept = len(documents)

    logger.info("✅ Corpus carregado:")
    logger.info(f"   - Linhas no arquivo: {report.total_rows}")
    logger.info(f"   - Mantidas: {report.kept}")
    logger.info(
        f"   - Descartadas: {report.dropped} "
        f"(ausentes={report.missing_field}, vazias={report.blank_field}, "
        f"label inválida={report.bad_label})"
    )

    if not documents:
        raise DataError(f"empty corpus: nenhuma linha válida em {path}")

    return Corpus(documents=documents, source_path=str(path), load_report=report)


# ═══════════════════════════════════════════════════════════
# STATS / SPLIT / OVERSAMPLING
# ═══════════════════════════════════════════════════════════

def class_counts(corpus: Corpus) -> ClassCounts:
    """Conta documentos por classe."""
    fake = sum(1 for d in corpus.documents if d.label is Label.FAKE)
    return ClassCounts(fake=fake, real=len(corpus.documents) - fake)


def _part_sizes(n: int, ratios: Sequence[float]) -> Tuple[int, int, int]:
    # resíduo do arredondamento vai para o treino
    n_val = int(math.floor(n * ratios[1] + 1e-9))
    n_test = int(math.floor(n * ratios[2] + 1e-9))
    return n - n_val - n_test, n_val, n_test


def _validate_ratios(ratios: Sequence[float]) -> Tuple[float, float, float]:
    if len(ratios) != 3:
        raise ValueError(f"ratios precisa de 3 frações, recebido {ratios}")
    if any(r <= 0 for r in ratios):
        raise ValueError(f"ratios devem ser positivas: {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios devem somar 1 (soma={sum(ratios)!r})")
    return (float(ratios[0]), float(ratios[1]), float(ratios[2]))


def stratified_split(
    corpus: Corpus,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 42,
) -> SplitSet:
    """
    Split estratificado train/validation/test.

    Cada classe é embaralhada com default_rng(seed) (fake primeiro, depois
    real, sempre com o mesmo gerador) e cortada nas proporções; cada parte
    mantém a ordem original do arquivo.

    Raises:
        DataError: "class too small to stratify" se alguma classe tiver menos
            documentos que partes ou se alguma parte
            da classe ficar vazia com essas proporções.
    """
    ratios = _validate_ratios(ratios)
    rng = np.random.default_rng(seed)
    parts: Tuple[List[int], List[int], List[int]] = ([], [], [])

    for label in (Label.FAKE, Label.REAL):
        indices = np.array(
            [i for i, d in enumerate(corpus.documents) if d.label is label],
            dtype=np.int64,
        )
        if len(indices) < len(parts):
            raise DataError(
                f"class too small to stratify: '{label.value}' tem {len(indices)} "
                f"documento(s), mínimo {len(parts)}"
            )
        shuffled = indices[rng.permutation(len(indices))]
        n_train, n_val, n_test = _part_sizes(len(indices), ratios)
        if min(n_train, n_val, n_test) == 0:
            raise DataError(
                f"class too small to stratify: '{label.value}' tem {len(indices)} "
                f"documento(s) e ficaria com train={n_train} val={n_val} test={n_test}"
            )
        parts[0].extend(shuffled[:n_train].tolist())
        parts[1].extend(shuffled[n_train:n_train + n_val].tolist())
        parts[2].extend(shuffled[n_train + n_val:].tolist())

    train_idx, val_idx, test_idx = (sorted(p) for p in parts)

    def subset(idx: List[int]) -> Corpus:
        return Corpus(
            documents=[corpus.documents[i] for i in idx],
            source_path=corpus.source_path,
        )

    logger.info(
        f"✂️ Split estratificado (seed={seed}): "
        f"train={len(train_idx)} val={len(val_idx)} test={len(test_idx)}"
    )

    return SplitSet(
        train=subset(train_idx),
        validation=subset(val_idx),
        test=subset(test_idx),
        seed=seed,
        ratios=ratios,
        train_indices=train_idx,
        validation_indices=val_idx,
        test_indices=test_idx,
    )


def holdout_ratios(ratios: Sequence[float], validation_split: float) -> Tuple[float, float, float]:
    """
    Converte para o modo "validação = fração do treino".

    A parte de validação sai da fatia não-teste: (train+val)·(1−vs),
    (train+val)·vs, test.
    """
    ratios = _validate_ratios(ratios)
    if not 0 < validation_split < 1:
        raise ValueError(f"validation_split deve estar em (0,1): {validation_split}")
    fit_share = ratios[0] + ratios[1]
    return (
        fit_share * (1 - validation_split),
        fit_share * validation_split,
        1.0 - fit_share,
    )


def oversample(train: Corpus, seed: int = 42) -> Corpus:
    """
    Random oversampling da classe minoritária até empate exato.

    Originais primeiro, depois as duplicatas (sorteadas com reposição entre
    os originais minoritários). Corpus já balanceado volta inalterado.

    Raises:
        DataError: "nothing to balance" se o corpus tiver uma só classe.
    """
    counts = class_counts(train)
    if counts.fake == 0 or counts.real == 0:
        raise DataError(
            f"nothing to balance: treino tem fake={counts.fake}, real={counts.real}"
        )

    if counts.fake == counts.real:
        logger.info("⚖️ Treino já balanceado, oversampling ignorado")
        return Corpus(documents=list(train.documents), source_path=train.source_path)

    minority = Label.FAKE if counts.fake < counts.real else Label.REAL
    pool = [d for d in train.documents if d.label is minority]
    deficit = abs(counts.real - counts.fake)

    duplicates = list(resample(pool, replace=True, n_samples=deficit, random_state=seed))

    logger.info(
        f"⚖️ Oversampling: +{deficit} '{minority.value}' "
        f"(de {len(pool)} originais) → {len(train) + deficit} documentos"
    )

    return Corpus(
        documents=list(train.documents) + duplicates,
        source_path=train.source_path,
    )
