"""
🔢 Vectorizer

Vocabulário com teto de frequência, encoding para ids, padding e label
encoding.

Convenções de ids:
- 0 = PAD
- 1 = OOV
- 2 … size+1 = palavras, ordenadas por frequência (empate: primeira ocorrência)
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from app.errors import DataError
from app.text.text_pipeline import TokenSequence

logger = logging.getLogger(__name__)

PAD_ID = 0
OOV_ID = 1
RESERVED_IDS = 2
DEFAULT_MAX_WORDS = 10_000
DEFAULT_MAXLEN = 100

LABEL_IDS = {"fake": 0, "real": 1}


class Vocabulary:
    """
    Tabela palavra → id, imutável após o build.
    """

    def __init__(self, words: Sequence[str], max_words: int = DEFAULT_MAX_WORDS, total_distinct: Optional[int] = None):
        if len(words) > max_words:
            raise ValueError(f"{len(words)} palavras excedem max_words={max_words}")
        self.max_words = max_words
        self.words: List[str] = list(words)
        self.word_to_id: Dict[str, int] = {w: i + RESERVED_IDS for i, w in enumerate(self.words)}
        if len(self.word_to_id) != len(self.words):
            raise ValueError("vocabulário com palavras duplicadas")
        self.total_distinct = total_distinct if total_distinct is not None else len(self.words)

    @property
    def size(self) -> int:
        """Palavras de conteúdo (sem os ids reservados)."""
        return len(self.words)

    @property
    def rows(self) -> int:
        """Linhas da matriz de embedding (conteúdo + PAD + OOV)."""
        return self.size + RESERVED_IDS

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.max_words == other.max_words
            and self.words == other.words
        )

    # ─────────────────────────────────────────────
    # SERIALIZAÇÃO
    # ─────────────────────────────────────────────

    def to_dict(self) -> Dict:
        return {"max_words": self.max_words, "words": self.words}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Dict) -> "Vocabulary":
        try:
            return cls(words=data["words"], max_words=int(data["max_words"]))
        except (KeyError, TypeError) as e:
            raise DataError(f"vocabulário inválido: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        return cls.from_dict(json.loads(text))


def build_vocab(token_streams: Iterable[TokenSequence], max_words: int = DEFAULT_MAX_WORDS) -> Vocabulary:
    """
    Monta o vocabulário em uma passada.

    Mantém as max_words palavras mais frequentes; empates seguem a ordem de
    primeira ocorrência (Counter preserva inserção e most_common é estável).

    Raises:
        DataError: "no tokens" se o stream não tiver nenhum token.
    """
    if max_words < 1:
        raise ValueError(f"max_words deve ser ≥ 1 (recebido {max_words})")

    counter: Counter = Counter()
    for tokens in token_streams:
        counter.update(tokens)

    if not counter:
        raise DataError("no tokens: stream vazio, impossível montar vocabulário")

    words = [w for w, _ in counter.most_common(max_words)]

    logger.info("🔢 Vocabulário construído:")
    logger.info(f"   - Tokens distintos: {len(counter)}")
    logger.info(f"   - Mantidos: {len(words)} (max_words={max_words})")

    return Vocabulary(words=words, max_words=max_words, total_distinct=len(counter))


def encode(tokens: TokenSequence, vocab: Vocabulary) -> List[int]:
    """Token → id; fora do vocabulário → OOV_ID. Preserva o tamanho."""
    lookup = vocab.word_to_id
    return [lookup.get(t, OOV_ID) for t in tokens]


def pad(ids: Sequence[int], maxlen: int = DEFAULT_MAXLEN) -> List[int]:
    """
    Pre-padding / pre-truncation para maxlen.

    Curtas ganham PAD_ID à esquerda; longas mantêm os ÚLTIMOS maxlen ids
    (o GRU lê só o último estado, então o fim da sequência é conteúdo real).
    """
    if maxlen < 1:
        raise ValueError(f"maxlen deve ser ≥ 1 (recebido {maxlen})")
    ids = list(ids)[-maxlen:]
    return [PAD_ID] * (maxlen - len(ids)) + ids


def encode_label(label) -> int:
    """'fake' → 0, 'real' → 1 (trim + lowercase)."""
    key = str(getattr(label, "value", label)).strip().lower()
    if key not in LABEL_IDS:
        raise DataError(f"unknown label '{label}' (esperado: fake | real)")
    return LABEL_IDS[key]


# ═══════════════════════════════════════════════════════════
# DATASET CODIFICADO
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class EncodedExample:
    """Sequência de tamanho fixo + label binária"""

    ids: tuple
    label: int


@dataclass
class EncodedDataset:
    """
    Exemplos empilhados para o treino.

    ids: int64 (N, maxlen); labels: float (N,) com 0/1.
    """

    ids: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.ids.ndim != 2 or len(self.ids) != len(self.labels):
            raise ValueError(
                f"shapes incompatíveis: ids {self.ids.shape}, labels {self.labels.shape}"
            )

    def __len__(self) -> int:
        return len(self.labels)

    def example(self, i: int) -> EncodedExample:
        return EncodedExample(ids=tuple(int(x) for x in self.ids[i]), label=int(self.labels[i]))

    @classmethod
    def from_examples(cls, examples: Sequence[EncodedExample], maxlen: int = DEFAULT_MAXLEN) -> "EncodedDataset":
        if not examples:
            return cls(ids=np.zeros((0, maxlen), dtype=np.int64), labels=np.zeros(0))
        return cls(
            ids=np.array([e.ids for e in examples], dtype=np.int64),
            labels=np.array([e.label for e in examples], dtype=np.float64),
        )


def encode_example(tokens: TokenSequence, label, vocab: Vocabulary, maxlen: int = DEFAULT_MAXLEN) -> EncodedExample:
    return EncodedExample(ids=tuple(pad(encode(tokens, vocab), maxlen)), label=encode_label(label))
