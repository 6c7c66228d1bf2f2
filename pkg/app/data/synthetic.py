"""
🧪 Corpus sintético

Gera um corpus pseudo-Bangla linearmente separável por palavras-chave.
Usado nos testes de aceitação e na CLI (--synthetic N) porque o dataset
original não é distribuído.
"""

import logging
from itertools import product
from typing import Dict, List

import numpy as np

from app.data.dataset_io import Corpus, Document, Label
from app.errors import DataError

logger = logging.getLogger(__name__)

POOL_SIZE = 20
FILLER_SIZE = 40
KEYWORD_RATE = 0.5
CONTENT_LENGTH = (5, 40)
HEADLINE_LENGTH = (2, 6)

_CONSONANTS = "কখগঘচছজঝটঠডঢতথদধনপফবভমরলশসহ"
_VOWEL_SIGNS = "ািীুূেো"


def _word_table() -> List[str]:
    """80 palavras distintas, só com caracteres do bloco Bangla."""
    combos = list(product(_CONSONANTS[:12], _VOWEL_SIGNS, _CONSONANTS[12:24]))
    words = ["".join(c) for c in combos[::7]]
    return words[: 2 * POOL_SIZE + FILLER_SIZE]


def keyword_pools() -> Dict[str, List[str]]:
    """Pools disjuntos: fake, real e filler (compartilhado)."""
    words = _word_table()
    return {
        Label.FAKE.value: words[:POOL_SIZE],
        Label.REAL.value: words[POOL_SIZE:2 * POOL_SIZE],
        "filler": words[2 * POOL_SIZE:],
    }


def _sample_text(rng: np.random.Generator, pool: List[str], filler: List[str], bounds) -> str:
    length = int(rng.integers(bounds[0], bounds[1] + 1))
    is_keyword = rng.random(length) < KEYWORD_RATE
    if not is_keyword.any():
        is_keyword[-1] = True
    tokens = [
        pool[rng.integers(len(pool))] if kw else filler[rng.integers(len(filler))]
        for kw in is_keyword
    ]
    return " ".join(tokens)


def make_synthetic_corpus(n: int, seed: int = 42) -> Corpus:
    """
    Corpus com n/2 fake e n/2 real, alternados (fake, real, fake, ...).

    Cada documento mistura palavras do pool da sua classe com filler;
    content tem 5–40 tokens, headline 2–6. Determinístico por seed.
    """
    if n < 20 or n % 2:
        raise DataError(f"synthetic corpus precisa de n par e ≥ 20 (recebido {n})")

    pools = keyword_pools()
    rng = np.random.default_rng(seed)
    documents = []

    for i in range(n):
        label = Label.FAKE if i % 2 == 0 else Label.REAL
        pool = pools[label.value]
        documents.append(Document(
            headline=_sample_text(rng, pool, pools["filler"], HEADLINE_LENGTH),
            content=_sample_text(rng, pool, pools["filler"], CONTENT_LENGTH),
            label=label,
        ))

    logger.info(f"🧪 Corpus sintético gerado: {n} documentos (seed={seed})")
    return Corpus(documents=documents, source_path=f"synthetic://n={n},seed={seed}")
