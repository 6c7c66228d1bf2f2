"""
🧹 Text Pipeline

Limpeza, lematização (plugável) e tokenização de texto Bangla.

Ordem: clean_text → tokenize → lemmatize.
"""

import logging
import re
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

CleanText = str
TokenSequence = List[str]

# Tudo fora do bloco Bangla (U+0980–U+09FF) e de [A-Za-z0-9] vira espaço
_UNWANTED = re.compile(r"[^\u0980-\u09FFA-Za-z0-9]+")

SUFFIXES_PATH = Path(__file__).parent.parent / "resources" / "bangla_suffixes.txt"


class LemmatizerMode(str, Enum):
    IDENTITY = "identity"
    SUFFIX_STRIP = "suffix_strip"


class TextSource(str, Enum):
    """Qual coluna alimenta o modelo"""

    HEADLINE = "headline"
    CONTENT = "content"
    BOTH = "both"


def clean_text(raw: str) -> CleanText:
    """
    Remove caracteres indesejados.

    Fora do whitelist (Bangla + ASCII alfanumérico) → espaço; ASCII em
    minúsculas; espaços colapsados; trim. Idempotente.
    """
    return _UNWANTED.sub(" ", raw).lower().strip()


def tokenize(clean: CleanText) -> TokenSequence:
    """Split em espaço simples. Texto vazio → []."""
    if not clean:
        return []
    return clean.split(" ")


# ═══════════════════════════════════════════════════════════
# LEMMATIZER
# ═══════════════════════════════════════════════════════════

def load_suffixes(path: Path = SUFFIXES_PATH) -> List[str]:
    """Lê a lista de sufixos (um por linha, '#' = comentário)."""
    if not path.exists():
        logger.warning(f"⚠️ Lista de sufixos não encontrada: {path}")
        return []
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.strip() for line in f]
    return [s for s in lines if s and not s.startswith("#")]


class Lemmatizer:
    """
    Lematizador plugável.

    - identity: devolve os tokens sem alteração
    - suffix_strip: remove UM sufixo da lista (o mais longo que casar),
      nunca deixando token vazio
    """

    def __init__(self, mode: str = LemmatizerMode.IDENTITY, suffixes: Optional[Sequence[str]] = None):
        try:
            self.mode = LemmatizerMode(mode)
        except ValueError:
            raise ValueError(
                f"unknown lemmatizer mode '{mode}' "
                f"(use: {', '.join(m.value for m in LemmatizerMode)})"
            )
        if suffixes is None:
            suffixes = load_suffixes() if self.mode is LemmatizerMode.SUFFIX_STRIP else []
        # mais longo primeiro; empate na ordem do arquivo
        self.suffixes = sorted(dict.fromkeys(suffixes), key=len, reverse=True)

    def strip_token(self, token: str) -> str:
        for suffix in self.suffixes:
            if token.endswith(suffix) and len(token) > len(suffix):
                return token[: -len(suffix)]
        return token

    def lemmatize(self, tokens: TokenSequence) -> TokenSequence:
        if self.mode is LemmatizerMode.IDENTITY:
            return list(tokens)
        return [self.strip_token(t) for t in tokens]


_lemmatizers = {}


def get_lemmatizer(mode: str = LemmatizerMode.IDENTITY) -> Lemmatizer:
    """Retorna instância singleton por modo"""
    key = str(getattr(mode, "value", mode))
    if key not in _lemmatizers:
        _lemmatizers[key] = Lemmatizer(key)
    return _lemmatizers[key]


def lemmatize(tokens: TokenSequence, mode: str = LemmatizerMode.IDENTITY) -> TokenSequence:
    """Atalho funcional para Lemmatizer(mode).lemmatize(tokens)."""
    return get_lemmatizer(mode).lemmatize(tokens)


# ═══════════════════════════════════════════════════════════
# PIPELINE
# ═══════════════════════════════════════════════════════════

def model_text(headline: str, content: str, source: str = TextSource.BOTH) -> str:
    """Texto que entra no modelo: headline, content ou headline + ' ' + content."""
    source = TextSource(source)
    if source is TextSource.HEADLINE:
        return headline
    if source is TextSource.CONTENT:
        return content
    return f"{headline} {content}"


def preprocess(
    headline: str,
    content: str,
    source: str = TextSource.BOTH,
    lemmatizer_mode: str = LemmatizerMode.IDENTITY,
) -> TokenSequence:
    """clean → tokenize → lemmatize sobre o texto escolhido."""
    tokens = tokenize(clean_text(model_text(headline, content, source)))
    return lemmatize(tokens, lemmatizer_mode)
