"""
Text package: limpeza, lematização, tokenização e vetorização
"""

from .text_pipeline import (
    Lemmatizer,
    LemmatizerMode,
    TextSource,
    clean_text,
    get_lemmatizer,
    lemmatize,
    model_text,
    preprocess,
    tokenize,
)
from .vectorizer import (
    OOV_ID,
    PAD_ID,
    EncodedDataset,
    EncodedExample,
    Vocabulary,
    build_vocab,
    encode,
    encode_example,
    encode_label,
    pad,
)

__all__ = [
    'Lemmatizer', 'LemmatizerMode', 'TextSource', 'clean_text', 'get_lemmatizer',
    'lemmatize', 'model_text', 'preprocess', 'tokenize',
    'OOV_ID', 'PAD_ID', 'EncodedDataset', 'EncodedExample', 'Vocabulary',
    'build_vocab', 'encode', 'encode_example', 'encode_label', 'pad',
]
