"""
Data package: ingestão, splits e corpus sintético
"""

from .dataset_io import (
    ClassCounts,
    Corpus,
    Document,
    Label,
    LoadReport,
    SplitSet,
    class_counts,
    holdout_ratios,
    load_corpus,
    oversample,
    stratified_split,
)
from .synthetic import keyword_pools, make_synthetic_corpus

__all__ = [
    'ClassCounts', 'Corpus', 'Document', 'Label', 'LoadReport', 'SplitSet',
    'class_counts', 'holdout_ratios', 'load_corpus', 'oversample', 'stratified_split',
    'keyword_pools', 'make_synthetic_corpus',
]
