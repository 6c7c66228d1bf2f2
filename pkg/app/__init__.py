"""
📰 Bangla Fake News GRU

Pipeline completo de detecção de fake news em Bangla:
CSV → limpeza → vocabulário → GRU (numpy puro) → métricas.
"""

__version__ = "1.0.0"
