"""
Fixtures compartilhadas
"""

import pytest

from app.data.dataset_io import Corpus, Document, Label
from app.neural.gru_model import Hyperparams


def _make_corpus(labels, prefix="doc"):
    return Corpus(documents=[
        Document(headline=f"{prefix} h{i}", content=f"{prefix} c{i}", label=Label(label))
        for i, label in enumerate(labels)
    ])


@pytest.fixture
def corpus_of():
    """Fábrica: lista de labels → Corpus com um documento distinto por label"""
    return _make_corpus


@pytest.fixture
def write_csv(tmp_path):
    """Escreve um CSV UTF-8 em tmp_path e devolve o caminho"""

    def _write(text: str, name: str = "corpus.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def tiny_hp():
    """Modelo pequeno (float32) para testes rápidos"""
    return Hyperparams(vocab_rows=30, embed_dim=6, gru_units=5, seq_len=8, batch_size=4, epochs=2, seed=3)
