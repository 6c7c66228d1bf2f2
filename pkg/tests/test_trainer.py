"""
Testes do loop de treino
"""

import numpy as np
import pytest

from app.errors import DataError, NumericError
from app.neural.gru_model import Hyperparams, forward_batch, init_params, mean_bce
from app.text.vectorizer import EncodedDataset
from app.training.trainer import EpochRecord, Trainer, accuracy, train


def random_dataset(hp: Hyperparams, n: int, seed: int = 0) -> EncodedDataset:
    rng = np.random.default_rng(seed)
    return EncodedDataset(
        ids=rng.integers(0, hp.vocab_rows, (n, hp.seq_len)),
        labels=rng.integers(0, 2, n).astype(np.float64),
    )


@pytest.fixture
def data(tiny_hp):
    return random_dataset(tiny_hp, 22, seed=1), random_dataset(tiny_hp, 7, seed=2)


def test_history_has_one_record_per_epoch(tiny_hp, data):
    _, history = Trainer(tiny_hp).fit(*data)
    assert [r.epoch for r in history] == [1, 2]
    for r in history:
        assert isinstance(r, EpochRecord)
        assert 0 <= r.train_accuracy <= 1 and 0 <= r.val_accuracy <= 1
        assert r.train_loss > 0 and r.val_loss > 0


def test_zero_learning_rate_keeps_initial_params(tiny_hp, data):
    hp = tiny_hp.model_copy(update={"learning_rate": 0.0})
    params, _ = Trainer(hp).fit(*data, seed=11)
    assert params.equals(init_params(hp, 11))


def test_train_loss_is_mean_of_batch_losses(tiny_hp, data):
    """Com lr=0 os parâmetros não mudam: a loss da época 1 é recomputável"""
    hp = tiny_hp.model_copy(update={"learning_rate": 0.0, "epochs": 1})
    train_set, val_set = data
    _, history = Trainer(hp).fit(train_set, val_set, seed=4)

    params = init_params(hp, 4)
    order = np.random.default_rng(4).permutation(len(train_set))
    losses = []
    for start in range(0, len(train_set), hp.batch_size):
        idx = order[start:start + hp.batch_size]
        p, _ = forward_batch(train_set.ids[idx], params, hp)
        losses.append(mean_bce(p, train_set.labels[idx]))

    # 22 exemplos em batches de 4 → último batch parcial de 2
    assert len(losses) == 6
    assert history[0].train_loss == pytest.approx(np.mean(losses), abs=1e-12)

    p_val, _ = forward_batch(val_set.ids, params, hp)
    assert history[0].val_loss == pytest.approx(mean_bce(p_val, val_set.labels), abs=1e-12)
    assert history[0].val_accuracy == accuracy(p_val, val_set.labels)


def test_same_seed_gives_identical_history(tiny_hp, data):
    params_a, history_a = Trainer(tiny_hp).fit(*data, seed=5)
    params_b, history_b = Trainer(tiny_hp).fit(*data, seed=5)
    assert history_a == history_b
    assert params_a.equals(params_b)


def test_threaded_batches_are_reproducible_and_close(tiny_hp, data):
    hp = tiny_hp.model_copy(update={"epochs": 1})
    _, single = Trainer(hp, threads=1).fit(*data, seed=6)
    _, threaded_a = Trainer(hp, threads=3).fit(*data, seed=6)
    _, threaded_b = Trainer(hp, threads=3).fit(*data, seed=6)

    assert threaded_a == threaded_b
    assert threaded_a[0].train_loss == pytest.approx(single[0].train_loss, rel=1e-4)


def test_memorizes_small_dataset():
    """32 exemplos distintos, label decidida pelo último token"""
    hp = Hyperparams(
        vocab_rows=12, embed_dim=8, gru_units=8, seq_len=5,
        learning_rate=0.02, batch_size=8, epochs=200, seed=0,
    )
    rng = np.random.default_rng(0)
    seqs = set()
    while len(seqs) < 32:
        prefix = tuple(int(i) for i in rng.integers(4, 12, hp.seq_len - 1))
        seqs.add(prefix + (2 + len(seqs) % 2,))
    ids = np.array(sorted(seqs))
    labels = (ids[:, -1] == 3).astype(np.float64)
    dataset = EncodedDataset(ids=ids, labels=labels)

    _, history = Trainer(hp).fit(dataset, dataset)
    assert history[-1].train_loss < 0.1
    assert history[-1].train_loss < history[0].train_loss


def test_empty_train_set(tiny_hp, data):
    empty = EncodedDataset(ids=np.zeros((0, tiny_hp.seq_len)), labels=np.zeros(0))
    with pytest.raises(DataError, match="empty train set"):
        Trainer(tiny_hp).fit(empty, data[1])


def test_empty_validation_set(tiny_hp, data):
    empty = EncodedDataset(ids=np.zeros((0, tiny_hp.seq_len)), labels=np.zeros(0))
    with pytest.raises(DataError):
        Trainer(tiny_hp).fit(data[0], empty)


def test_non_finite_loss_aborts(tiny_hp, data, monkeypatch):
    monkeypatch.setattr("app.training.trainer.mean_bce", lambda *a, **k: float("nan"))
    with pytest.raises(NumericError, match="não-finita"):
        Trainer(tiny_hp).fit(*data)


def test_train_returns_bundle(tiny_hp, data):
    bundle, history = train(*data, tiny_hp, seed=2, config={"seed": 2})
    assert bundle.hyperparams == tiny_hp
    assert bundle.config == {"seed": 2}
    assert len(history) == tiny_hp.epochs
    bundle.params.check_shapes(tiny_hp)


def test_accuracy_threshold():
    assert accuracy(np.array([0.5, 0.49, 0.9]), np.array([1, 0, 0])) == pytest.approx(2 / 3)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
