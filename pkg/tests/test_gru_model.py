"""
Testes do modelo GRU numpy: init, forward, BCE e backward
"""

import math

import numpy as np
import pytest

from app.errors import DataError
from app.neural.gru_model import (
    GradSet,
    Hyperparams,
    ModelParams,
    backward,
    bce_loss,
    forward,
    forward_batch,
    init_params,
    mean_bce,
    predict_proba,
    sigmoid,
)


def zero_params(hp: Hyperparams) -> ModelParams:
    return ModelParams(**{n: np.zeros(s, dtype=hp.dtype) for n, s in hp.shapes().items()})


def _sig(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


# ═══════════════════════════════════════════════════════════
# INIT
# ═══════════════════════════════════════════════════════════

def test_init_same_seed_is_bit_identical(tiny_hp):
    assert init_params(tiny_hp, 5).equals(init_params(tiny_hp, 5))
    assert not init_params(tiny_hp, 5).equals(init_params(tiny_hp, 6))


def test_init_biases_are_zero(tiny_hp):
    params = init_params(tiny_hp, 1)
    assert not params.b.any()
    assert params.b_out == 0


def test_init_shapes_and_dtype(tiny_hp):
    params = init_params(tiny_hp, 1)
    params.check_shapes(tiny_hp)
    assert all(arr.dtype == np.float32 for _, arr in params.items())
    assert params.all_finite()


def test_init_embedding_range_default_model():
    """Modelo default: ~10⁶ entradas de E dentro de ±0.05"""
    hp = Hyperparams()
    E = init_params(hp).E
    assert E.size == 10_002 * 100
    assert np.all(np.abs(E) <= np.float32(0.05))
    # não degenerado
    assert E.std() > 0.02


def test_init_glorot_limits(tiny_hp):
    params = init_params(tiny_hp, 2)
    D, H = tiny_hp.embed_dim, tiny_hp.gru_units
    assert np.abs(params.W).max() <= math.sqrt(6 / (D + H)) + 1e-6
    assert np.abs(params.U).max() <= math.sqrt(6 / (2 * H)) + 1e-6
    assert np.abs(params.w_out).max() <= math.sqrt(6 / (H + 1)) + 1e-6


def test_hyperparams_defaults():
    hp = Hyperparams()
    assert (hp.embed_dim, hp.gru_units, hp.seq_len) == (100, 32, 100)
    assert (hp.learning_rate, hp.batch_size, hp.epochs) == (1e-4, 32, 10)
    assert (hp.beta1, hp.beta2, hp.adam_epsilon, hp.clip_epsilon) == (0.9, 0.999, 1e-8, 1e-7)


@pytest.mark.parametrize("field, value", [("gru_units", 0), ("beta1", 1.0), ("learning_rate", 1.5)])
def test_hyperparams_reject_invalid(field, value):
    with pytest.raises(ValueError):
        Hyperparams(**{field: value})


# ═══════════════════════════════════════════════════════════
# FORWARD
# ═══════════════════════════════════════════════════════════

def test_sigmoid_is_stable_and_exact_at_zero():
    x = np.array([-1000.0, 0.0, 1000.0], dtype=np.float32)
    with np.errstate(over="raise"):
        out = sigmoid(x)
    assert out[1] == 0.5
    assert out[0] == 0.0 and out[2] == 1.0


def test_zero_weights_give_half(tiny_hp):
    ids = np.arange(tiny_hp.seq_len) % tiny_hp.vocab_rows
    p, cache = forward(ids, zero_params(tiny_hp), tiny_hp)

    assert p == 0.5
    assert np.all(cache.zs == 0.5) and np.all(cache.rs == 0.5)
    assert not cache.candidates.any()
    assert not cache.hs[-1].any()


def test_saturated_update_gate_keeps_initial_state(tiny_hp):
    params = init_params(tiny_hp, 4)
    params.b[:tiny_hp.gru_units] = -1000.0
    ids = np.random.default_rng(0).integers(0, tiny_hp.vocab_rows, (3, tiny_hp.seq_len))

    _, cache = forward_batch(ids, params, tiny_hp)
    assert not cache.hs[-1].any()


def test_scalar_recurrence_oracle():
    """GRU 1-unit / 1-dim, pesos escolhidos à mão, 3 timesteps"""
    hp = Hyperparams(vocab_rows=3, embed_dim=1, gru_units=1, seq_len=3, precision="float64")
    params = ModelParams(
        E=np.array([[0.0], [0.5], [-1.2]]),
        W=np.array([[0.3, -0.4, 0.8]]),
        U=np.array([[0.6, 0.2, -0.5]]),
        b=np.array([0.1, -0.2, 0.05]),
        w_out=np.array([1.5]),
        b_out=np.array(-0.3),
    )
    ids = [1, 2, 1]

    h = 0.0
    for i in ids:
        x = params.E[i, 0]
        z = _sig(0.3 * x + 0.6 * h + 0.1)
        r = _sig(-0.4 * x + 0.2 * h - 0.2)
        hc = math.tanh(0.8 * x - 0.5 * (r * h) + 0.05)
        h = (1 - z) * h + z * hc
    expected = _sig(1.5 * h - 0.3)

    p, cache = forward(ids, params, hp)
    assert p == pytest.approx(expected, abs=1e-12)
    assert cache.hs[-1, 0, 0] == pytest.approx(h, abs=1e-12)


def test_forward_is_pure(tiny_hp):
    params = init_params(tiny_hp, 8)
    ids = np.random.default_rng(1).integers(0, tiny_hp.vocab_rows, (5, tiny_hp.seq_len))
    a, _ = forward_batch(ids, params, tiny_hp)
    b, _ = forward_batch(ids, params, tiny_hp)
    np.testing.assert_array_equal(a, b)


def test_gates_and_state_are_bounded(tiny_hp):
    params = init_params(tiny_hp, 9)
    params.E *= 40  # entradas grandes
    ids = np.random.default_rng(2).integers(0, tiny_hp.vocab_rows, (16, tiny_hp.seq_len))
    p, cache = forward_batch(ids, params, tiny_hp)

    assert np.all((cache.zs >= 0) & (cache.zs <= 1))
    assert np.all((cache.rs >= 0) & (cache.rs <= 1))
    assert np.all(np.abs(cache.candidates) <= 1)
    assert np.all(np.abs(cache.hs) <= 1)
    assert np.all((p >= tiny_hp.clip_epsilon) & (p <= 1 - tiny_hp.clip_epsilon))


def test_forward_rejects_out_of_range_id(tiny_hp):
    ids = np.zeros(tiny_hp.seq_len, dtype=np.int64)
    ids[-1] = tiny_hp.vocab_rows
    with pytest.raises(DataError, match="fora do intervalo"):
        forward(ids, init_params(tiny_hp, 1), tiny_hp)


def test_forward_rejects_wrong_length(tiny_hp):
    with pytest.raises(DataError):
        forward(np.zeros(tiny_hp.seq_len + 1, dtype=np.int64), init_params(tiny_hp, 1), tiny_hp)


def test_predict_proba_matches_forward_batch(tiny_hp):
    params = init_params(tiny_hp, 3)
    ids = np.random.default_rng(3).integers(0, tiny_hp.vocab_rows, (11, tiny_hp.seq_len))
    full, _ = forward_batch(ids, params, tiny_hp)
    np.testing.assert_array_equal(predict_proba(ids, params, tiny_hp, chunk_size=4), full)


# ═══════════════════════════════════════════════════════════
# LOSS
# ═══════════════════════════════════════════════════════════

@pytest.mark.parametrize("y", [0, 1])
def test_bce_at_half_is_ln2(y):
    assert bce_loss(0.5, y) == pytest.approx(math.log(2), abs=1e-9)


def test_bce_confident_correct_prediction_is_near_zero():
    loss = bce_loss(1 - 1e-7, 1)
    assert 0 < loss == pytest.approx(1e-7, rel=1e-3)


def test_bce_at_clip_boundary():
    assert bce_loss(0.0, 1) == pytest.approx(-math.log(1e-7), abs=1e-6)
    assert bce_loss(0.0, 1) == pytest.approx(16.1181, abs=1e-4)


def test_bce_is_always_positive():
    p = np.linspace(0, 1, 101)
    for y in (0, 1):
        assert np.all(bce_loss(p, np.full_like(p, y)) > 0)


def test_mean_bce():
    assert mean_bce([0.5, 0.5], [0, 1]) == pytest.approx(math.log(2))


# ═══════════════════════════════════════════════════════════
# BACKWARD
# ═══════════════════════════════════════════════════════════

def test_zero_weights_output_bias_gradient(tiny_hp):
    """d(loss)/d(b_out) = p − y = −0.5 para p=0.5, y=1"""
    ids = np.arange(tiny_hp.seq_len) % tiny_hp.vocab_rows
    params = zero_params(tiny_hp)
    _, cache = forward(ids, params, tiny_hp)
    grads = backward(cache, params, 1.0, tiny_hp)

    assert float(grads.b_out) == pytest.approx(-0.5)


def test_gradients_have_param_shapes_and_are_finite(tiny_hp):
    params = init_params(tiny_hp, 2)
    ids = np.random.default_rng(4).integers(0, tiny_hp.vocab_rows, (6, tiny_hp.seq_len))
    y = np.array([0, 1, 1, 0, 1, 0], dtype=np.float64)
    _, cache = forward_batch(ids, params, tiny_hp)
    grads = backward(cache, params, y, tiny_hp)

    assert isinstance(grads, GradSet)
    for name, g in grads.items():
        assert g.shape == getattr(params, name).shape
    assert grads.all_finite()


def test_pad_row_receives_gradient(tiny_hp):
    params = init_params(tiny_hp, 2)
    ids = np.zeros((1, tiny_hp.seq_len), dtype=np.int64)
    ids[0, -2:] = [5, 6]
    _, cache = forward_batch(ids, params, tiny_hp)
    grads = backward(cache, params, 1.0, tiny_hp)

    assert np.abs(grads.E[0]).sum() > 0
    # linhas não usadas ficam zeradas
    assert not grads.E[7:].any()


def test_clipped_output_has_zero_gradient(tiny_hp):
    params = zero_params(tiny_hp)
    params.b_out = np.asarray(100.0, dtype=np.float32)  # σ → 1, clipado
    _, cache = forward(np.zeros(tiny_hp.seq_len, dtype=np.int64), params, tiny_hp)
    grads = backward(cache, params, 0.0, tiny_hp)
    assert float(grads.b_out) == 0.0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
