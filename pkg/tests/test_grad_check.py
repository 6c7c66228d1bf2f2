"""
Gradient check: backward contra diferenças finitas centrais
"""

import pytest

from app.neural.grad_check import GRAD_CHECK_TOLERANCE, SMALL_HPARAMS, grad_check
from app.neural.gru_model import backward


def test_reduced_model_shape():
    hp = SMALL_HPARAMS
    assert (hp.vocab_rows, hp.embed_dim, hp.gru_units, hp.seq_len) == (20, 5, 4, 6)
    assert hp.precision == "float64"


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backward_matches_finite_differences(seed):
    assert grad_check(seed=seed) < GRAD_CHECK_TOLERANCE


def test_forces_float64_even_for_float32_hparams():
    hp32 = SMALL_HPARAMS.model_copy(update={"precision": "float32"})
    assert grad_check(hp32, seed=0) < GRAD_CHECK_TOLERANCE


def test_detects_negated_dense_gradient():
    """Mutação: gradiente de w_out com sinal trocado"""

    def broken_backward(cache, params, y, hp):
        grads = backward(cache, params, y, hp)
        grads.w_out = -grads.w_out
        return grads

    assert grad_check(seed=0, backward_fn=broken_backward) > 0.1


def test_detects_scaled_recurrent_gradient():
    def broken_backward(cache, params, y, hp):
        grads = backward(cache, params, y, hp)
        grads.U = grads.U * 0.5
        return grads

    assert grad_check(seed=1, backward_fn=broken_backward) > 0.1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
