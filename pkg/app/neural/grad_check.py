"""
🔬 Gradient check

Compara backward() com diferenças finitas centrais em um modelo reduzido
(float64), entrada por entrada:

    numeric  = (L(θ+ε) − L(θ−ε)) / 2ε
    rel_err  = |analytic − numeric| / max(1e-8, |analytic| + |numeric|)
"""

import logging
from typing import Callable, Optional

import numpy as np

from app.neural.gru_model import (
    Hyperparams,
    ModelParams,
    backward,
    forward_batch,
    init_params,
    mean_bce,
)

logger = logging.getLogger(__name__)

GRAD_CHECK_TOLERANCE = 1e-4

SMALL_HPARAMS = Hyperparams(
    vocab_rows=20,
    embed_dim=5,
    gru_units=4,
    seq_len=6,
    precision="float64",
)


def _loss(ids, labels, params: ModelParams, hp: Hyperparams) -> float:
    p, _ = forward_batch(ids, params, hp)
    return mean_bce(p, labels, hp.clip_epsilon)


def grad_check(
    hp_small: Hyperparams = SMALL_HPARAMS,
    seed: int = 0,
    eps: float = 1e-3,
    batch_size: int = 2,
    backward_fn: Optional[Callable] = None,
) -> float:
    """
    Max erro relativo entre gradiente analítico e numérico.

    Args:
        hp_small: modelo reduzido; é forçado para float64
        seed: seed dos parâmetros, ids e labels
        eps: passo da diferença central
        batch_size: exemplos no batch avaliado
        backward_fn: substitui backward() (usado para testes de mutação)

    Returns:
        max rel_err sobre todas as entradas de todos os parâmetros
    """
    hp = hp_small.model_copy(update={"precision": "float64"})
    backward_fn = backward_fn or backward

    rng = np.random.default_rng(seed)
    params = init_params(hp, seed)
    # b e b_out começam zerados; perturba para exercitar todos os termos
    params.b = rng.uniform(-0.5, 0.5, params.b.shape)
    params.b_out = np.asarray(rng.uniform(-0.5, 0.5))
    params.E = rng.uniform(-1.0, 1.0, params.E.shape)

    ids = rng.integers(0, hp.vocab_rows, size=(batch_size, hp.seq_len))
    labels = rng.integers(0, 2, size=batch_size).astype(np.float64)

    _, cache = forward_batch(ids, params, hp)
    analytic = backward_fn(cache, params, labels, hp)

    worst = 0.0
    worst_name = None
    for name, tensor in params.items():
        grad = getattr(analytic, name)
        flat = tensor.reshape(-1)
        grad_flat = np.asarray(grad).reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            plus = _loss(ids, labels, params, hp)
            flat[i] = original - eps
            minus = _loss(ids, labels, params, hp)
            flat[i] = original

            numeric = (plus - minus) / (2 * eps)
            a = grad_flat[i]
            err = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
            if err > worst:
                worst, worst_name = err, f"{name}[{i}]"

    logger.info(f"🔬 Grad check (seed={seed}): max rel err = {worst:.3e} em {worst_name}")
    return float(worst)
