"""
⚙️ Adam

Atualização elementwise com momentos corrigidos de viés:

    m ← β₁m + (1−β₁)g
    v ← β₂v + (1−β₂)g²
    θ ← θ − lr·m̂ / (√v̂ + ε)
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.neural.gru_model import GradSet, Hyperparams, ModelParams


@dataclass
class AdamState:
    """Momentos m, v (mesmos shapes dos parâmetros) e contador de passos"""

    m: GradSet
    v: GradSet
    t: int = 0

    @classmethod
    def fresh(cls, params: ModelParams) -> "AdamState":
        return cls(m=GradSet.zeros_like(params), v=GradSet.zeros_like(params), t=0)


def adam_step(
    params: ModelParams,
    grads: GradSet,
    state: AdamState,
    hp: Hyperparams,
) -> Tuple[ModelParams, AdamState]:
    """Um passo de Adam. Não altera as entradas; devolve (params', state')."""
    t = state.t + 1
    b1, b2 = hp.beta1, hp.beta2
    correction1 = 1.0 - b1 ** t
    correction2 = 1.0 - b2 ** t

    new_params, new_m, new_v = {}, {}, {}
    for name, theta in params.items():
        g = getattr(grads, name)
        m = b1 * getattr(state.m, name) + (1 - b1) * g
        v = b2 * getattr(state.v, name) + (1 - b2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        update = hp.learning_rate * m_hat / (np.sqrt(v_hat) + hp.adam_epsilon)
        new_params[name] = (theta - update).astype(theta.dtype, copy=False)
        new_m[name] = m.astype(theta.dtype, copy=False)
        new_v[name] = v.astype(theta.dtype, copy=False)

    return ModelParams(**new_params), AdamState(m=GradSet(**new_m), v=GradSet(**new_v), t=t)
