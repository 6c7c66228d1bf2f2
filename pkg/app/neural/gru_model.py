"""
🧠 GRU Model (numpy puro)

Embedding → GRU (1 camada) → Dense(1) + sigmoid, com BCE e
backpropagation through time completa.

Equações (variante "reset antes", ordem dos gates [z, r, h]):

    z_t  = σ(x_t·W_z + h_{t−1}·U_z + b_z)
    r_t  = σ(x_t·W_r + h_{t−1}·U_r + b_r)
    h̃_t  = tanh(x_t·W_h + (r_t ⊙ h_{t−1})·U_h + b_h)
    h_t  = (1 − z_t) ⊙ h_{t−1} + z_t ⊙ h̃_t

    p = clip(σ(h_T·w_out + b_out), ε, 1 − ε)

Vetores são linhas: W é (embed_dim, 3·units), U é (units, 3·units),
colunas em blocos contíguos [z | r | h].
"""

import logging
from dataclasses import dataclass, fields
from typing import Dict, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.errors import DataError

logger = logging.getLogger(__name__)

PARAM_ORDER = ("E", "W", "U", "b", "w_out", "b_out")
EMBEDDING_INIT_LIMIT = 0.05


class Hyperparams(BaseModel):
    """Hiperparâmetros do modelo e do otimizador"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    vocab_rows: int = Field(10_002, ge=1, description="Palavras de conteúdo + PAD + OOV")
    embed_dim: int = Field(100, ge=1)
    gru_units: int = Field(32, ge=1)
    seq_len: int = Field(100, ge=1)
    learning_rate: float = Field(1e-4, ge=0, lt=1, description="0 congela os pesos")
    beta1: float = Field(0.9, gt=0, lt=1)
    beta2: float = Field(0.999, gt=0, lt=1)
    adam_epsilon: float = Field(1e-8, gt=0, lt=1)
    clip_epsilon: float = Field(1e-7, gt=0, lt=0.5)
    batch_size: int = Field(32, ge=1)
    epochs: int = Field(10, ge=1)
    seed: int = Field(42, ge=0, lt=2**64)
    precision: Literal["float32", "float64"] = "float32"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(self.precision)

    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Shapes de cada tensor, na ordem de serialização."""
        h3 = 3 * self.gru_units
        return {
            "E": (self.vocab_rows, self.embed_dim),
            "W": (self.embed_dim, h3),
            "U": (self.gru_units, h3),
            "b": (h3,),
            "w_out": (self.gru_units,),
            "b_out": (),
        }

    def param_count(self) -> int:
        return sum(int(np.prod(s)) for s in self.shapes().values())


# ═══════════════════════════════════════════════════════════
# TENSOR SETS
# ═══════════════════════════════════════════════════════════

@dataclass
class _TensorSet:
    E: np.ndarray
    W: np.ndarray
    U: np.ndarray
    b: np.ndarray
    w_out: np.ndarray
    b_out: np.ndarray

    def items(self):
        return [(name, getattr(self, name)) for name in PARAM_ORDER]

    def copy(self):
        return type(self)(**{name: np.array(arr, copy=True) for name, arr in self.items()})

    def astype(self, dtype):
        return type(self)(**{name: np.asarray(arr, dtype=dtype) for name, arr in self.items()})

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(arr)) for _, arr in self.items())

    def equals(self, other) -> bool:
        return all(np.array_equal(a, getattr(other, n)) for n, a in self.items())


@dataclass
class ModelParams(_TensorSet):
    """Parâmetros treináveis"""

    def check_shapes(self, hp: Hyperparams) -> None:
        for name, shape in hp.shapes().items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise ValueError(f"shape de {name} é {actual}, esperado {shape}")


@dataclass
class GradSet(_TensorSet):
    """Um gradiente por campo de ModelParams (mesmos shapes)"""

    @classmethod
    def zeros_like(cls, params: _TensorSet) -> "GradSet":
        return cls(**{n: np.zeros_like(a) for n, a in params.items()})


@dataclass
class ForwardCache:
    """Tudo que o backward precisa, com eixo de tempo primeiro."""

    ids: np.ndarray      # (B, T)
    xs: np.ndarray       # (B, T, D)
    hs: np.ndarray       # (T+1, B, H), hs[0] = h_0 = 0
    zs: np.ndarray       # (T, B, H)
    rs: np.ndarray       # (T, B, H)
    candidates: np.ndarray  # (T, B, H)
    p_raw: np.ndarray    # (B,) sigmoid antes do clip
    p: np.ndarray        # (B,) probabilidade clipada


# ═══════════════════════════════════════════════════════════
# INIT
# ═══════════════════════════════════════════════════════════

def _glorot_blocks(rng: np.random.Generator, fan_in: int, units: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + units))
    return np.concatenate(
        [rng.uniform(-limit, limit, (fan_in, units)) for _ in range(3)], axis=1
    )


def init_params(hp: Hyperparams, seed: int = None) -> ModelParams:
    """
    Inicialização determinística por seed.

    E ~ U(−0.05, 0.05); W e U Glorot-uniform por bloco de gate;
    w_out Glorot-uniform; b e b_out zerados.
    """
    rng = np.random.default_rng(hp.seed if seed is None else seed)
    H = hp.gru_units
    out_limit = np.sqrt(6.0 / (H + 1))

    params = ModelParams(
        E=rng.uniform(-EMBEDDING_INIT_LIMIT, EMBEDDING_INIT_LIMIT, (hp.vocab_rows, hp.embed_dim)),
        W=_glorot_blocks(rng, hp.embed_dim, H),
        U=_glorot_blocks(rng, H, H),
        b=np.zeros(3 * H),
        w_out=rng.uniform(-out_limit, out_limit, H),
        b_out=np.zeros(()),
    )
    return params.astype(hp.dtype)


# ═══════════════════════════════════════════════════════════
# FORWARD
# ═══════════════════════════════════════════════════════════

def sigmoid(x: np.ndarray) -> np.ndarray:
    """σ estável (sem overflow em exp); σ(0) = 0.5 exato."""
    x = np.asarray(x)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _check_ids(ids: np.ndarray, hp: Hyperparams) -> np.ndarray:
    ids = np.asarray(ids, dtype=np.int64)
    if ids.ndim == 1:
        ids = ids[None, :]
    if ids.ndim != 2 or ids.shape[1] != hp.seq_len:
        raise DataError(f"ids com shape {ids.shape}, esperado (B, {hp.seq_len})")
    if ids.size and (ids.min() < 0 or ids.max() >= hp.vocab_rows):
        raise DataError(
            f"id fora do intervalo [0, {hp.vocab_rows}): "
            f"min={ids.min()}, max={ids.max()}"
        )
    return ids


def forward_batch(ids: np.ndarray, params: ModelParams, hp: Hyperparams) -> Tuple[np.ndarray, ForwardCache]:
    """
    Forward de um batch (B, seq_len) → probabilidades (B,) + cache.
    """
    ids = _check_ids(ids, hp)
    B, T = ids.shape
    H = hp.gru_units
    dtype = params.E.dtype

    xs = params.E[ids]
    # projeções de entrada de todos os timesteps de uma vez
    xw = xs @ params.W + params.b
    U_zr = params.U[:, :2 * H]
    U_h = params.U[:, 2 * H:]

    hs = np.zeros((T + 1, B, H), dtype=dtype)
    zs = np.empty((T, B, H), dtype=dtype)
    rs = np.empty((T, B, H), dtype=dtype)
    candidates = np.empty((T, B, H), dtype=dtype)

    for t in range(T):
        h_prev = hs[t]
        a = xw[:, t]
        zr = sigmoid(a[:, :2 * H] + h_prev @ U_zr)
        z, r = zr[:, :H], zr[:, H:]
        hc = np.tanh(a[:, 2 * H:] + (r * h_prev) @ U_h)
        hs[t + 1] = (1 - z) * h_prev + z * hc
        zs[t], rs[t], candidates[t] = z, r, hc

    logit = hs[T] @ params.w_out + params.b_out
    p_raw = sigmoid(logit)
    p = np.clip(p_raw, hp.clip_epsilon, 1 - hp.clip_epsilon)

    cache = ForwardCache(
        ids=ids, xs=xs, hs=hs, zs=zs, rs=rs, candidates=candidates, p_raw=p_raw, p=p,
    )
    return p, cache


def forward(ids, params: ModelParams, hp: Hyperparams) -> Tuple[float, ForwardCache]:
    """Forward de UM exemplo (seq_len ids) → (p, cache)."""
    ids = np.asarray(ids)
    if ids.ndim != 1:
        raise DataError(f"forward espera 1 sequência, recebido shape {ids.shape}")
    p, cache = forward_batch(ids, params, hp)
    return float(p[0]), cache


def predict_proba(ids: np.ndarray, params: ModelParams, hp: Hyperparams, chunk_size: int = 512) -> np.ndarray:
    """Probabilidades para N exemplos, em blocos (sem guardar cache)."""
    ids = np.asarray(ids, dtype=np.int64)
    if len(ids) == 0:
        return np.zeros(0, dtype=params.E.dtype)
    return np.concatenate([
        forward_batch(ids[i:i + chunk_size], params, hp)[0]
        for i in range(0, len(ids), chunk_size)
    ])


# ═══════════════════════════════════════════════════════════
# LOSS
# ═══════════════════════════════════════════════════════════

def bce_loss(p, y, clip_epsilon: float = 1e-7):
    """
    Binary cross-entropy −[y·ln p + (1−y)·ln(1−p)], calculada em float64.

    p é clipado em [ε, 1−ε] (no-op para saídas do forward).
    """
    p = np.clip(np.asarray(p, dtype=np.float64), clip_epsilon, 1 - clip_epsilon)
    y = np.asarray(y, dtype=np.float64)
    loss = -(y * np.log(p) + (1 - y) * np.log1p(-p))
    return float(loss) if loss.ndim == 0 else loss


def mean_bce(p, y, clip_epsilon: float = 1e-7) -> float:
    return float(np.mean(bce_loss(p, y, clip_epsilon)))


# ═══════════════════════════════════════════════════════════
# BACKWARD (BPTT)
# ═══════════════════════════════════════════════════════════

def backward(cache: ForwardCache, params: ModelParams, y, hp: Hyperparams) -> GradSet:
    """
    Gradientes exatos da BCE MÉDIA do batch do cache.

    Onde o clip está ativo a derivada é zero (a função clipada é constante ali).
    Linhas de embedding recebem a soma dos gradientes de todas as posições
    onde aparecem, inclusive PAD.
    """
    dtype = params.E.dtype
    H = hp.gru_units
    B, T = cache.ids.shape
    y = np.broadcast_to(np.asarray(y, dtype=dtype), (B,))

    unclipped = (cache.p_raw >= hp.clip_epsilon) & (cache.p_raw <= 1 - hp.clip_epsilon)
    dlogit = np.where(unclipped, (cache.p_raw - y) / B, 0).astype(dtype)

    grads = GradSet.zeros_like(params)
    h_T = cache.hs[T]
    grads.w_out = h_T.T @ dlogit
    grads.b_out = np.asarray(dlogit.sum(), dtype=dtype)

    U_zr = params.U[:, :2 * H]
    U_h = params.U[:, 2 * H:]
    da = np.empty((T, B, 3 * H), dtype=dtype)
    dh = np.outer(dlogit, params.w_out).astype(dtype)

    for t in reversed(range(T)):
        h_prev = cache.hs[t]
        z, r, hc = cache.zs[t], cache.rs[t], cache.candidates[t]

        dz = dh * (hc - h_prev)
        dah = dh * z * (1 - hc * hc)
        drh = dah @ U_h.T
        dar = drh * h_prev * r * (1 - r)
        daz = dz * z * (1 - z)

        da[t, :, :H] = daz
        da[t, :, H:2 * H] = dar
        da[t, :, 2 * H:] = dah

        dh = dh * (1 - z) + drh * r + da[t, :, :2 * H] @ U_zr.T

    h_prev_all = cache.hs[:-1].reshape(T * B, H)
    reset_prev = (cache.rs * cache.hs[:-1]).reshape(T * B, H)
    da_flat = da.reshape(T * B, 3 * H)
    grads.U[:, :2 * H] = h_prev_all.T @ da_flat[:, :2 * H]
    grads.U[:, 2 * H:] = reset_prev.T @ da_flat[:, 2 * H:]

    # (B, T, ·) para casar com xs / ids
    da_bt = da.transpose(1, 0, 2)
    xs_flat = cache.xs.reshape(B * T, -1)
    grads.W = xs_flat.T @ da_bt.reshape(B * T, 3 * H)
    grads.b = da_flat.sum(axis=0)
    dxs = da_bt @ params.W.T
    np.add.at(grads.E, cache.ids, dxs)

    return grads
