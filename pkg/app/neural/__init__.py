"""
Neural package: GRU numpy, Adam e gradient check
"""

from .gru_model import (
    PARAM_ORDER,
    ForwardCache,
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
from .optimizer import AdamState, adam_step
from .grad_check import GRAD_CHECK_TOLERANCE, SMALL_HPARAMS, grad_check

__all__ = [
    'PARAM_ORDER', 'ForwardCache', 'GradSet', 'Hyperparams', 'ModelParams',
    'backward', 'bce_loss', 'forward', 'forward_batch', 'init_params', 'mean_bce',
    'predict_proba', 'sigmoid', 'AdamState', 'adam_step',
    'GRAD_CHECK_TOLERANCE', 'SMALL_HPARAMS', 'grad_check',
]
