"""
Stochastic gradient descent with momentum and L2 weight decay.
"""
import typing as typ

import attr
import numpy as np

from .errors import DimensionError
from .layers import ParamGrads
from .models import NetworkModel

DEFAULT_LR = 0.01
DEFAULT_MOMENTUM = 0.9
DEFAULT_WEIGHT_DECAY = 5e-4


@attr.s(eq=False)
class SgdState(object):
    """
    Momentum buffers keyed by layer index, plus the number of steps taken.

    Buffers are created lazily. Structural surgery invalidates them, so the
    trainers start a fresh state after every split or merge.
    """

    velocities = attr.ib(factory=dict)
    step = attr.ib(default=0)

    def velocity_for(self, index: int, weights: np.ndarray,
                     biases: np.ndarray) -> typ.Tuple[np.ndarray, np.ndarray]:
        if index not in self.velocities:
            self.velocities[index] = (np.zeros_like(weights), np.zeros_like(biases))
        v_w, v_b = self.velocities[index]
        if v_w.shape != weights.shape or v_b.shape != biases.shape:
            raise DimensionError(
                'Momentum buffers of layer {0} have shape {1}/{2}, parameters {3}/{4}'.format(
                    index, v_w.shape, v_b.shape, weights.shape, biases.shape))
        return v_w, v_b


def _update(param: np.ndarray, grad: np.ndarray, velocity: np.ndarray,
            lr: float, momentum: float, weight_decay: float):
    if grad.shape != param.shape:
        raise DimensionError(
            'Gradient of shape {0} for a parameter of shape {1}'.format(grad.shape, param.shape))
    velocity *= momentum
    velocity -= lr * (grad + weight_decay * param)
    param += velocity


def sgd_step(model: NetworkModel, grads: typ.Sequence[typ.Optional[ParamGrads]],
             lr: float = DEFAULT_LR, momentum: float = DEFAULT_MOMENTUM,
             weight_decay: float = DEFAULT_WEIGHT_DECAY,
             state: typ.Optional[SgdState] = None) -> SgdState:
    """
    Update every parameterised layer of ``model`` in place::

        v <- momentum * v - lr * (g + weight_decay * w)
        w <- w + v

    ``grads`` is aligned with ``model.layers`` as returned by
    :meth:`~dcck.models.network.NetworkModel.loss_and_gradients`.
    """
    if state is None:
        state = SgdState()
    if len(grads) != len(model.layers):
        raise DimensionError(
            'Got gradients for {0} layers, the model has {1}'.format(
                len(grads), len(model.layers)))
    for idx, layer in enumerate(model.layers):
        if not layer.has_params:
            continue
        if grads[idx] is None:
            raise DimensionError('Missing gradients for layer {0}'.format(idx))
        params = layer.params
        v_w, v_b = state.velocity_for(idx, params.weights, params.biases)
        _update(params.weights, grads[idx].weights, v_w, lr, momentum, weight_decay)
        _update(params.biases, grads[idx].biases, v_b, lr, momentum, weight_decay)
    state.step += 1
    return state
