import typing as typ

import attr
import numpy as np

from .base import Layer, ParameterizedLayer, ParamGrads
from ..errors import DimensionError, LayerConfigError
from ..tensor import ACCUMULATOR_DTYPE, DTYPE, matmul, Shape, Tensor


def _check_weights(instance, attribute, value):
    if value.ndim != 2 or min(value.shape) < 1:
        raise LayerConfigError(
            'Fully connected weights must be a non-empty [out x in] matrix, got {0}'.format(
                value.shape))


def _check_biases(instance, attribute, value):
    if value.shape != (instance.weights.shape[0],):
        raise LayerConfigError(
            'Expected {0} biases, got shape {1}'.format(instance.weights.shape[0], value.shape))


@attr.s(eq=False)
class FcLayerParams(object):
    """Weights ``[out x in]`` and biases ``[out]`` of a fully-connected layer."""

    weights = attr.ib(validator=_check_weights)
    biases = attr.ib(validator=_check_biases)

    @property
    def out_features(self) -> int:
        return self.weights.shape[0]

    @property
    def in_features(self) -> int:
        return self.weights.shape[1]


def init_fc_params(out_features: int, in_features: int,
                   rng: np.random.Generator, dtype=DTYPE) -> FcLayerParams:
    return FcLayerParams(
        weights=rng.normal(
            0.0, 1.0 / np.sqrt(in_features), size=(out_features, in_features)).astype(dtype),
        biases=np.zeros(out_features, dtype=dtype),
    )


def _check_input(x: Tensor, p: FcLayerParams):
    if x.ndim != 2 or x.shape[1] != p.in_features:
        raise DimensionError(
            'Fully connected layer expects a [B x {0}] batch, got {1}'.format(
                p.in_features, x.shape))


def fc_forward(x: Tensor, p: FcLayerParams) -> Tensor:
    _check_input(x, p)
    return matmul(x, p.weights.T) + p.biases


def fc_backward(x: Tensor, p: FcLayerParams,
                grad_out: Tensor) -> typ.Tuple[Tensor, Tensor, Tensor]:
    _check_input(x, p)
    if grad_out.shape != (x.shape[0], p.out_features):
        raise DimensionError(
            'Fully connected gradient has shape {0}, expected {1}'.format(
                grad_out.shape, (x.shape[0], p.out_features)))
    grad_x = matmul(grad_out, p.weights)
    grad_w = matmul(grad_out.T, x).astype(p.weights.dtype)
    grad_b = grad_out.sum(axis=0, dtype=ACCUMULATOR_DTYPE).astype(p.biases.dtype)
    return grad_x.astype(x.dtype), grad_w, grad_b


class Flatten(Layer):
    kind = 'flatten'

    def describe(self) -> str:
        return self.kind

    def output_shape(self, input_shape: Shape) -> Shape:
        return (int(np.prod(input_shape)),)

    def forward(self, x: Tensor) -> Tensor:
        self._cache = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_out: Tensor):
        return grad_out.reshape(self._cache), None


class Fc(ParameterizedLayer):
    kind = 'fc'

    def describe(self) -> str:
        return 'fc:{0}'.format(self.params.out_features)

    def output_shape(self, input_shape: Shape) -> Shape:
        if tuple(input_shape) != (self.params.in_features,):
            raise DimensionError(
                'Fully connected layer expects {0} inputs, got shape {1}'.format(
                    self.params.in_features, tuple(input_shape)))
        return (self.params.out_features,)

    def forward(self, x: Tensor) -> Tensor:
        self._cache = x
        return fc_forward(x, self.params)

    def backward(self, grad_out: Tensor):
        grad_x, grad_w, grad_b = fc_backward(self._cache, self.params, grad_out)
        return grad_x, ParamGrads(grad_w, grad_b)
