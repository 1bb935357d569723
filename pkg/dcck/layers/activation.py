import numpy as np

from .base import Layer
from ..errors import DimensionError
from ..tensor import Shape, Tensor


def relu_forward(x: Tensor) -> Tensor:
    """``g(x) = max(0, x)``"""
    return np.maximum(x, 0)


def relu_backward(x: Tensor, grad_out: Tensor) -> Tensor:
    if grad_out.shape != x.shape:
        raise DimensionError(
            'ReLU gradient has shape {0}, expected {1}'.format(grad_out.shape, x.shape))
    return grad_out * (x > 0)


class ReLU(Layer):
    kind = 'relu'

    def describe(self) -> str:
        return self.kind

    def output_shape(self, input_shape: Shape) -> Shape:
        return tuple(input_shape)

    def forward(self, x: Tensor) -> Tensor:
        self._cache = x
        return relu_forward(x)

    def backward(self, grad_out: Tensor):
        return relu_backward(self._cache, grad_out), None
