import typing as typ

import numpy as np

from .base import Layer
from ..errors import DimensionError, LayerConfigError
from ..tensor import Shape, Tensor


def pool_output_shape(input_shape: Shape, window: int) -> Shape:
    if len(input_shape) != 3:
        raise DimensionError(
            'Max pooling expects a [C x H x W] input, got {0}'.format(input_shape))
    channels, height, width = input_shape
    if height % window or width % window:
        raise DimensionError(
            'A {0}x{0} pooling window does not tile a {1}x{2} input'.format(
                window, height, width))
    return channels, height // window, width // window


def _tiles(x: Tensor, window: int) -> Tensor:
    batch, channels, height, width = x.shape
    return x.reshape(
        batch, channels, height // window, window, width // window, window,
    ).transpose(0, 1, 2, 4, 3, 5).reshape(
        batch, channels, height // window, width // window, window * window)


def _check_batch(x: Tensor, window: int):
    if x.ndim != 4:
        raise DimensionError(
            'Max pooling expects a [B x C x H x W] batch, got {0}'.format(x.shape))
    pool_output_shape(x.shape[1:], window)


def maxpool_forward(x: Tensor, window: int) -> typ.Tuple[Tensor, Tensor]:
    """
    Non-overlapping max pooling.

    Returns the pooled tensor and, per output cell, the row-major offset of
    the winning input inside its window. Ties go to the first offset.
    """
    _check_batch(x, window)
    tiles = _tiles(x, window)
    argmax = tiles.argmax(axis=-1)
    out = np.take_along_axis(tiles, argmax[..., None], axis=-1)[..., 0]
    return np.ascontiguousarray(out), argmax


def maxpool_backward(x: Tensor, grad_out: Tensor, window: int,
                     argmax: typ.Optional[Tensor] = None) -> Tensor:
    _check_batch(x, window)
    batch, channels, height, width = x.shape
    expected = (batch, channels, height // window, width // window)
    if grad_out.shape != expected:
        raise DimensionError(
            'Max pooling gradient has shape {0}, expected {1}'.format(grad_out.shape, expected))
    if argmax is None:
        argmax = _tiles(x, window).argmax(axis=-1)
    grad_tiles = np.zeros(expected + (window * window,), dtype=grad_out.dtype)
    np.put_along_axis(grad_tiles, argmax[..., None], grad_out[..., None], axis=-1)
    return np.ascontiguousarray(grad_tiles.reshape(
        expected + (window, window),
    ).transpose(0, 1, 2, 4, 3, 5).reshape(x.shape))


class MaxPool(Layer):
    kind = 'pool'

    def __init__(self, window: int, stride: typ.Optional[int] = None):
        super().__init__()
        if window < 1:
            raise LayerConfigError('Pooling window must be positive, got {0}'.format(window))
        if stride is not None and stride != window:
            raise LayerConfigError(
                'Pooling windows must tile the input: stride {0} != window {1}'.format(
                    stride, window))
        self.window = window

    @property
    def stride(self) -> int:
        return self.window

    def describe(self) -> str:
        return 'pool:{0}'.format(self.window)

    def output_shape(self, input_shape: Shape) -> Shape:
        return pool_output_shape(tuple(input_shape), self.window)

    def forward(self, x: Tensor) -> Tensor:
        out, argmax = maxpool_forward(x, self.window)
        self._cache = (x, argmax)
        return out

    def backward(self, grad_out: Tensor):
        x, argmax = self._cache
        return maxpool_backward(x, grad_out, self.window, argmax=argmax), None
