"""
Valid-mode, stride 1 convolution lowered to a matrix product (im2col).
"""
import typing as typ

import attr
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .base import ParameterizedLayer, ParamGrads
from ..errors import DimensionError, LayerConfigError
from ..tensor import ACCUMULATOR_DTYPE, DTYPE, matmul, Shape, Tensor

CONV_INIT_STD = 0.01


def _check_weights(instance, attribute, value):
    if value.ndim != 4:
        raise LayerConfigError(
            'Convolution weights must be rank 4, got {0}'.format(value.shape))
    if value.shape[2] != value.shape[3]:
        raise LayerConfigError(
            'Only square kernels are supported, got {0}'.format(value.shape[2:]))
    if min(value.shape) < 1:
        raise LayerConfigError('Empty convolution weights {0}'.format(value.shape))


def _check_biases(instance, attribute, value):
    if value.shape != (instance.weights.shape[0],):
        raise LayerConfigError(
            'Expected {0} biases, got shape {1}'.format(instance.weights.shape[0], value.shape))


def _only(expected):
    def validator(instance, attribute, value):
        if value != expected:
            raise LayerConfigError(
                '{0} is fixed to {1}, got {2}'.format(attribute.name, expected, value))
    return validator


@attr.s(eq=False)
class ConvLayerParams(object):
    """
    Weights ``[N x d x k x k]`` and biases ``[N]`` of one convolution.
    """

    weights = attr.ib(validator=_check_weights)
    biases = attr.ib(validator=_check_biases)
    stride = attr.ib(default=1, validator=_only(1))
    padding = attr.ib(default=0, validator=_only(0))

    @property
    def kernel_count(self) -> int:
        return self.weights.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weights.shape[1]

    @property
    def kernel_size(self) -> int:
        return self.weights.shape[2]

    @property
    def sub_dimension(self) -> int:
        """``d * k * k``, the length of one flattened kernel."""
        return int(np.prod(self.weights.shape[1:]))


def init_conv_params(kernels: int, in_channels: int, kernel_size: int,
                     rng: np.random.Generator, dtype=DTYPE) -> ConvLayerParams:
    shape = (kernels, in_channels, kernel_size, kernel_size)
    return ConvLayerParams(
        weights=rng.normal(0.0, CONV_INIT_STD, size=shape).astype(dtype),
        biases=np.zeros(kernels, dtype=dtype),
    )


def conv_output_shape(input_shape: Shape, p: ConvLayerParams) -> Shape:
    if len(input_shape) != 3:
        raise DimensionError(
            'Convolution expects a [d x H x W] input, got {0}'.format(input_shape))
    channels, height, width = input_shape
    if channels != p.in_channels:
        raise DimensionError(
            'Convolution expects {0} input channels, got {1}'.format(p.in_channels, channels))
    k = p.kernel_size
    if height < k or width < k:
        raise DimensionError(
            'Input {0}x{1} is smaller than the {2}x{2} kernel'.format(height, width, k))
    return p.kernel_count, height - k + 1, width - k + 1


def im2col(x: Tensor, kernel_size: int) -> Tensor:
    """
    Lower ``[B x d x H x W]`` into ``[B*H'*W' x d*k*k]`` patch rows.

    Row order is ``(b, i, j)``; column order matches a flattened
    ``[d x k x k]`` kernel.
    """
    windows = sliding_window_view(x, (kernel_size, kernel_size), axis=(2, 3))
    batch, channels, out_h, out_w = windows.shape[:4]
    return windows.transpose(0, 2, 3, 1, 4, 5).reshape(
        batch * out_h * out_w, channels * kernel_size * kernel_size)


def _check_input(x: Tensor, p: ConvLayerParams) -> Shape:
    if x.ndim != 4:
        raise DimensionError(
            'Convolution expects a [B x d x H x W] batch, got {0}'.format(x.shape))
    return conv_output_shape(x.shape[1:], p)


def conv_forward(x: Tensor, p: ConvLayerParams, cols: typ.Optional[Tensor] = None) -> Tensor:
    """
    ``out[b, n, i, j] = bias[n] + sum_{c,u,v} w[n, c, u, v] * x[b, c, i+u, j+v]``
    """
    kernels, out_h, out_w = _check_input(x, p)
    if cols is None:
        cols = im2col(x, p.kernel_size)
    out = matmul(cols, p.weights.reshape(kernels, -1).T) + p.biases
    return np.ascontiguousarray(
        out.reshape(x.shape[0], out_h, out_w, kernels).transpose(0, 3, 1, 2))


def conv_backward(x: Tensor, p: ConvLayerParams, grad_out: Tensor,
                  cols: typ.Optional[Tensor] = None) -> typ.Tuple[Tensor, Tensor, Tensor]:
    """
    Gradients ``(grad_x, grad_w, grad_b)`` for the upstream ``grad_out``.
    """
    kernels, out_h, out_w = _check_input(x, p)
    expected = (x.shape[0], kernels, out_h, out_w)
    if grad_out.shape != expected:
        raise DimensionError(
            'Convolution gradient has shape {0}, expected {1}'.format(grad_out.shape, expected))
    if cols is None:
        cols = im2col(x, p.kernel_size)
    k = p.kernel_size
    dout = grad_out.transpose(0, 2, 3, 1).reshape(-1, kernels)

    grad_b = dout.sum(axis=0, dtype=ACCUMULATOR_DTYPE).astype(p.biases.dtype)
    grad_w = matmul(dout.T, cols).reshape(p.weights.shape)

    dcols = matmul(dout, p.weights.reshape(kernels, -1)).astype(ACCUMULATOR_DTYPE)
    dcols = dcols.reshape(x.shape[0], out_h, out_w, p.in_channels, k, k)
    grad_x = np.zeros(x.shape, dtype=ACCUMULATOR_DTYPE)
    for u in range(k):
        for v in range(k):
            grad_x[:, :, u:u + out_h, v:v + out_w] += dcols[..., u, v].transpose(0, 3, 1, 2)
    return grad_x.astype(x.dtype), grad_w.astype(p.weights.dtype), grad_b


class Conv(ParameterizedLayer):
    kind = 'conv'

    def describe(self) -> str:
        return 'conv:{0}:{1}'.format(self.params.kernel_count, self.params.kernel_size)

    def output_shape(self, input_shape: Shape) -> Shape:
        return conv_output_shape(tuple(input_shape), self.params)

    def forward(self, x: Tensor) -> Tensor:
        _check_input(x, self.params)
        cols = im2col(x, self.params.kernel_size)
        self._cache = (x, cols)
        return conv_forward(x, self.params, cols=cols)

    def backward(self, grad_out: Tensor):
        x, cols = self._cache
        grad_x, grad_w, grad_b = conv_backward(x, self.params, grad_out, cols=cols)
        return grad_x, ParamGrads(grad_w, grad_b)
