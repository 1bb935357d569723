"""
Textual layer descriptors and model construction.

A descriptor is one of ``conv:N:k``, ``relu``, ``pool:w``, ``flatten``,
``fc:N`` or ``softmax``. Architectures are whitespace separated descriptor
lists, so they can live in run configurations.
"""
import typing as typ

import numpy as np

from ..errors import DimensionError, LayerConfigError
from ..layers import (
    Conv, Fc, Flatten, init_conv_params, init_fc_params, MaxPool, ReLU, SoftmaxXent,
)
from ..tensor import DTYPE, Shape
from .network import NetworkModel
from .validation import ensure_valid

#: The MNIST baseline: two 5x5 convolutions with 2x2 pooling, then two
#: fully-connected layers.
REFERENCE_LAYERS = (
    'conv:100:5', 'relu', 'pool:2',
    'conv:50:5', 'relu', 'pool:2',
    'flatten', 'fc:100', 'relu', 'fc:10', 'softmax',
)
MNIST_INPUT_SHAPE = (1, 28, 28)

_ARITY = {
    'conv': 2,
    'relu': 0,
    'pool': 1,
    'flatten': 0,
    'fc': 1,
    'softmax': 0,
}


def parse_layer_spec(text: str) -> typ.Tuple[str, typ.Tuple[int, ...]]:
    kind, *args = text.strip().split(':')
    if kind not in _ARITY:
        raise LayerConfigError('Unknown layer kind {0!r} in {1!r}'.format(kind, text))
    if len(args) != _ARITY[kind]:
        raise LayerConfigError(
            'Layer {0!r} takes {1} argument(s), got {2!r}'.format(kind, _ARITY[kind], text))
    try:
        values = tuple(int(arg) for arg in args)
    except ValueError:
        raise LayerConfigError('Non-integer argument in layer {0!r}'.format(text)) from None
    if any(value < 1 for value in values):
        raise LayerConfigError('Layer arguments must be positive in {0!r}'.format(text))
    return kind, values


def split_architecture(text: str) -> typ.Tuple[str, ...]:
    """Layer descriptors of a whitespace separated architecture string."""
    return tuple(text.split())


def parse_input_shape(text: str) -> Shape:
    """Parse ``1x28x28`` into ``(1, 28, 28)``."""
    try:
        shape = tuple(int(part) for part in text.lower().split('x'))
    except ValueError:
        raise LayerConfigError('Invalid input shape {0!r}'.format(text)) from None
    if len(shape) != 3 or min(shape) < 1:
        raise LayerConfigError('Input shape must be CxHxW, got {0!r}'.format(text))
    return shape


def build_model(input_shape: Shape, layer_specs: typ.Sequence[str], seed: int,
                dtype=DTYPE) -> NetworkModel:
    """
    Build and initialise a model; layers are sized from the shapes flowing
    into them.
    """
    rng = np.random.default_rng(seed)
    shape = tuple(input_shape)
    layers = []
    for spec in layer_specs:
        kind, args = parse_layer_spec(spec)
        if kind == 'conv':
            if len(shape) != 3:
                raise LayerConfigError('{0!r} cannot follow a flattened layer'.format(spec))
            layer = Conv(init_conv_params(args[0], shape[0], args[1], rng, dtype=dtype))
        elif kind == 'fc':
            if len(shape) != 1:
                raise LayerConfigError('{0!r} must follow a flatten layer'.format(spec))
            layer = Fc(init_fc_params(args[0], shape[0], rng, dtype=dtype))
        elif kind == 'pool':
            layer = MaxPool(args[0])
        elif kind == 'relu':
            layer = ReLU()
        elif kind == 'flatten':
            layer = Flatten()
        else:
            layer = SoftmaxXent()
        layers.append(layer)
        if kind != 'softmax':
            try:
                shape = layer.output_shape(shape)
            except DimensionError as e:
                raise LayerConfigError('Layer {0!r}: {1}'.format(spec, e)) from e
    return ensure_valid(NetworkModel(input_shape=input_shape, layers=layers))
