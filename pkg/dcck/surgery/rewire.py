"""
Access to a consumer layer's incoming weights grouped by producer channel.

For a convolutional consumer, channel ``n`` of the producer owns
``weights[:, n]``. For a fully-connected consumer behind a flatten, it owns
the contiguous block ``weights[:, n*hw:(n+1)*hw]``.
"""
import typing as typ

import attr
import numpy as np

from ..errors import SurgeryError
from ..layers import Conv, Fc, Flatten, MaxPool, ReLU
from ..models import consumer_index, NetworkModel
from ..tensor import Tensor

# Layers allowed between a convolution and its consumer; none of them mixes channels.
_PASS_THROUGH = (ReLU, MaxPool, Flatten)


@attr.s(frozen=True)
class SurgerySite(object):
    """A convolution being resized together with the layer consuming it."""

    index = attr.ib()
    consumer = attr.ib()

    def conv(self, model: NetworkModel) -> Conv:
        return model.layers[self.index]

    def consumer_layer(self, model: NetworkModel) -> typ.Union[Conv, Fc]:
        return model.layers[self.consumer]

    def feeds_dense(self, model: NetworkModel) -> bool:
        return isinstance(self.consumer_layer(model), Fc)


def locate(model: NetworkModel, index: int) -> SurgerySite:
    """
    .. raises::
        SurgeryError: If ``index`` is not a convolution with a downstream
            convolution or fully-connected layer reachable through
            channel-preserving layers only.
    """
    if not 0 <= index < len(model.layers):
        raise SurgeryError('Layer index {0} out of range'.format(index))
    if not isinstance(model.layers[index], Conv):
        raise SurgeryError('Layer {0} ({1}) is not a convolution'.format(
            index, model.layers[index].describe()))
    consumer = consumer_index(model, index)
    if consumer is None:
        raise SurgeryError('Convolution {0} has no downstream parameterised layer'.format(index))
    for between in model.layers[index + 1:consumer]:
        if not isinstance(between, _PASS_THROUGH):
            raise SurgeryError('Layer {0} sits between convolution {1} and its consumer'.format(
                between.describe(), index))
    return SurgerySite(index=index, consumer=consumer)


def incoming_by_channel(weights: Tensor, channels: int, dense: bool) -> Tensor:
    """A ``[out x channels x ...]`` view of the consumer weights."""
    if not dense:
        return weights
    if weights.shape[1] % channels:
        raise SurgeryError(
            'Fully connected input of {0} does not split into {1} channel blocks'.format(
                weights.shape[1], channels))
    return weights.reshape(weights.shape[0], channels, weights.shape[1] // channels)


def restore_layout(grouped: Tensor, dense: bool) -> Tensor:
    if not dense:
        return np.ascontiguousarray(grouped)
    return np.ascontiguousarray(grouped.reshape(grouped.shape[0], -1))
