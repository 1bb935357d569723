import typing as typ

import numpy as np

from .base import Layer
from ..errors import DatasetError, DimensionError
from ..tensor import ACCUMULATOR_DTYPE, Shape, Tensor


def _check_labels(logits: Tensor, labels) -> np.ndarray:
    if logits.ndim != 2:
        raise DimensionError('Softmax expects [B x K] logits, got {0}'.format(logits.shape))
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.shape[0] != logits.shape[0]:
        raise DimensionError(
            'Got {0} labels for a batch of {1}'.format(labels.shape[0], logits.shape[0]))
    classes = logits.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise DatasetError('Labels must lie in [0, {0})'.format(classes))
    return labels


def _log_softmax(logits: Tensor) -> np.ndarray:
    shifted = logits.astype(ACCUMULATOR_DTYPE)
    shifted -= shifted.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: Tensor) -> Tensor:
    if logits.ndim != 2:
        raise DimensionError('Softmax expects [B x K] logits, got {0}'.format(logits.shape))
    return np.exp(_log_softmax(logits)).astype(logits.dtype)


def softmax_xent_forward(logits: Tensor, labels) -> typ.Tuple[float, Tensor]:
    """
    Mean cross-entropy of ``softmax(logits)`` against integer ``labels``.

    Returns ``(loss, probs)``; ``probs`` has the dtype of ``logits``.
    """
    labels = _check_labels(logits, labels)
    log_probs = _log_softmax(logits)
    loss = -log_probs[np.arange(labels.shape[0]), labels].mean()
    return float(loss), np.exp(log_probs).astype(logits.dtype)


def softmax_xent_backward(probs: Tensor, labels) -> Tensor:
    labels = _check_labels(probs, labels)
    grad = probs.astype(ACCUMULATOR_DTYPE)
    grad[np.arange(labels.shape[0]), labels] -= 1.0
    grad /= labels.shape[0]
    return grad.astype(probs.dtype)


class SoftmaxXent(Layer):
    kind = 'softmax'

    def describe(self) -> str:
        return self.kind

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 1:
            raise DimensionError(
                'Softmax expects a flat input, got shape {0}'.format(tuple(input_shape)))
        return tuple(input_shape)

    def forward(self, x: Tensor, labels=None) -> Tensor:
        """
        With ``labels`` the loss is also computed and cached for
        :meth:`backward`; without, this only returns class probabilities.
        """
        if labels is None:
            return softmax(x)
        loss, probs = softmax_xent_forward(x, labels)
        self._cache = (probs, labels, loss)
        return probs

    @property
    def last_loss(self) -> float:
        return self._cache[2]

    def backward(self, grad_out: typ.Optional[Tensor] = None):
        probs, labels, _ = self._cache
        return softmax_xent_backward(probs, labels), None
