import typing as typ

import attr
import numpy as np

from ..errors import DimensionError
from ..layers import Conv, Layer, ParamGrads, SoftmaxXent
from ..tensor import Shape, Tensor


@attr.s(eq=False)
class NetworkModel(object):
    """
    An ordered stack of layers ending in a single :class:`SoftmaxXent`.

    ``input_shape`` is the per-sample ``[d x H x W]`` shape fed to the first
    layer. Structural surgery mutates ``layers`` in place.
    """

    input_shape = attr.ib(converter=tuple)
    layers = attr.ib(converter=list)

    @property
    def loss_layer(self) -> SoftmaxXent:
        return self.layers[-1]

    @property
    def body(self) -> typ.List[Layer]:
        """Every layer but the loss."""
        return self.layers[:-1]

    def conv_layer_indices(self) -> typ.List[int]:
        return [idx for idx, layer in enumerate(self.layers) if isinstance(layer, Conv)]

    def parameterized_indices(self) -> typ.List[int]:
        return [idx for idx, layer in enumerate(self.layers) if layer.has_params]

    def parameter_count(self) -> int:
        return sum(layer.parameter_count() for layer in self.layers)

    def layer_input_shapes(self) -> typ.List[Shape]:
        """
        The per-sample input shape of every layer, chained from
        ``input_shape``.

        .. raises::
            DimensionError: If some layer rejects its input.
        """
        shapes = []
        shape = self.input_shape
        for layer in self.layers:
            shapes.append(shape)
            shape = layer.output_shape(shape)
        return shapes

    def forward(self, x: Tensor) -> Tensor:
        """The logits for the ``[B x d x H x W]`` batch ``x``."""
        if tuple(x.shape[1:]) != self.input_shape:
            raise DimensionError(
                'Model expects samples of shape {0}, got {1}'.format(
                    self.input_shape, tuple(x.shape[1:])))
        for layer in self.body:
            x = layer.forward(x)
        return x

    def predict(self, x: Tensor) -> np.ndarray:
        return self.forward(x).argmax(axis=1)

    def loss_and_gradients(
            self, x: Tensor, labels,
    ) -> typ.Tuple[float, Tensor, typ.List[typ.Optional[ParamGrads]]]:
        """
        Run a forward and a backward pass over one minibatch.

        Returns ``(loss, probs, grads)`` where ``grads[i]`` holds the
        gradients of layer ``i`` or ``None`` for layers without parameters.
        """
        logits = self.forward(x)
        probs = self.loss_layer.forward(logits, labels)
        loss = self.loss_layer.last_loss
        grads = [None] * len(self.layers)
        grad = None
        for idx in range(len(self.layers) - 1, -1, -1):
            grad, grads[idx] = self.layers[idx].backward(grad)
        return loss, probs, grads

    def clear_caches(self):
        for layer in self.layers:
            layer.clear_cache()

    def clone(self) -> 'NetworkModel':
        return NetworkModel(
            input_shape=self.input_shape,
            layers=[layer.copy() for layer in self.layers],
        )

    def describe(self) -> typ.List[str]:
        return [layer.describe() for layer in self.layers]

    def __repr__(self):
        return '<{0}: {1} -> {2}>'.format(
            self.__class__.__name__,
            'x'.join(str(extent) for extent in self.input_shape),
            ' '.join(self.describe()))
