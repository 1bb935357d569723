import abc
import copy
import typing as typ

import attr

from ..tensor import Shape, Tensor


@attr.s(eq=False, slots=True)
class ParamGrads(object):
    """Gradients of the loss with respect to one layer's parameters."""

    weights = attr.ib()
    biases = attr.ib()


class Layer(metaclass=abc.ABCMeta):
    """
    One stage of a :class:`~dcck.models.network.NetworkModel`.

    Shapes passed to :meth:`output_shape` are per-sample (no batch axis);
    tensors passed to :meth:`forward` carry a leading batch axis.
    :meth:`forward` remembers what :meth:`backward` needs, so a backward call
    always refers to the most recent forward call.
    """

    #: Short name used in layer descriptors and checkpoint manifests.
    kind = None

    #: ``True`` for layers owning ``params``.
    has_params = False

    def __init__(self):
        self._cache = None

    @abc.abstractmethod
    def describe(self) -> str:
        """The layer descriptor this layer can be rebuilt from."""

    @abc.abstractmethod
    def output_shape(self, input_shape: Shape) -> Shape:
        """
        The per-sample output shape for ``input_shape``.

        .. raises::
            DimensionError: If the layer cannot consume ``input_shape``.
        """

    @abc.abstractmethod
    def forward(self, x: Tensor) -> Tensor:
        pass

    @abc.abstractmethod
    def backward(self, grad_out: Tensor) -> typ.Tuple[Tensor, typ.Optional[ParamGrads]]:
        pass

    def parameter_count(self) -> int:
        return 0

    def copy(self) -> 'Layer':
        clone = copy.copy(self)
        clone._cache = None
        return clone

    def clear_cache(self):
        self._cache = None

    def __repr__(self):
        return '<{0}: {1}>'.format(self.__class__.__name__, self.describe())


class ParameterizedLayer(Layer):
    """A layer owning a ``params`` value with ``weights`` and ``biases``."""

    has_params = True

    def __init__(self, params):
        super().__init__()
        self.params = params

    def parameter_count(self) -> int:
        return int(self.params.weights.size + self.params.biases.size)

    def copy(self) -> 'ParameterizedLayer':
        clone = super().copy()
        clone.params = attr.evolve(
            self.params,
            weights=self.params.weights.copy(),
            biases=self.params.biases.copy(),
        )
        return clone
