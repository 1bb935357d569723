import enum
import logging
import typing as typ
import warnings

import attr
import numpy as np

from .rewire import incoming_by_channel, locate, restore_layout
from ..cluster import ClusterOutcome, kmeans, nearest_member
from ..errors import DenseConsumerMergeWarning, SurgeryError
from ..layers import ConvLayerParams
from ..models import ensure_valid, NetworkModel

logger = logging.getLogger(__name__)


class WeightVariant(enum.Enum):
    #: Keep the member kernel nearest each centroid.
    NEAREST_FILTER = 'nearest_filter'
    #: Use the centroids themselves.
    CENTROID = 'centroid'


class BiasVariant(enum.Enum):
    #: The bias of the kept kernel.
    MATCHED = 'matched'
    #: The mean bias over the cluster.
    CLUSTER_MEAN = 'cluster_mean'


_PAIRED_BIAS = {
    WeightVariant.NEAREST_FILTER: BiasVariant.MATCHED,
    WeightVariant.CENTROID: BiasVariant.CLUSTER_MEAN,
}


def _positive(instance, attribute, value):
    if value is not None and value < 1:
        raise SurgeryError('{0} must be at least 1, got {1}'.format(attribute.name, value))


def _optional_enum(enum_cls):
    def convert(value):
        return None if value is None else enum_cls(value)
    return convert


@attr.s(frozen=True)
class MergeConfig(object):
    """
    ``k`` is the number of kernels left after merging. ``None`` is only
    meaningful to the DCCK scheduler, which then merges back to the kernel
    count the round started with. ``bias_variant`` defaults to the variant
    paired with ``weight_variant``.
    """

    k = attr.ib(default=None, validator=_positive)
    weight_variant = attr.ib(default=WeightVariant.NEAREST_FILTER, converter=WeightVariant)
    bias_variant = attr.ib(default=None, converter=_optional_enum(BiasVariant))
    seed = attr.ib(default=0, converter=int)
    n_init = attr.ib(default=1, converter=int)

    @property
    def effective_bias_variant(self) -> BiasVariant:
        if self.bias_variant is None:
            return _PAIRED_BIAS[self.weight_variant]
        return self.bias_variant


def merge_layer(model: NetworkModel, layer_index: int,
                cfg: MergeConfig) -> typ.Tuple[NetworkModel, ClusterOutcome]:
    """
    Shrink convolution ``layer_index`` to ``cfg.k`` kernels by k-means over
    its flattened kernels, then fold the consumer's incoming weights by
    summing them over each cluster. Mutates ``model``; returns it with the
    clustering used.

    The consumer's own biases are left untouched.
    """
    site = locate(model, layer_index)
    conv = site.conv(model)
    consumer = site.consumer_layer(model)
    dense = site.feeds_dense(model)
    kernels = conv.params.kernel_count
    if cfg.k is None:
        raise SurgeryError('A merge needs an explicit target kernel count')
    if cfg.k > kernels:
        raise SurgeryError('Cannot merge {0} kernels of layer {1} into {2}'.format(
            kernels, layer_index, cfg.k))
    if dense:
        warnings.warn(
            'Merging layer {0}, which feeds fully-connected layer {1}'.format(
                layer_index, site.consumer),
            DenseConsumerMergeWarning)
    params_before = model.parameter_count()

    weights, biases = conv.params.weights, conv.params.biases
    points = weights.reshape(kernels, conv.params.sub_dimension)
    outcome = kmeans(points, cfg.k, seed=cfg.seed, n_init=cfg.n_init)

    if cfg.weight_variant is WeightVariant.NEAREST_FILTER:
        kept = nearest_member(points, outcome)
        new_weights = weights[kept]
    else:
        kept = None
        new_weights = outcome.centroids.astype(weights.dtype).reshape((cfg.k,) + weights.shape[1:])

    if cfg.effective_bias_variant is BiasVariant.MATCHED:
        if kept is None:
            kept = nearest_member(points, outcome)
        new_biases = biases[kept]
    else:
        sums = np.zeros(cfg.k, dtype=np.float64)
        np.add.at(sums, outcome.assignment, biases)
        new_biases = (sums / outcome.cluster_sizes).astype(biases.dtype)

    incoming = incoming_by_channel(consumer.params.weights, kernels, dense)
    folded = np.zeros((incoming.shape[0], cfg.k) + incoming.shape[2:], dtype=np.float64)
    np.add.at(folded, (slice(None), outcome.assignment), incoming)
    if cfg.k == kernels:
        # Singleton clusters in original order; keep the consumer untouched.
        folded = incoming

    conv.params = ConvLayerParams(
        weights=np.ascontiguousarray(new_weights),
        biases=np.ascontiguousarray(new_biases),
    )
    consumer.params = attr.evolve(
        consumer.params,
        weights=restore_layout(folded.astype(incoming.dtype), dense),
    )
    model.clear_caches()
    ensure_valid(model)
    logger.info('Merged layer %d (%s/%s): %d -> %d kernels, distortion %.6g, '
                'parameters %d -> %d',
                layer_index, cfg.weight_variant.value, cfg.effective_bias_variant.value,
                kernels, cfg.k, outcome.distortion, params_before, model.parameter_count())
    return model, outcome
