import enum
import logging
import typing as typ

import attr
import numpy as np

from .rewire import incoming_by_channel, locate, restore_layout
from .rotate import rotate_kernel
from ..errors import SurgeryError
from ..layers import ConvLayerParams
from ..models import ensure_valid, NetworkModel
from ..tensor import concat_along_axis

logger = logging.getLogger(__name__)


class SplitMode(enum.Enum):
    NOISE = 'noise'
    ROTATE = 'rotate'
    BOTH = 'both'

    @property
    def factor(self) -> int:
        """How many kernels each original kernel becomes."""
        return 3 if self is SplitMode.BOTH else 2


def _non_negative(instance, attribute, value):
    if value < 0:
        raise SurgeryError('{0} must be non-negative, got {1}'.format(attribute.name, value))


@attr.s(frozen=True)
class SplitConfig(object):
    """
    ``sigma_noise`` is the standard deviation of the additive per-weight noise,
    ``sigma_angle`` the standard deviation of the per-kernel rotation angle in
    radians.
    """

    sigma_noise = attr.ib(default=0.001, converter=float, validator=_non_negative)
    sigma_angle = attr.ib(default=0.2, converter=float, validator=_non_negative)
    mode = attr.ib(default=SplitMode.BOTH, converter=SplitMode)
    seed = attr.ib(default=0, converter=int)


def split_layer(model: NetworkModel, layer_index: int, cfg: SplitConfig,
                max_kernels: typ.Optional[int] = None) -> NetworkModel:
    """
    Grow convolution ``layer_index`` by appending transformed copies of every
    kernel, then widen its consumer to match. Mutates and returns ``model``.

    Kernel order is ``[originals, noised, rotated]`` (whichever apply). Clone
    biases copy their originals. On the consumer side a noised clone takes a
    copy of its original's incoming weights and both halves are scaled by
    ``0.5``; a rotated clone starts with zero incoming weights.
    """
    site = locate(model, layer_index)
    conv = site.conv(model)
    consumer = site.consumer_layer(model)
    dense = site.feeds_dense(model)
    weights, biases = conv.params.weights, conv.params.biases
    kernels = conv.params.kernel_count
    if max_kernels is not None and kernels * cfg.mode.factor > max_kernels:
        raise SurgeryError(
            'Splitting layer {0} would give {1} kernels, above the cap of {2}'.format(
                layer_index, kernels * cfg.mode.factor, max_kernels))
    params_before = model.parameter_count()
    rng = np.random.default_rng(cfg.seed)

    new_weights = [weights]
    new_biases = [biases]
    incoming = incoming_by_channel(consumer.params.weights, kernels, dense)
    new_incoming = [incoming]
    if cfg.mode in (SplitMode.NOISE, SplitMode.BOTH):
        noise = rng.normal(0.0, cfg.sigma_noise, size=weights.shape) if cfg.sigma_noise else 0.0
        new_weights.append((weights + noise).astype(weights.dtype))
        new_biases.append(biases.copy())
        halved = incoming * np.asarray(0.5, dtype=incoming.dtype)
        new_incoming = [halved, halved.copy()]
    if cfg.mode in (SplitMode.ROTATE, SplitMode.BOTH):
        angles = rng.normal(0.0, cfg.sigma_angle, size=kernels) if cfg.sigma_angle else (
            np.zeros(kernels))
        new_weights.append(np.stack([
            rotate_kernel(weights[n], angles[n]) for n in range(kernels)
        ]))
        new_biases.append(biases.copy())
        new_incoming.append(np.zeros_like(incoming))

    conv.params = ConvLayerParams(
        weights=concat_along_axis(new_weights, axis=0),
        biases=concat_along_axis(new_biases, axis=0),
    )
    consumer.params = attr.evolve(
        consumer.params,
        weights=restore_layout(concat_along_axis(new_incoming, axis=1), dense),
    )
    model.clear_caches()
    ensure_valid(model)
    logger.info('Split layer %d (%s): %d -> %d kernels, parameters %d -> %d',
                layer_index, cfg.mode.value, kernels, conv.params.kernel_count,
                params_before, model.parameter_count())
    return model
