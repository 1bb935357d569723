import enum
import typing as typ

import attr

from ..errors import TrainingError
from ..optim import DEFAULT_LR, DEFAULT_MOMENTUM, DEFAULT_WEIGHT_DECAY
from ..surgery import MergeConfig, SplitConfig


class ScheduleOrder(enum.Enum):
    SPLIT_FIRST = 'split_first'
    MERGE_FIRST = 'merge_first'


def _non_negative(instance, attribute, value):
    if value < 0:
        raise TrainingError('{0} must be non-negative, got {1}'.format(attribute.name, value))


def _positive(instance, attribute, value):
    if value is not None and value < 1:
        raise TrainingError('{0} must be at least 1, got {1}'.format(attribute.name, value))


@attr.s(frozen=True)
class OptimizerConfig(object):
    lr = attr.ib(default=DEFAULT_LR, converter=float, validator=_non_negative)
    momentum = attr.ib(default=DEFAULT_MOMENTUM, converter=float, validator=_non_negative)
    weight_decay = attr.ib(default=DEFAULT_WEIGHT_DECAY, converter=float,
                           validator=_non_negative)
    batch_size = attr.ib(default=64, converter=int, validator=_positive)
    #: Seed of the minibatch shuffling.
    seed = attr.ib(default=0, converter=int)
    #: Learning rate multiplier applied when validation accuracy plateaus.
    lr_drop_factor = attr.ib(default=0.1, converter=float, validator=_non_negative)
    #: How many plateau drops a fine-tuning loop may take before it exits.
    max_lr_drops = attr.ib(default=0, converter=int, validator=_non_negative)


@attr.s(frozen=True)
class DcckSchedule(object):
    """
    Stopping thresholds and surgery settings for :func:`~dcck.training.dcck_run`.

    ``delta0``, ``delta1`` and ``delta2`` bound the outer loop, the split
    loop and every fine-tuning loop. They are validation accuracy
    improvements in fraction units, measured against the best accuracy of
    the running loop. A loop exits after ``patience`` consecutive
    evaluations fail to beat its threshold.
    """

    delta0 = attr.ib(default=0.0, converter=float, validator=_non_negative)
    delta1 = attr.ib(default=0.0, converter=float, validator=_non_negative)
    delta2 = attr.ib(default=0.0, converter=float, validator=_non_negative)
    minibatches_per_eval = attr.ib(default=100, converter=int, validator=_positive)
    split = attr.ib(factory=SplitConfig)
    merge = attr.ib(factory=MergeConfig)
    target_layers = attr.ib(default=(0,), converter=tuple)
    order = attr.ib(default=ScheduleOrder.SPLIT_FIRST, converter=ScheduleOrder)
    max_outer_rounds = attr.ib(default=1, converter=int, validator=_non_negative)
    patience = attr.ib(default=3, converter=int, validator=_positive)
    #: Safety rails; the thresholds alone may let the split loop run away.
    max_split_rounds = attr.ib(default=1, converter=int, validator=_positive)
    max_kernels = attr.ib(default=None, validator=_positive)
    max_finetune_evals = attr.ib(default=50, converter=int, validator=_positive)
