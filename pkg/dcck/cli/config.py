"""
Run configuration files.

The grammar is line oriented::

    # comment
    section.key = value

Blank lines and ``#`` comments are ignored, keys may appear once, and
unknown keys are rejected with their line number. Every recognised key is
declared below with :func:`config_value`, which also feeds the ``--help``
text of the commands.
"""
import collections
import typing as typ

import attr

from ..errors import ConfigError
from ..models import REFERENCE_LAYERS, split_architecture

_sentinal = object()

#: Every declared key, in declaration order.
KEYS = collections.OrderedDict()


def parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('expected a boolean, got {0!r}'.format(text))


def optional(convert):
    def parse(text: str):
        if text.lower() in ('', 'none'):
            return None
        return convert(text)
    parse.__name__ = 'optional ' + convert.__name__
    return parse


def int_list(text: str) -> typ.Tuple[int, ...]:
    return tuple(int(part) for part in text.replace(',', ' ').split())


def choice(*options):
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError('expected one of {0}, got {1!r}'.format('|'.join(options), text))
        return text
    parse.__name__ = '|'.join(options)
    return parse


@attr.s(frozen=True)
class ConfigKey(object):
    key = attr.ib()
    convert = attr.ib()
    default = attr.ib()
    doc = attr.ib()

    @property
    def section(self) -> str:
        return self.key.split('.', 1)[0]

    @property
    def required(self) -> bool:
        return self.default is _sentinal

    def help_line(self) -> str:
        default = 'required' if self.required else 'default: {0}'.format(
            ' '.join(self.default) if isinstance(self.default, tuple) and self.default
            and isinstance(self.default[0], str) else self.default)
        return '  {0} ({1}; {2})\n      {3}'.format(
            self.key, getattr(self.convert, '__name__', 'str'), default, self.doc)


def config_value(key: str, *, default=_sentinal, type=str, doc: str = ''):
    """
    Declare ``key`` and return a property reading its parsed value.

    .. raises::
        ConfigError: On access, if the key is required but was not set.
    """
    KEYS[key] = ConfigKey(key=key, convert=type, default=default, doc=doc)
    docs = '{0} The value of {1!r}.'.format(doc, key)

    def getter(self):
        if key in self.values:
            return self.values[key]
        if default is _sentinal:
            raise ConfigError('Missing required setting', key=key)
        return default
    return property(fget=getter, doc=docs)


class RunConfig(object):
    """
    Parsed settings of one run; see :data:`KEYS` for what can be set.
    """

    data_source = config_value(
        'data.source', default='mnist', type=choice('synthetic', 'mnist'),
        doc='Dataset to train on.')
    data_root = config_value(
        'data.root', default=None, type=optional(str),
        doc='Directory holding the MNIST IDX files; falls back to $DCCK_DATA_DIR.')
    data_synthetic_count = config_value(
        'data.synthetic_count', default=2000, type=int,
        doc='Training samples generated for the synthetic dataset.')
    data_synthetic_test_count = config_value(
        'data.synthetic_test_count', default=500, type=int,
        doc='Test samples generated for the synthetic dataset.')
    data_subset = config_value(
        'data.subset', default=0, type=int,
        doc='Use a seeded subset of this many training samples (0 = all).')
    data_validation_fraction = config_value(
        'data.validation_fraction', default=0.1, type=float,
        doc='Fraction of the training data held out for validation.')
    data_seed = config_value(
        'data.seed', default=0, type=int,
        doc='Seed for data generation, subsetting and the validation split.')

    model_input = config_value(
        'model.input', default=None, type=optional(str),
        doc='Input shape as CxHxW; defaults to the dataset sample shape.')
    model_layers = config_value(
        'model.layers', default=REFERENCE_LAYERS, type=split_architecture,
        doc='Whitespace separated layer descriptors (conv:N:k relu pool:w flatten fc:N '
            'softmax).')
    model_seed = config_value(
        'model.seed', default=1, type=int, doc='Seed for parameter initialisation.')

    optim_lr = config_value('optim.lr', default=0.01, type=float, doc='Learning rate.')
    optim_momentum = config_value('optim.momentum', default=0.9, type=float, doc='Momentum.')
    optim_weight_decay = config_value(
        'optim.weight_decay', default=5e-4, type=float, doc='L2 weight decay.')
    optim_batch_size = config_value(
        'optim.batch_size', default=64, type=int, doc='Minibatch size.')
    optim_seed = config_value(
        'optim.seed', default=0, type=int, doc='Seed for minibatch shuffling.')
    optim_lr_drop_factor = config_value(
        'optim.lr_drop_factor', default=0.1, type=float,
        doc='Learning rate multiplier on a validation plateau.')
    optim_max_lr_drops = config_value(
        'optim.max_lr_drops', default=0, type=int,
        doc='Plateau drops a fine-tuning loop takes before exiting.')

    train_epochs = config_value(
        'train.epochs', default=0, type=int,
        doc='Train for a fixed number of epochs instead of until validation plateaus.')

    dcck_delta0 = config_value(
        'dcck.delta0', default=0.0, type=float, doc='Outer loop improvement threshold.')
    dcck_delta1 = config_value(
        'dcck.delta1', default=0.0, type=float, doc='Split loop improvement threshold.')
    dcck_delta2 = config_value(
        'dcck.delta2', default=0.0, type=float, doc='Fine-tuning improvement threshold.')
    dcck_minibatches = config_value(
        'dcck.minibatches', default=100, type=int,
        doc='Minibatches per SGD burst between validations.')
    dcck_patience = config_value(
        'dcck.patience', default=3, type=int,
        doc='Consecutive sub-threshold evaluations before a loop exits.')
    dcck_target_layers = config_value(
        'dcck.target_layers', default=(0,), type=int_list,
        doc='Indices of the convolutions to split and merge.')
    dcck_order = config_value(
        'dcck.order', default='split_first', type=choice('split_first', 'merge_first'),
        doc='Whether each round splits or merges first.')
    dcck_max_outer_rounds = config_value(
        'dcck.max_outer_rounds', default=1, type=int, doc='Cap on outer rounds.')
    dcck_max_split_rounds = config_value(
        'dcck.max_split_rounds', default=1, type=int, doc='Cap on splits per round.')
    dcck_max_kernels = config_value(
        'dcck.max_kernels', default=None, type=optional(int),
        doc='Never split a layer beyond this many kernels.')
    dcck_max_finetune_evals = config_value(
        'dcck.max_finetune_evals', default=50, type=int,
        doc='Cap on validations per fine-tuning loop.')

    split_mode = config_value(
        'split.mode', default='both', type=choice('noise', 'rotate', 'both'),
        doc='Kernel transforms used to split.')
    split_sigma_noise = config_value(
        'split.sigma_noise', default=0.001, type=float,
        doc='Standard deviation of the per-weight Gaussian noise.')
    split_sigma_angle = config_value(
        'split.sigma_angle', default=0.2, type=float,
        doc='Standard deviation of the rotation angle, in radians.')
    split_seed = config_value('split.seed', default=0, type=int, doc='Seed for split noise.')

    merge_k = config_value(
        'merge.k', default=None, type=optional(int),
        doc='Kernels kept by a merge; by default the count the round started with.')
    merge_weight_variant = config_value(
        'merge.weight_variant', default='nearest_filter',
        type=choice('nearest_filter', 'centroid'),
        doc='Keep the member nearest each centroid, or the centroid itself.')
    merge_bias_variant = config_value(
        'merge.bias_variant', default=None, type=optional(choice('matched', 'cluster_mean')),
        doc='Override the bias rule paired with the weight variant.')
    merge_seed = config_value('merge.seed', default=0, type=int, doc='Seed for k-means.')
    merge_n_init = config_value(
        'merge.n_init', default=1, type=int, doc='k-means restarts; the best is kept.')

    output_dir = config_value(
        'output.dir', default='runs/dcck', type=str,
        doc='Directory receiving checkpoints, metrics.csv and events.jsonl.')
    metrics_timing = config_value(
        'metrics.timing', default=False, type=parse_bool,
        doc='Record forward-pass timings (makes metrics non-reproducible).')

    def __init__(self, values: typ.Optional[typ.Mapping[str, typ.Any]] = None,
                 lines: typ.Optional[typ.Mapping[str, int]] = None, path: str = '<defaults>'):
        self.values = dict(values or {})
        self.lines = dict(lines or {})
        self.path = path

    def override(self, **values) -> 'RunConfig':
        """A copy with ``values`` set, skipping ``None``. Keys use ``__`` for ``.``."""
        merged = dict(self.values)
        for name, value in values.items():
            if value is None:
                continue
            key = name.replace('__', '.')
            if key not in KEYS:
                raise ConfigError('Unknown setting', key=key)
            merged[key] = value
        return RunConfig(merged, self.lines, self.path)

    def __repr__(self):
        return '<RunConfig: {0}>'.format(self.path)


def parse_config(text: str, path: str = '<string>') -> RunConfig:
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ConfigError('Expected "key = value"', line=lineno)
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in KEYS:
            raise ConfigError('Unknown setting', key=key, line=lineno)
        if key in values:
            raise ConfigError('Setting repeated (first on line {0})'.format(lines[key]),
                              key=key, line=lineno)
        try:
            values[key] = KEYS[key].convert(value)
        except ValueError as e:
            raise ConfigError('Invalid value: {0}'.format(e), key=key, line=lineno) from None
        lines[key] = lineno
    return RunConfig(values, lines, path)


def load_config(path: typ.Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path) as f:
        return parse_config(f.read(), path)


def describe_keys(names: typ.Iterable[str]) -> str:
    """Help lines for every key named in ``names``, or whose section is."""
    names = tuple(names)
    return '\n'.join(
        entry.help_line() for entry in KEYS.values()
        if entry.section in names or entry.key in names)
