"""
The ``dcck`` subcommands. Each takes the parsed :class:`RunConfig` and the
command line namespace and returns the process exit status.
"""
import logging
import os
import typing as typ

from .config import RunConfig
from ..checkpoint import export_kernel_grid, load, save
from ..data import (
    DataSplits, LabeledDataset, load_mnist, split_train_validation, subset, synth_digits,
)
from ..errors import ConfigError
from ..models import build_model, NetworkModel, parse_input_shape
from ..surgery import merge_layer, MergeConfig, split_layer, SplitConfig
from ..training import (
    conv_kernel_summary, dcck_run, DcckSchedule, evaluate, OptimizerConfig, Recorder, Trainer,
)

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = 'model.ckpt'

#: Configuration read by each command, as sections or single keys.
COMMAND_KEYS = {
    'train': ('data', 'model', 'optim', 'train', 'dcck.delta2', 'dcck.minibatches',
              'dcck.patience', 'dcck.max_finetune_evals', 'output', 'metrics'),
    'split': ('split', 'dcck.max_kernels'),
    'merge': ('merge',),
    'dcck': ('data', 'model', 'optim', 'dcck', 'split', 'merge', 'output', 'metrics'),
    'eval': ('data',),
    'export-kernels': (),
}


def load_data(config: RunConfig) -> DataSplits:
    if config.data_source == 'mnist':
        train = load_mnist(config.data_root, 'train')
        test = load_mnist(config.data_root, 'test')
    else:
        train = synth_digits(config.data_synthetic_count, seed=config.data_seed)
        test = synth_digits(config.data_synthetic_test_count, seed=config.data_seed + 1)
    if config.data_subset:
        train = subset(train, config.data_subset, seed=config.data_seed)
    train, validation = split_train_validation(
        train, config.data_validation_fraction, seed=config.data_seed)
    logger.info('Loaded %s data: %d train, %d validation, %d test samples',
                config.data_source, len(train), len(validation), len(test))
    return DataSplits(train=train, validation=validation, test=test)


def make_model(config: RunConfig, data: DataSplits) -> NetworkModel:
    if config.model_input is None:
        input_shape = data.train.sample_shape
    else:
        input_shape = parse_input_shape(config.model_input)
    return build_model(input_shape, config.model_layers, seed=config.model_seed)


def make_optimizer(config: RunConfig) -> OptimizerConfig:
    return OptimizerConfig(
        lr=config.optim_lr,
        momentum=config.optim_momentum,
        weight_decay=config.optim_weight_decay,
        batch_size=config.optim_batch_size,
        seed=config.optim_seed,
        lr_drop_factor=config.optim_lr_drop_factor,
        max_lr_drops=config.optim_max_lr_drops,
    )


def make_split_config(config: RunConfig) -> SplitConfig:
    return SplitConfig(
        sigma_noise=config.split_sigma_noise,
        sigma_angle=config.split_sigma_angle,
        mode=config.split_mode,
        seed=config.split_seed,
    )


def make_merge_config(config: RunConfig) -> MergeConfig:
    return MergeConfig(
        k=config.merge_k,
        weight_variant=config.merge_weight_variant,
        bias_variant=config.merge_bias_variant,
        seed=config.merge_seed,
        n_init=config.merge_n_init,
    )


def make_schedule(config: RunConfig) -> DcckSchedule:
    return DcckSchedule(
        delta0=config.dcck_delta0,
        delta1=config.dcck_delta1,
        delta2=config.dcck_delta2,
        minibatches_per_eval=config.dcck_minibatches,
        split=make_split_config(config),
        merge=make_merge_config(config),
        target_layers=config.dcck_target_layers,
        order=config.dcck_order,
        max_outer_rounds=config.dcck_max_outer_rounds,
        patience=config.dcck_patience,
        max_split_rounds=config.dcck_max_split_rounds,
        max_kernels=config.dcck_max_kernels,
        max_finetune_evals=config.dcck_max_finetune_evals,
    )


def make_finetune_schedule(config: RunConfig) -> DcckSchedule:
    """The fine-tuning part of the schedule, from the keys ``train`` reads."""
    return DcckSchedule(
        delta2=config.dcck_delta2,
        minibatches_per_eval=config.dcck_minibatches,
        patience=config.dcck_patience,
        max_finetune_evals=config.dcck_max_finetune_evals,
    )


def _output_dir(config: RunConfig) -> str:
    os.makedirs(config.output_dir, exist_ok=True)
    return config.output_dir


def _report(**fields):
    print(' '.join('{0}={1}'.format(key, value) for key, value in fields.items()))


def cmd_train(config: RunConfig, args) -> int:
    data = load_data(config)
    model = make_model(config, data)
    directory = _output_dir(config)
    trainer = Trainer(model, data, optimizer=make_optimizer(config),
                      recorder=Recorder.in_directory(directory, fresh=True),
                      timing=config.metrics_timing)
    trainer.baseline()
    if config.train_epochs:
        trainer.train_epochs(config.train_epochs, patience=config.dcck_patience)
    else:
        trainer.finetune(make_finetune_schedule(config))
        trainer.record('finetune', with_test=True)
    path = os.path.join(directory, CHECKPOINT_NAME)
    save(model, path, state=trainer.sgd)
    final = trainer.history[-1]
    _report(validation_accuracy=final.validation_accuracy, test_error=final.test_error,
            parameters=model.parameter_count(), checkpoint=path)
    return 0


def cmd_split(config: RunConfig, args) -> int:
    cfg = make_split_config(config.override(
        split__mode=args.mode, split__sigma_noise=args.sigma_noise,
        split__sigma_angle=args.sigma_angle))
    model, _ = load(args.input)
    params_before = model.parameter_count()
    kernels_before = conv_kernel_summary(model)
    split_layer(model, args.layer, cfg, max_kernels=config.dcck_max_kernels)
    save(model, args.output)
    _report(layer=args.layer, kernels='{0}->{1}'.format(
        kernels_before, conv_kernel_summary(model)),
        parameters='{0}->{1}'.format(params_before, model.parameter_count()))
    return 0


def cmd_merge(config: RunConfig, args) -> int:
    cfg = make_merge_config(config.override(merge__k=args.k, merge__weight_variant=args.variant,
                                            merge__bias_variant=args.bias_variant))
    if cfg.k is None:
        raise ConfigError('A merge needs a target kernel count (--k)', key='merge.k')
    model, _ = load(args.input)
    params_before = model.parameter_count()
    kernels_before = conv_kernel_summary(model)
    _, outcome = merge_layer(model, args.layer, cfg)
    save(model, args.output)
    _report(layer=args.layer, kernels='{0}->{1}'.format(
        kernels_before, conv_kernel_summary(model)),
        parameters='{0}->{1}'.format(params_before, model.parameter_count()),
        distortion=repr(outcome.distortion))
    return 0


def cmd_dcck(config: RunConfig, args) -> int:
    data = load_data(config)
    if args.input:
        model, _ = load(args.input)
    else:
        model = make_model(config, data)
    directory = _output_dir(config)
    model, history = dcck_run(
        model, data, make_schedule(config), optimizer=make_optimizer(config),
        recorder=Recorder.in_directory(directory, fresh=True),
        timing=config.metrics_timing, pretrain=not args.input)
    path = os.path.join(directory, CHECKPOINT_NAME)
    save(model, path)
    final = history[-1] if history else None
    _report(validation_accuracy=final and final.validation_accuracy,
            test_error=final and final.test_error,
            kernels=conv_kernel_summary(model), parameters=model.parameter_count(),
            checkpoint=path)
    return 0


def _evaluation_part(data: DataSplits, part: str) -> LabeledDataset:
    dataset = getattr(data, part)
    if dataset is None:
        raise ConfigError('No {0} data configured'.format(part), key='data.source')
    return dataset


def cmd_eval(config: RunConfig, args) -> int:
    model, _ = load(args.input)
    dataset = _evaluation_part(load_data(config), args.part)
    accuracy, loss = evaluate(model, dataset)
    logger.info('%s accuracy %.4f on %d samples', args.part, accuracy, len(dataset))
    _report(part=args.part, samples=len(dataset), accuracy=repr(accuracy),
            error=repr(1.0 - accuracy), loss=repr(loss))
    return 0


def cmd_export_kernels(config: RunConfig, args) -> int:
    model, _ = load(args.input)
    mosaic = export_kernel_grid(model, args.layer, args.output)
    _report(layer=args.layer, width=mosaic.shape[1], height=mosaic.shape[0], image=args.output)
    return 0


COMMANDS = {
    'train': cmd_train,
    'split': cmd_split,
    'merge': cmd_merge,
    'dcck': cmd_dcck,
    'eval': cmd_eval,
    'export-kernels': cmd_export_kernels,
}  # type: typ.Dict[str, typ.Callable[[RunConfig, typ.Any], int]]
