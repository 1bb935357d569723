"""
The split / fine-tune / merge / fine-tune outer loop.
"""
import logging
import typing as typ

import attr

from .metrics import MetricsRecord, Recorder
from .schedule import DcckSchedule, OptimizerConfig, ScheduleOrder
from .trainer import Trainer
from ..data import DataSplits
from ..errors import (
    ClusteringError, DcckException, ModelValidationError, SurgeryError, TrainingError,
)
from ..models import NetworkModel
from ..surgery import locate, merge_layer, split_layer

logger = logging.getLogger(__name__)

_SURGERY_ERRORS = (SurgeryError, ClusteringError, ModelValidationError)


class DcckRun(object):
    """
    State of one :func:`dcck_run`: the trainer plus surgery bookkeeping.

    Every split and merge gets its own seed, derived from the configured one
    and a running event counter, so repeated surgeries differ but a rerun is
    identical.
    """

    def __init__(self, trainer: Trainer, schedule: DcckSchedule):
        self.trainer = trainer
        self.schedule = schedule
        self.model = trainer.model
        self.surgeries = 0

    def kernel_counts(self) -> typ.Dict[int, int]:
        return {
            idx: self.model.layers[idx].params.kernel_count
            for idx in self.schedule.target_layers
        }

    def _event(self, kind: str, round_: int, layer: int, kernels_before: int,
               params_before: int, **extra):
        self.trainer.reset_momentum()
        self.trainer.validate()
        self.trainer.record(kind, layer=layer)
        self.trainer.recorder.event(
            event=kind,
            round=round_,
            layer=layer,
            step=self.trainer.sgd.step,
            kernels_before=kernels_before,
            kernels_after=self.model.layers[layer].params.kernel_count,
            params_before=params_before,
            params_after=self.model.parameter_count(),
            validation_accuracy=self.trainer.last_accuracy,
            **extra)

    def _surgery(self, phase: str, round_: int, layer: int, operation):
        kernels_before = self.model.layers[layer].params.kernel_count
        params_before = self.model.parameter_count()
        seed_offset = self.surgeries
        self.surgeries += 1
        try:
            extra = operation(seed_offset) or {}
        except _SURGERY_ERRORS as e:
            raise TrainingError('Round {0}, {1} of layer {2} failed: {3}'.format(
                round_, phase, layer, e)) from e
        self._event(phase, round_, layer, kernels_before, params_before, **extra)

    def split_loop(self, round_: int):
        schedule = self.schedule
        best = self.trainer.last_accuracy
        failures = 0
        for _ in range(schedule.max_split_rounds):
            counts = self.kernel_counts()
            if schedule.max_kernels is not None and any(
                    count * schedule.split.mode.factor > schedule.max_kernels
                    for count in counts.values()):
                logger.info('Split skipped: kernel cap %d reached', schedule.max_kernels)
                break
            for layer in schedule.target_layers:
                def operation(offset, layer=layer):
                    cfg = attr.evolve(schedule.split, seed=schedule.split.seed + offset)
                    split_layer(self.model, layer, cfg, max_kernels=schedule.max_kernels)
                self._surgery('split', round_, layer, operation)
            self.trainer.finetune(schedule)
            accuracy = self.trainer.last_accuracy
            if accuracy - best > schedule.delta1:
                failures = 0
            else:
                failures += 1
            best = max(best, accuracy)
            if failures >= schedule.patience:
                break

    def merge_block(self, round_: int, round_start: typ.Dict[int, int]):
        schedule = self.schedule
        for layer in schedule.target_layers:
            k = schedule.merge.k if schedule.merge.k is not None else round_start[layer]

            def operation(offset, layer=layer, k=k):
                cfg = attr.evolve(schedule.merge, k=k, seed=schedule.merge.seed + offset)
                _, outcome = merge_layer(self.model, layer, cfg)
                return {'distortion': outcome.distortion}
            self._surgery('merge', round_, layer, operation)
        self.trainer.finetune(schedule)

    def run(self, pretrain: bool = False) -> typ.List[MetricsRecord]:
        schedule = self.schedule
        if schedule.max_outer_rounds == 0:
            return self.trainer.history
        if schedule.order is ScheduleOrder.MERGE_FIRST and schedule.merge.k is None:
            raise TrainingError('Merge-first schedules need an explicit merge target k')
        for layer in schedule.target_layers:
            try:
                locate(self.model, layer)
            except SurgeryError as e:
                raise TrainingError('Invalid target layer {0}: {1}'.format(layer, e)) from e

        best = self.trainer.baseline()
        if pretrain:
            self.trainer.finetune(schedule)
            best = self.trainer.last_accuracy
        failures = 0
        for round_ in range(schedule.max_outer_rounds):
            round_start = self.kernel_counts()
            logger.info('DCCK round %d (%s), kernels %s', round_, schedule.order.value,
                        round_start)
            if schedule.order is ScheduleOrder.SPLIT_FIRST:
                self.split_loop(round_)
                self.merge_block(round_, round_start)
            else:
                self.merge_block(round_, round_start)
                self.split_loop(round_)
            accuracy = self.trainer.last_accuracy
            if accuracy - best > schedule.delta0:
                failures = 0
            else:
                failures += 1
            best = max(best, accuracy)
            if failures >= schedule.patience:
                break
        self.trainer.record('finetune', with_test=True)
        return self.trainer.history


def dcck_run(model: NetworkModel, data: DataSplits, schedule: DcckSchedule,
             optimizer: typ.Optional[OptimizerConfig] = None,
             recorder: typ.Optional[Recorder] = None,
             timing: bool = False, pretrain: bool = False,
             ) -> typ.Tuple[NetworkModel, typ.List[MetricsRecord]]:
    """
    Grow and shrink the kernels of ``schedule.target_layers`` while training.

    Each outer round runs a split loop (split every target, fine-tune,
    repeat while validation accuracy improves by more than ``delta1``) and
    a merge block (merge every target, fine-tune). ``merge_first`` runs the
    merge block before the split loop. Rounds repeat while accuracy improves
    by more than ``delta0``, up to ``max_outer_rounds``. With ``pretrain``
    the model is first trained until validation accuracy tops out.

    The model is trained in place and returned with the run history.
    """
    trainer = Trainer(model, data, optimizer=optimizer, recorder=recorder, timing=timing)
    try:
        history = DcckRun(trainer, schedule).run(pretrain=pretrain)
    except TrainingError:
        raise
    except DcckException as e:
        raise TrainingError('DCCK run failed: {0}'.format(e)) from e
    return model, history
