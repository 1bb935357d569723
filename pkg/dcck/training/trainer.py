import logging
import math
import typing as typ

import numpy as np

from .metrics import MetricsRecord, Recorder
from .schedule import DcckSchedule, OptimizerConfig
from ..data import BatchIterator, DataSplits, iterate_in_order, LabeledDataset
from ..errors import DatasetError, TrainingError
from ..layers import softmax_xent_forward
from ..models import ensure_valid, NetworkModel
from ..optim import sgd_step, SgdState
from ..utils.timing import measure_forward_ms

logger = logging.getLogger(__name__)

EVAL_BATCH = 500


def evaluate(model: NetworkModel, dataset: LabeledDataset,
             batch_size: int = EVAL_BATCH) -> typ.Tuple[float, float]:
    """
    ``(accuracy, mean loss)`` of ``model`` on ``dataset``, where accuracy is
    the fraction of samples whose arg-max logit is the label.
    """
    if len(dataset) == 0:
        raise DatasetError('Cannot evaluate on an empty dataset')
    correct = 0
    total_loss = 0.0
    for images, labels in iterate_in_order(dataset, batch_size):
        logits = model.forward(images)
        loss, _ = softmax_xent_forward(logits, labels)
        total_loss += loss * labels.shape[0]
        correct += int((logits.argmax(axis=1) == labels).sum())
    model.clear_caches()
    return correct / len(dataset), total_loss / len(dataset)


def conv_kernel_summary(model: NetworkModel) -> str:
    return '/'.join(
        str(model.layers[idx].params.kernel_count) for idx in model.conv_layer_indices())


def _restore_parameters(model: NetworkModel, snapshot: NetworkModel):
    for layer, saved in zip(model.layers, snapshot.layers):
        if layer.has_params:
            layer.params = saved.copy().params


class Trainer(object):
    """
    Owns a model during training: the minibatch stream, the momentum
    buffers, the step counter and the run history.
    """

    def __init__(self, model: NetworkModel, data: DataSplits,
                 optimizer: typ.Optional[OptimizerConfig] = None,
                 recorder: typ.Optional[Recorder] = None, timing: bool = False):
        ensure_valid(model)
        if len(data.train) == 0 or len(data.validation) == 0:
            raise DatasetError('Training and validation data must be non-empty')
        self.model = model
        self.data = data
        self.optimizer = optimizer or OptimizerConfig()
        self.recorder = recorder or Recorder()
        self.timing = timing
        self.batches = BatchIterator(data.train, self.optimizer.batch_size, self.optimizer.seed)
        self.sgd = SgdState()
        self.lr = self.optimizer.lr
        self.last_accuracy = None

    @property
    def history(self) -> typ.List[MetricsRecord]:
        return self.recorder.history

    def reset_momentum(self):
        self.sgd = SgdState(step=self.sgd.step)

    def run_sgd(self, minibatches: int) -> float:
        """Take ``minibatches`` SGD steps; returns the mean training loss."""
        losses = []
        for images, labels in self.batches.take(minibatches):
            loss, _, grads = self.model.loss_and_gradients(images, labels)
            if not math.isfinite(loss):
                raise TrainingError('Training loss diverged at step {0}'.format(self.sgd.step))
            sgd_step(self.model, grads, lr=self.lr, momentum=self.optimizer.momentum,
                     weight_decay=self.optimizer.weight_decay, state=self.sgd)
            losses.append(loss)
        self.model.clear_caches()
        return float(np.mean(losses))

    def validate(self) -> float:
        self.last_accuracy, _ = evaluate(self.model, self.data.validation)
        return self.last_accuracy

    def test_error(self) -> typ.Optional[float]:
        if self.data.test is None:
            return None
        accuracy, _ = evaluate(self.model, self.data.test)
        return 1.0 - accuracy

    def forward_ms(self) -> typ.Optional[float]:
        if not self.timing:
            return None
        return measure_forward_ms(self.model, self.data.validation.images)

    def record(self, event: str, *, layer=None, train_loss=None, with_test=False):
        return self.recorder.record(MetricsRecord(
            step=self.sgd.step,
            epoch=self.batches.epoch,
            event=event,
            layer=layer,
            conv_kernels=conv_kernel_summary(self.model),
            train_loss=train_loss,
            validation_accuracy=self.last_accuracy,
            test_error=self.test_error() if with_test else None,
            parameter_count=self.model.parameter_count(),
            forward_ms=self.forward_ms() if event != 'finetune' else None,
        ))

    def baseline(self) -> float:
        accuracy = self.validate()
        self.record('baseline', with_test=True)
        logger.info('Baseline validation accuracy %.4f, %d parameters',
                    accuracy, self.model.parameter_count())
        return accuracy

    def finetune(self, schedule: DcckSchedule, delta: typ.Optional[float] = None,
                 ) -> typ.List[MetricsRecord]:
        """
        Alternate bursts of ``schedule.minibatches_per_eval`` SGD steps with
        validation. Exits once ``schedule.patience`` consecutive bursts fail
        to improve on the best accuracy by more than ``delta`` (by default
        ``schedule.delta2``); an infinite ``delta`` exits after one burst.
        The best-accuracy parameters are restored on exit.
        """
        delta = schedule.delta2 if delta is None else delta
        start = len(self.history)
        best_accuracy = self.validate() if self.last_accuracy is None else self.last_accuracy
        best = self.model.clone()
        failures = drops = evaluations = 0
        while True:
            loss = self.run_sgd(schedule.minibatches_per_eval)
            accuracy = self.validate()
            evaluations += 1
            self.record('finetune', train_loss=loss)
            logger.debug('Step %d: loss %.5f, validation accuracy %.4f',
                         self.sgd.step, loss, accuracy)
            if accuracy - best_accuracy > delta:
                failures = 0
            else:
                failures += 1
            if accuracy > best_accuracy:
                best_accuracy = accuracy
                best = self.model.clone()

            if math.isinf(delta) or evaluations >= schedule.max_finetune_evals:
                break
            if failures >= schedule.patience:
                if drops >= self.optimizer.max_lr_drops:
                    break
                drops += 1
                failures = 0
                self.lr *= self.optimizer.lr_drop_factor
                logger.info('Validation accuracy plateaued; learning rate now %g', self.lr)

        if best_accuracy > self.last_accuracy:
            _restore_parameters(self.model, best)
            self.reset_momentum()
            self.last_accuracy = best_accuracy
            self.record('restore')
        logger.info('Fine-tuned for %d evaluations; validation accuracy %.4f',
                    evaluations, self.last_accuracy)
        return self.history[start:]

    def train_epochs(self, epochs: int, patience: int = 3) -> typ.List[MetricsRecord]:
        """
        Train for a fixed number of epochs, validating after each and
        dropping the learning rate when accuracy stops improving for
        ``patience`` epochs.
        """
        start = len(self.history)
        best_accuracy = -1.0
        stale = 0
        for _ in range(epochs):
            loss = self.run_sgd(self.batches.batches_per_epoch)
            accuracy = self.validate()
            if accuracy > best_accuracy:
                best_accuracy, stale = accuracy, 0
            else:
                stale += 1
            if stale >= patience:
                self.lr *= self.optimizer.lr_drop_factor
                stale = 0
                logger.info('Validation accuracy plateaued; learning rate now %g', self.lr)
            self.record('epoch', train_loss=loss, with_test=True)
        return self.history[start:]


def finetune(model: NetworkModel, data: DataSplits, schedule: DcckSchedule,
             optimizer: typ.Optional[OptimizerConfig] = None,
             recorder: typ.Optional[Recorder] = None) -> typ.List[MetricsRecord]:
    """Fine-tune ``model`` in place; see :meth:`Trainer.finetune`."""
    trainer = Trainer(model, data, optimizer=optimizer, recorder=recorder)
    trainer.baseline()
    trainer.finetune(schedule)
    trainer.record('finetune', with_test=True)
    return trainer.history
