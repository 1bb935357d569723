import typing as typ

import attr
import numpy as np

from ..errors import DatasetError
from ..tensor import DTYPE, Tensor


def _as_images(value) -> np.ndarray:
    images = np.ascontiguousarray(value, dtype=DTYPE)
    if images.ndim != 4 or min(images.shape) < 1:
        raise DatasetError('Images must be a non-empty [n x c x h x w] tensor, got {0}'.format(
            images.shape))
    return images


def _as_labels(value) -> np.ndarray:
    return np.ascontiguousarray(value, dtype=np.int64).reshape(-1)


@attr.s(eq=False, frozen=True)
class LabeledDataset(object):
    """
    Images scaled to ``[0, 1]`` with one integer label each.
    """

    images = attr.ib(converter=_as_images)
    labels = attr.ib(converter=_as_labels)
    class_count = attr.ib(converter=int)

    def __attrs_post_init__(self):
        if self.labels.shape[0] != self.images.shape[0]:
            raise DatasetError('{0} images but {1} labels'.format(
                self.images.shape[0], self.labels.shape[0]))
        if self.class_count < 1:
            raise DatasetError('class_count must be positive')
        if self.labels.min() < 0 or self.labels.max() >= self.class_count:
            raise DatasetError('Labels must lie in [0, {0})'.format(self.class_count))

    def __len__(self):
        return self.images.shape[0]

    @property
    def sample_shape(self) -> typ.Tuple[int, int, int]:
        return tuple(self.images.shape[1:])

    def take(self, indices) -> 'LabeledDataset':
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size == 0:
            raise DatasetError('Cannot take an empty subset')
        return LabeledDataset(
            images=self.images[indices], labels=self.labels[indices],
            class_count=self.class_count)


def permutation(n: int, seed: int, epoch: int = 0) -> np.ndarray:
    """The shuffle order for ``epoch``; a pure function of its arguments."""
    return np.random.default_rng([seed, epoch]).permutation(n)


class BatchIterator(object):
    """
    Endless minibatches over a dataset, reshuffled every epoch.

    Every epoch visits each sample exactly once; the last batch of an epoch
    may be short.
    """

    def __init__(self, dataset: LabeledDataset, batch_size: int, seed: int = 0):
        if batch_size < 1:
            raise DatasetError('batch_size must be positive, got {0}'.format(batch_size))
        self.dataset = dataset
        self.batch_size = batch_size
        self.seed = seed
        self.epoch = 0
        self._order = permutation(len(dataset), seed, 0)
        self._position = 0

    @property
    def batches_per_epoch(self) -> int:
        return -(-len(self.dataset) // self.batch_size)

    def __iter__(self):
        return self

    def __next__(self) -> typ.Tuple[Tensor, np.ndarray]:
        if self._position >= len(self.dataset):
            self.epoch += 1
            self._order = permutation(len(self.dataset), self.seed, self.epoch)
            self._position = 0
        indices = self._order[self._position:self._position + self.batch_size]
        self._position += indices.shape[0]
        return self.dataset.images[indices], self.dataset.labels[indices]

    def take(self, count: int) -> typ.Iterator[typ.Tuple[Tensor, np.ndarray]]:
        for _ in range(count):
            yield next(self)


def iterate_in_order(dataset: LabeledDataset,
                     batch_size: int) -> typ.Iterator[typ.Tuple[Tensor, np.ndarray]]:
    for start in range(0, len(dataset), batch_size):
        yield (dataset.images[start:start + batch_size],
               dataset.labels[start:start + batch_size])


def split_train_validation(dataset: LabeledDataset, fraction: float,
                           seed: int) -> typ.Tuple[LabeledDataset, LabeledDataset]:
    """
    Hold out ``fraction`` of ``dataset`` as a validation set. The two parts
    are disjoint and together cover every sample.
    """
    if not 0 < fraction < 1:
        raise DatasetError('Validation fraction must lie in (0, 1), got {0}'.format(fraction))
    n = len(dataset)
    held_out = int(round(n * fraction))
    if held_out < 1 or held_out >= n:
        raise DatasetError('A fraction of {0} leaves an empty side of {1} samples'.format(
            fraction, n))
    order = permutation(n, seed)
    return dataset.take(np.sort(order[held_out:])), dataset.take(np.sort(order[:held_out]))


def subset(dataset: LabeledDataset, count: int, seed: int) -> LabeledDataset:
    if not 1 <= count <= len(dataset):
        raise DatasetError('Cannot take {0} samples out of {1}'.format(count, len(dataset)))
    return dataset.take(np.sort(permutation(len(dataset), seed)[:count]))


@attr.s(eq=False, frozen=True)
class DataSplits(object):
    """Training, validation and optional test data for one run."""

    train = attr.ib()
    validation = attr.ib()
    test = attr.ib(default=None)
