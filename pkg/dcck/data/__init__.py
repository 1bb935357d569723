from .dataset import (
    BatchIterator, DataSplits, iterate_in_order, LabeledDataset, permutation,
    split_train_validation, subset,
)
from .mnist import (
    DATA_DIR_ENV, load_mnist, load_mnist_idx, mnist_paths, read_idx, write_dataset_idx, write_idx,
)
from .synthetic import synth_digits

__all__ = (
    'BatchIterator', 'DataSplits', 'iterate_in_order', 'LabeledDataset', 'permutation',
    'split_train_validation', 'subset',
    'DATA_DIR_ENV', 'load_mnist', 'load_mnist_idx', 'mnist_paths', 'read_idx',
    'write_dataset_idx', 'write_idx',
    'synth_digits',
)
