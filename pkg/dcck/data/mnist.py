"""
IDX files as published for MNIST.

All integers are big-endian. An IDX file starts with a magic number whose
low byte is the dimension count (``0x00000803`` for images,
``0x00000801`` for labels), followed by one 32-bit extent per dimension
and the raw unsigned bytes.
"""
import gzip
import logging
import os
import struct
import typing as typ

import numpy as np

from .dataset import LabeledDataset
from ..errors import DatasetError, IdxFormatError

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
MNIST_CLASSES = 10

DATA_DIR_ENV = 'DCCK_DATA_DIR'

MNIST_FILES = {
    'train': ('train-images-idx3-ubyte', 'train-labels-idx1-ubyte'),
    'test': ('t10k-images-idx3-ubyte', 't10k-labels-idx1-ubyte'),
}


def _open(path: str):
    if str(path).endswith('.gz'):
        return gzip.open(path, 'rb')
    return open(path, 'rb')


def read_idx(path: str, expected_magic: int) -> np.ndarray:
    """
    .. raises::
        IdxFormatError: On a wrong magic number or a truncated file.
    """
    with _open(path) as f:
        raw = f.read()
    if len(raw) < 4:
        raise IdxFormatError('{0}: truncated header'.format(path))
    magic, = struct.unpack('>I', raw[:4])
    if magic != expected_magic:
        raise IdxFormatError('{0}: magic number 0x{1:08x}, expected 0x{2:08x}'.format(
            path, magic, expected_magic))
    ndim = magic & 0xff
    header_size = 4 + 4 * ndim
    if len(raw) < header_size:
        raise IdxFormatError('{0}: truncated header'.format(path))
    shape = struct.unpack('>{0}I'.format(ndim), raw[4:header_size])
    count = int(np.prod(shape))
    payload = raw[header_size:]
    if len(payload) < count:
        raise IdxFormatError('{0}: expected {1} bytes of data, found {2}'.format(
            path, count, len(payload)))
    return np.frombuffer(payload, dtype=np.uint8, count=count).reshape(shape)


def write_idx(path: str, data: np.ndarray):
    data = np.ascontiguousarray(data, dtype=np.uint8)
    magic = 0x00000800 | data.ndim
    with open(path, 'wb') as f:
        f.write(struct.pack('>I', magic))
        f.write(struct.pack('>{0}I'.format(data.ndim), *data.shape))
        f.write(data.tobytes())


def load_mnist_idx(images_path: str, labels_path: str) -> LabeledDataset:
    """
    Load an image/label IDX pair; pixel byte ``v`` becomes ``v / 255``.
    """
    images = read_idx(images_path, IMAGES_MAGIC)
    labels = read_idx(labels_path, LABELS_MAGIC)
    if images.shape[0] != labels.shape[0]:
        raise IdxFormatError('{0} images in {1} but {2} labels in {3}'.format(
            images.shape[0], images_path, labels.shape[0], labels_path))
    logger.info('Loaded %d images of %dx%d from %s', *images.shape, images_path)
    return LabeledDataset(
        images=(images.astype(np.float32) / 255.0)[:, None, :, :],
        labels=labels,
        class_count=MNIST_CLASSES,
    )


def write_dataset_idx(dataset: LabeledDataset, images_path: str, labels_path: str):
    """Write a single-channel dataset back to IDX, rounding pixels to bytes."""
    if dataset.images.shape[1] != 1:
        raise DatasetError('IDX image files hold single-channel images only')
    write_idx(images_path, np.rint(dataset.images[:, 0] * 255.0))
    write_idx(labels_path, dataset.labels)


def data_root(root: typ.Optional[str] = None) -> str:
    root = root or os.environ.get(DATA_DIR_ENV)
    if not root:
        raise DatasetError('No dataset directory configured; set {0}'.format(DATA_DIR_ENV))
    return root


def mnist_paths(root: typ.Optional[str] = None, part: str = 'train') -> typ.Tuple[str, str]:
    """
    The image and label file paths of ``part`` under ``root``, accepting
    both the plain and the gzipped file names.
    """
    root = data_root(root)
    paths = []
    for name in MNIST_FILES[part]:
        for candidate in (name, name + '.gz'):
            path = os.path.join(root, candidate)
            if os.path.exists(path):
                paths.append(path)
                break
        else:
            raise DatasetError('{0} not found under {1}'.format(name, root))
    return tuple(paths)


def load_mnist(root: typ.Optional[str] = None, part: str = 'train') -> LabeledDataset:
    return load_mnist_idx(*mnist_paths(root, part))
