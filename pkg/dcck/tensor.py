"""
Dense real-valued tensors.

A tensor is a C-ordered :class:`numpy.ndarray` with at least one dimension
and no zero extents. Parameters and activations are stored as ``DTYPE``;
reductions accumulate in ``ACCUMULATOR_DTYPE`` and are cast back.
"""
import typing as typ

import numpy as np

from .errors import DimensionError

DTYPE = np.float32
ACCUMULATOR_DTYPE = np.float64

Tensor = np.ndarray
Shape = typ.Tuple[int, ...]


def as_tensor(data, *, dtype=None, shape: typ.Optional[Shape] = None) -> Tensor:
    """
    Build a tensor from ``data``, optionally reshaping it to ``shape``.

    The result is always a fresh row-major array; ``data`` is never aliased.
    """
    array = np.array(data, dtype=DTYPE if dtype is None else dtype, order='C', copy=True)
    if shape is not None:
        array = reshape(array, shape)
    if array.ndim == 0:
        raise DimensionError('A tensor needs at least one dimension')
    if any(extent < 1 for extent in array.shape):
        raise DimensionError('Tensor extents must be positive, got {0}'.format(array.shape))
    return array


def result_dtype(*tensors: Tensor):
    return np.result_type(*(t.dtype for t in tensors))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Matrix product of a ``[m x k]`` and a ``[k x n]`` tensor.

    Accumulation happens in ``ACCUMULATOR_DTYPE``; the result has the
    promoted dtype of the operands.
    """
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(
            'matmul expects rank-2 operands, got {0} and {1}'.format(a.shape, b.shape))
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            'matmul inner extents differ: {0} x {1}'.format(a.shape, b.shape))
    out = np.matmul(a.astype(ACCUMULATOR_DTYPE, copy=False),
                    b.astype(ACCUMULATOR_DTYPE, copy=False))
    return out.astype(result_dtype(a, b), copy=False)


def reshape(t: Tensor, shape: Shape) -> Tensor:
    shape = tuple(int(extent) for extent in shape)
    if any(extent < 1 for extent in shape):
        raise DimensionError('Tensor extents must be positive, got {0}'.format(shape))
    if int(np.prod(shape)) != t.size:
        raise DimensionError('Cannot reshape {0} into {1}'.format(t.shape, shape))
    return np.ascontiguousarray(t).reshape(shape)


def _check_axis(t: Tensor, axis: int) -> int:
    if not -t.ndim <= axis < t.ndim:
        raise DimensionError('Axis {0} out of range for shape {1}'.format(axis, t.shape))
    return axis % t.ndim


def slice_along_axis(t: Tensor, start: int, stop: int, axis: int) -> Tensor:
    axis = _check_axis(t, axis)
    if not 0 <= start < stop <= t.shape[axis]:
        raise DimensionError(
            'Slice [{0}:{1}] out of range for extent {2} on axis {3}'.format(
                start, stop, t.shape[axis], axis))
    index = [slice(None)] * t.ndim
    index[axis] = slice(start, stop)
    return np.ascontiguousarray(t[tuple(index)])


def slice_channels(t: Tensor, start: int, stop: int) -> Tensor:
    """
    Channels ``[start, stop)`` of an ``[B x C x ...]`` activation tensor, or
    kernels ``[start, stop)`` of an ``[N x ...]`` weight tensor when
    ``t`` has no batch axis.
    """
    return slice_along_axis(t, start, stop, axis=1 if t.ndim == 4 else 0)


def concat_along_axis(tensors: typ.Sequence[Tensor], axis: int) -> Tensor:
    if not tensors:
        raise DimensionError('Nothing to concatenate')
    first = tensors[0]
    axis = _check_axis(first, axis)
    for idx, t in enumerate(tensors[1:], start=1):
        if t.ndim != first.ndim:
            raise DimensionError(
                'Rank mismatch at input {0}: {1} vs {2}'.format(idx, t.shape, first.shape))
        for dim, (lhs, rhs) in enumerate(zip(first.shape, t.shape)):
            if dim != axis and lhs != rhs:
                raise DimensionError(
                    'Extent mismatch on axis {0} at input {1}: {2} vs {3}'.format(
                        dim, idx, t.shape, first.shape))
    return np.concatenate(tensors, axis=axis)
