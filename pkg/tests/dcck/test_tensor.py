import numpy as np
import pytest

import dcck.errors as d_errors
import dcck.tensor as d_tensor


def test_as_tensor_copies_and_casts():
    source = np.arange(6, dtype=np.int64)
    t = d_tensor.as_tensor(source, shape=(2, 3))
    assert t.dtype == d_tensor.DTYPE
    assert t.shape == (2, 3)
    assert t.flags['C_CONTIGUOUS']
    t[0, 0] = 42
    assert source[0] == 0


@pytest.mark.parametrize('data', [3.0, np.zeros((2, 0))])
def test_as_tensor_rejects_degenerate_shapes(data):
    with pytest.raises(d_errors.DimensionError):
        d_tensor.as_tensor(data)


def test_matmul_promotes_and_accumulates():
    a = np.array([[1e8, 1.0, -1e8]], dtype=np.float32)
    b = np.ones((3, 1), dtype=np.float32)
    assert d_tensor.matmul(a, b).dtype == np.float32
    assert d_tensor.matmul(a, b.astype(np.float64)).dtype == np.float64
    assert d_tensor.matmul(a, b)[0, 0] == 1.0


def test_matmul_small_examples():
    a = np.array([[1, 2], [3, 4]], dtype=np.float32)
    b = np.array([[5, 6], [7, 8]], dtype=np.float32)
    np.testing.assert_array_equal(d_tensor.matmul(a, b), [[19, 22], [43, 50]])
    np.testing.assert_array_equal(d_tensor.matmul(np.eye(2, dtype=np.float32), b), b)
    np.testing.assert_array_equal(d_tensor.matmul(a, np.zeros((2, 3), dtype=np.float32)),
                                  np.zeros((2, 3)))


@pytest.mark.parametrize('dtype,rtol', [(np.float64, 1e-10), (np.float32, 1e-4)])
@pytest.mark.parametrize('seed', [0, 1, 2])
def test_matmul_is_associative(dtype, rtol, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.standard_normal(shape).astype(dtype)
               for shape in ((4, 7), (7, 5), (5, 3)))
    left = d_tensor.matmul(d_tensor.matmul(a, b), c)
    right = d_tensor.matmul(a, d_tensor.matmul(b, c))
    assert left.dtype == dtype
    np.testing.assert_allclose(left, right, rtol=rtol, atol=rtol)


def test_matmul_inner_mismatch():
    with pytest.raises(d_errors.DimensionError, match='inner extents'):
        d_tensor.matmul(np.zeros((2, 3)), np.zeros((2, 3)))


def test_reshape_keeps_element_count():
    t = d_tensor.reshape(np.arange(12.0), (3, 4))
    assert t.shape == (3, 4)
    with pytest.raises(d_errors.DimensionError):
        d_tensor.reshape(t, (5, 3))


def test_reshape_round_trip(rng):
    t = rng.random((2, 3, 4)).astype(np.float32)
    back = d_tensor.reshape(d_tensor.reshape(t, (6, 4)), t.shape)
    np.testing.assert_array_equal(back, t)
    np.testing.assert_array_equal(d_tensor.reshape(t, (24,)), t.ravel())


def test_slice_channels_uses_channel_axis_for_activations():
    batch = np.arange(2 * 5 * 2 * 2).reshape(2, 5, 2, 2)
    sliced = d_tensor.slice_channels(batch, 1, 3)
    assert sliced.shape == (2, 2, 2, 2)
    np.testing.assert_array_equal(sliced, batch[:, 1:3])

    weights = np.arange(5 * 3 * 2 * 2).reshape(5, 3, 2, 2)[..., 0]
    np.testing.assert_array_equal(d_tensor.slice_channels(weights, 4, 5), weights[4:5])


@pytest.mark.parametrize('start,stop', [(2, 2), (-1, 2), (0, 6)])
def test_slice_channels_out_of_range(start, stop):
    with pytest.raises(d_errors.DimensionError):
        d_tensor.slice_channels(np.zeros((1, 5, 2, 2)), start, stop)


def test_concat_along_axis():
    a = np.zeros((2, 3))
    b = np.ones((2, 1))
    out = d_tensor.concat_along_axis([a, b], axis=1)
    assert out.shape == (2, 4)
    np.testing.assert_array_equal(out[:, 3], 1)


@pytest.mark.parametrize('axis', [0, 1, 3])
def test_concat_then_slice_recovers_inputs(rng, axis):
    extents = (2, 1, 3)
    parts = []
    for extent in extents:
        shape = [2, 3, 2, 2]
        shape[axis] = extent
        parts.append(rng.random(shape).astype(np.float32))
    joined = d_tensor.concat_along_axis(parts, axis=axis)
    assert joined.shape[axis] == sum(extents)
    start = 0
    for part in parts:
        stop = start + part.shape[axis]
        np.testing.assert_array_equal(
            d_tensor.slice_along_axis(joined, start, stop, axis=axis), part)
        start = stop


def test_concat_extent_mismatch():
    with pytest.raises(d_errors.DimensionError, match='Extent mismatch'):
        d_tensor.concat_along_axis([np.zeros((2, 3)), np.zeros((3, 3))], axis=1)
    with pytest.raises(d_errors.DimensionError):
        d_tensor.concat_along_axis([], axis=0)
