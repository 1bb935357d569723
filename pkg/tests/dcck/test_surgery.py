import math

import numpy as np
import pytest

import dcck.errors as d_errors
import dcck.models as d_models
import dcck.optim as d_optim
import dcck.surgery as d_surgery
from tests.conftest import TINY_INPUT_SHAPE


@pytest.fixture()
def batch(rng):
    return rng.random((6,) + TINY_INPUT_SHAPE).astype(np.float32)


@pytest.fixture()
def trained_like(tiny_model, rng):
    """The tiny model with non-trivial biases, so dropped channels would show."""
    for idx in tiny_model.parameterized_indices():
        params = tiny_model.layers[idx].params
        params.weights[...] = rng.normal(0.0, 0.5, size=params.weights.shape)
        params.biases[...] = rng.normal(0.0, 0.1, size=params.biases.shape)
    return tiny_model


# Rotation

def test_rotation_by_zero_is_a_copy():
    kernel = np.arange(9.0).reshape(1, 3, 3)
    rotated = d_surgery.rotate_kernel(kernel, 0.0)
    np.testing.assert_array_equal(rotated, kernel)
    assert rotated is not kernel


def test_quarter_turn_is_counter_clockwise():
    kernel = np.arange(18.0).reshape(2, 3, 3)
    rotated = d_surgery.rotate_kernel(kernel, math.pi / 2)
    np.testing.assert_allclose(rotated, np.rot90(kernel, axes=(1, 2)), atol=1e-9)


def test_half_turn():
    kernel = np.arange(25.0).reshape(1, 5, 5)
    rotated = d_surgery.rotate_kernel(kernel, math.pi)
    np.testing.assert_allclose(rotated, kernel[:, ::-1, ::-1], atol=1e-9)


def test_small_rotation_keeps_centre_and_interpolates():
    kernel = np.zeros((1, 5, 5))
    kernel[0, 2, 2] = 1.0
    rotated = d_surgery.rotate_kernel(kernel, 0.3)
    assert rotated[0, 2, 2] == pytest.approx(1.0)
    assert rotated.dtype == kernel.dtype


def test_corners_fall_off_the_grid():
    kernel = np.ones((1, 3, 3))
    rotated = d_surgery.rotate_kernel(kernel, math.pi / 4)
    assert rotated[0, 0, 0] < 1.0
    assert rotated[0, 1, 1] == pytest.approx(1.0)


def test_rotation_needs_square_channels():
    with pytest.raises(d_errors.DimensionError):
        d_surgery.rotate_kernel(np.zeros((1, 3, 2)), 0.1)


# Split

def test_noise_split_without_noise_preserves_outputs(trained_like, batch):
    before = trained_like.forward(batch)
    d_surgery.split_layer(trained_like, 0, d_surgery.SplitConfig(sigma_noise=0.0, mode='noise'))
    assert trained_like.layers[0].params.kernel_count == 16
    assert trained_like.layers[3].params.in_channels == 16
    np.testing.assert_allclose(trained_like.forward(batch), before, rtol=1e-5, atol=1e-5)


def test_noise_split_of_dense_feeding_layer_preserves_outputs(trained_like, batch):
    before = trained_like.forward(batch)
    d_surgery.split_layer(trained_like, 3, d_surgery.SplitConfig(sigma_noise=0.0, mode='noise'))
    assert trained_like.layers[3].params.kernel_count == 16
    assert trained_like.layers[7].params.in_features == 64
    np.testing.assert_allclose(trained_like.forward(batch), before, rtol=1e-5, atol=1e-5)


@pytest.mark.parametrize('layer', [0, 3])
def test_rotation_split_leaves_outputs_bit_identical(trained_like, batch, layer):
    before = trained_like.forward(batch)
    d_surgery.split_layer(
        trained_like, layer, d_surgery.SplitConfig(sigma_angle=0.3, mode='rotate', seed=2))
    np.testing.assert_array_equal(trained_like.forward(batch), before)


def test_default_noise_split_clones_diverge_under_training(tiny_model, rng):
    d_surgery.split_layer(tiny_model, 0, d_surgery.SplitConfig(mode='noise', seed=4))
    x = rng.random((8,) + TINY_INPUT_SHAPE).astype(np.float32)
    labels = np.arange(8) % 4
    state = None
    for _ in range(5):
        _, _, grads = tiny_model.loss_and_gradients(x, labels)
        state = d_optim.sgd_step(tiny_model, grads, lr=0.05, state=state)
    weights = tiny_model.layers[0].params.weights
    incoming = tiny_model.layers[3].params.weights
    assert np.abs(weights[8:] - weights[:8]).max() > 0
    assert np.abs(incoming[:, 8:] - incoming[:, :8]).max() > 0


def test_split_kernel_order(trained_like):
    original = trained_like.layers[0].params.weights.copy()
    biases = trained_like.layers[0].params.biases.copy()
    d_surgery.split_layer(trained_like, 0, d_surgery.SplitConfig(
        sigma_noise=0.01, sigma_angle=0.0, mode='both', seed=1))
    weights = trained_like.layers[0].params.weights
    assert weights.shape == (24, 1, 3, 3)
    np.testing.assert_array_equal(weights[:8], original)
    assert 0 < np.abs(weights[8:16] - original).max() < 0.1
    np.testing.assert_array_equal(weights[16:], original)
    np.testing.assert_array_equal(trained_like.layers[0].params.biases,
                                  np.concatenate([biases] * 3))


def test_split_consumer_weights(trained_like):
    incoming = trained_like.layers[3].params.weights.copy()
    d_surgery.split_layer(trained_like, 0, d_surgery.SplitConfig(mode='both'))
    widened = trained_like.layers[3].params.weights
    assert widened.shape == (8, 24, 2, 2)
    np.testing.assert_array_equal(widened[:, :8], incoming * np.float32(0.5))
    np.testing.assert_array_equal(widened[:, 8:16], incoming * np.float32(0.5))
    np.testing.assert_array_equal(widened[:, 16:], 0)


def test_split_parameter_count(tiny_model):
    before = tiny_model.parameter_count()
    d_surgery.split_layer(tiny_model, 0, d_surgery.SplitConfig(mode='rotate'))
    # 8 more 3x3 kernels with biases, and 8 more 2x2 input channels per consumer kernel.
    assert tiny_model.parameter_count() == before + 8 * 10 + 8 * 8 * 4


def test_split_respects_kernel_cap(tiny_model):
    with pytest.raises(d_errors.SurgeryError, match='cap'):
        d_surgery.split_layer(tiny_model, 0, d_surgery.SplitConfig(), max_kernels=20)


def test_split_is_seeded(tiny_model):
    other = tiny_model.clone()
    cfg = d_surgery.SplitConfig(sigma_noise=0.01, sigma_angle=0.2, seed=9)
    d_surgery.split_layer(tiny_model, 0, cfg)
    d_surgery.split_layer(other, 0, cfg)
    np.testing.assert_array_equal(tiny_model.layers[0].params.weights,
                                  other.layers[0].params.weights)


@pytest.mark.parametrize('index', [1, 7, 42])
def test_split_needs_a_convolution(tiny_model, index):
    with pytest.raises(d_errors.SurgeryError):
        d_surgery.split_layer(tiny_model, index, d_surgery.SplitConfig())


def test_split_rejects_negative_sigma():
    with pytest.raises(d_errors.SurgeryError):
        d_surgery.SplitConfig(sigma_noise=-1.0)


def test_split_of_convolution_without_consumer():
    model = d_models.build_model((1, 4, 4), ['conv:2:3', 'flatten', 'softmax'], seed=0)
    with pytest.raises(d_errors.SurgeryError, match='no downstream'):
        d_surgery.split_layer(model, 0, d_surgery.SplitConfig())


# Merge

def test_identity_merge_is_bit_exact(trained_like, batch):
    before = trained_like.clone()
    outputs = trained_like.forward(batch)
    _, outcome = d_surgery.merge_layer(trained_like, 0, d_surgery.MergeConfig(k=8))
    assert outcome.k == 8
    for idx in trained_like.parameterized_indices():
        np.testing.assert_array_equal(trained_like.layers[idx].params.weights,
                                      before.layers[idx].params.weights)
        np.testing.assert_array_equal(trained_like.layers[idx].params.biases,
                                      before.layers[idx].params.biases)
    np.testing.assert_array_equal(trained_like.forward(batch), outputs)


def test_duplicate_kernels_collapse(trained_like, batch):
    params = trained_like.layers[0].params
    params.weights[4:] = params.weights[:4]
    params.biases[4:] = params.biases[:4]
    outputs = trained_like.forward(batch)
    d_surgery.merge_layer(trained_like, 0, d_surgery.MergeConfig(k=4, seed=5))
    assert trained_like.layers[0].params.kernel_count == 4
    assert trained_like.layers[3].params.in_channels == 4
    np.testing.assert_allclose(trained_like.forward(batch), outputs, rtol=1e-5, atol=1e-5)


def test_split_then_merge_restores_parameter_count(trained_like):
    before = trained_like.parameter_count()
    d_surgery.split_layer(trained_like, 0, d_surgery.SplitConfig(
        sigma_noise=0.001, sigma_angle=0.2, seed=1))
    assert trained_like.layers[0].params.kernel_count == 24
    d_surgery.merge_layer(trained_like, 0, d_surgery.MergeConfig(k=8))
    assert trained_like.layers[0].params.kernel_count == 8
    assert trained_like.parameter_count() == before


def test_centroid_merge_uses_cluster_means(trained_like):
    params = trained_like.layers[0].params
    params.weights[1] = params.weights[0] + 1e-4
    params.biases[:2] = [0.5, 1.5]
    incoming = trained_like.layers[3].params.weights.copy()
    _, outcome = d_surgery.merge_layer(
        trained_like, 0, d_surgery.MergeConfig(k=7, weight_variant='centroid'))
    assert outcome.members(0).tolist() == [0, 1]
    merged = trained_like.layers[0].params
    assert merged.biases[0] == pytest.approx(1.0)
    np.testing.assert_allclose(merged.weights[0], params.weights[0] + 5e-5, atol=1e-6)
    np.testing.assert_allclose(trained_like.layers[3].params.weights[:, 0],
                               incoming[:, 0] + incoming[:, 1], rtol=1e-6)


def test_nearest_filter_merge_keeps_a_member(trained_like):
    original = trained_like.layers[0].params.weights.copy()
    _, outcome = d_surgery.merge_layer(trained_like, 0, d_surgery.MergeConfig(k=3, seed=1))
    kept = trained_like.layers[0].params.weights
    for cluster in range(3):
        assert any(np.array_equal(kept[cluster], original[member])
                   for member in outcome.members(cluster))


def test_bias_variant_override(trained_like):
    config = d_surgery.MergeConfig(k=2, bias_variant='cluster_mean')
    assert config.effective_bias_variant is d_surgery.BiasVariant.CLUSTER_MEAN
    assert d_surgery.MergeConfig().effective_bias_variant is d_surgery.BiasVariant.MATCHED
    biases = trained_like.layers[0].params.biases.copy()
    _, outcome = d_surgery.merge_layer(trained_like, 0, config)
    for cluster in range(2):
        assert trained_like.layers[0].params.biases[cluster] == pytest.approx(
            biases[outcome.members(cluster)].mean(), rel=1e-6)


def test_merge_into_dense_consumer_warns(trained_like):
    with pytest.warns(d_errors.DenseConsumerMergeWarning, match='fully-connected'):
        d_surgery.merge_layer(trained_like, 3, d_surgery.MergeConfig(k=4))
    assert trained_like.layers[7].params.in_features == 16


@pytest.mark.parametrize('k', [None, 9])
def test_merge_target_errors(tiny_model, k):
    with pytest.raises(d_errors.SurgeryError):
        d_surgery.merge_layer(tiny_model, 0, d_surgery.MergeConfig(k=k))


def test_merge_config_validation():
    with pytest.raises(d_errors.SurgeryError):
        d_surgery.MergeConfig(k=0)
    with pytest.raises(ValueError):
        d_surgery.MergeConfig(weight_variant='median')
