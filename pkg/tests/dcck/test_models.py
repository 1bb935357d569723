import numpy as np
import pytest

import dcck.errors as d_errors
import dcck.layers as d_layers
import dcck.models as d_models
import dcck.optim as d_optim
from tests.conftest import TINY_INPUT_SHAPE, TINY_LAYERS


# Architecture

@pytest.mark.parametrize('text,expected', [
    ('conv:100:5', ('conv', (100, 5))),
    ('pool:2', ('pool', (2,))),
    ('fc:10', ('fc', (10,))),
    ('softmax', ('softmax', ())),
])
def test_parse_layer_spec(text, expected):
    assert d_models.parse_layer_spec(text) == expected


@pytest.mark.parametrize('text', ['conv:100', 'pool:0', 'dropout', 'fc:ten', 'relu:1'])
def test_parse_layer_spec_errors(text):
    with pytest.raises(d_errors.LayerConfigError):
        d_models.parse_layer_spec(text)


def test_parse_input_shape():
    assert d_models.parse_input_shape('1x28x28') == (1, 28, 28)
    with pytest.raises(d_errors.LayerConfigError):
        d_models.parse_input_shape('28x28')


def test_reference_architecture():
    model = d_models.build_model(d_models.MNIST_INPUT_SHAPE, d_models.REFERENCE_LAYERS, seed=1)
    assert model.describe() == list(d_models.REFERENCE_LAYERS)
    assert model.conv_layer_indices() == [0, 3]
    conv1, conv2, fc1, fc2 = (model.layers[idx] for idx in model.parameterized_indices())
    assert conv1.params.weights.shape == (100, 1, 5, 5)
    assert conv2.params.weights.shape == (50, 100, 5, 5)
    assert fc1.params.weights.shape == (100, 800)
    assert fc2.params.weights.shape == (10, 100)
    assert model.parameter_count() == (2600 + 125050 + 80100 + 1010)
    assert conv1.params.weights.dtype == np.float32
    np.testing.assert_array_equal(conv1.params.biases, 0)


def test_build_model_is_seeded():
    first = d_models.build_model(TINY_INPUT_SHAPE, TINY_LAYERS, seed=5)
    second = d_models.build_model(TINY_INPUT_SHAPE, TINY_LAYERS, seed=5)
    other = d_models.build_model(TINY_INPUT_SHAPE, TINY_LAYERS, seed=6)
    np.testing.assert_array_equal(first.layers[0].params.weights,
                                  second.layers[0].params.weights)
    assert not np.array_equal(first.layers[0].params.weights, other.layers[0].params.weights)


def test_build_model_rejects_bad_chains():
    with pytest.raises(d_errors.LayerConfigError, match='must follow a flatten'):
        d_models.build_model((1, 12, 12), ['conv:2:3', 'fc:4', 'softmax'], seed=0)
    with pytest.raises(d_errors.LayerConfigError):
        d_models.build_model((1, 12, 12), ['conv:2:3', 'pool:4', 'flatten', 'fc:2', 'softmax'],
                             seed=0)


# Validation

def test_validate_model_ok(tiny_model):
    report = d_models.validate_model(tiny_model)
    assert report.ok
    assert report


def test_validate_model_reports_producer_and_consumer(tiny_model):
    tiny_model.layers[3] = d_layers.Conv(d_layers.ConvLayerParams(
        np.zeros((8, 5, 2, 2), dtype=np.float32), np.zeros(8, dtype=np.float32)))
    report = d_models.validate_model(tiny_model)
    assert not report.ok
    assert report.layers == (0, 3)
    with pytest.raises(d_errors.ModelValidationError) as excinfo:
        d_models.ensure_valid(tiny_model)
    assert excinfo.value.report == report


def test_validate_model_requires_trailing_loss(tiny_model):
    tiny_model.layers.insert(2, d_layers.SoftmaxXent())
    report = d_models.validate_model(tiny_model)
    assert not report.ok
    assert 'loss layer' in report.message


def test_validate_model_input_mismatch(tiny_model):
    tiny_model.input_shape = (3, 12, 12)
    report = d_models.validate_model(tiny_model)
    assert report.layers == (-1, 0)


def test_consumer_index(tiny_model):
    assert d_models.consumer_index(tiny_model, 0) == 3
    assert d_models.consumer_index(tiny_model, 3) == 7
    assert d_models.consumer_index(tiny_model, 7) is None


# Network

def test_forward_shapes(tiny_model):
    x = np.zeros((5,) + TINY_INPUT_SHAPE, dtype=np.float32)
    assert tiny_model.forward(x).shape == (5, 4)
    assert tiny_model.predict(x).shape == (5,)
    with pytest.raises(d_errors.DimensionError):
        tiny_model.forward(np.zeros((5, 1, 10, 10), dtype=np.float32))


def test_loss_and_gradients_align_with_layers(tiny_model, rng):
    x = rng.random((4,) + TINY_INPUT_SHAPE).astype(np.float32)
    loss, probs, grads = tiny_model.loss_and_gradients(x, [0, 1, 2, 3])
    assert loss > 0
    assert probs.shape == (4, 4)
    assert len(grads) == len(tiny_model.layers)
    for idx, layer in enumerate(tiny_model.layers):
        if layer.has_params:
            assert grads[idx].weights.shape == layer.params.weights.shape
            assert grads[idx].weights.dtype == np.float32
        else:
            assert grads[idx] is None


def test_clone_is_deep(tiny_model):
    clone = tiny_model.clone()
    clone.layers[0].params.weights[...] = 0
    assert np.abs(tiny_model.layers[0].params.weights).sum() > 0
    assert clone.describe() == tiny_model.describe()


# Optimiser

def test_sgd_step_matches_update_rule(tiny_model, rng):
    x = rng.random((4,) + TINY_INPUT_SHAPE).astype(np.float32)
    before = tiny_model.clone()
    _, _, grads = tiny_model.loss_and_gradients(x, [0, 1, 2, 3])
    state = d_optim.sgd_step(tiny_model, grads, lr=0.1, momentum=0.9, weight_decay=0.01)
    assert state.step == 1
    w0 = before.layers[7].params.weights
    expected = w0 - 0.1 * (grads[7].weights + 0.01 * w0)
    np.testing.assert_allclose(tiny_model.layers[7].params.weights, expected, rtol=1e-6)

    v = state.velocities[7][0].copy()
    w1 = tiny_model.layers[7].params.weights.copy()
    d_optim.sgd_step(tiny_model, grads, lr=0.1, momentum=0.9, weight_decay=0.01, state=state)
    expected = w1 + 0.9 * v - 0.1 * (grads[7].weights + 0.01 * w1)
    np.testing.assert_allclose(tiny_model.layers[7].params.weights, expected, rtol=1e-5,
                               atol=1e-7)
    assert state.step == 2


def test_sgd_lr_zero_leaves_parameters(tiny_model, rng):
    x = rng.random((2,) + TINY_INPUT_SHAPE).astype(np.float32)
    before = tiny_model.clone()
    _, _, grads = tiny_model.loss_and_gradients(x, [0, 1])
    d_optim.sgd_step(tiny_model, grads, lr=0.0)
    for idx in tiny_model.parameterized_indices():
        np.testing.assert_array_equal(tiny_model.layers[idx].params.weights,
                                      before.layers[idx].params.weights)


def test_sgd_rejects_stale_momentum(tiny_model, rng):
    x = rng.random((2,) + TINY_INPUT_SHAPE).astype(np.float32)
    _, _, grads = tiny_model.loss_and_gradients(x, [0, 1])
    state = d_optim.sgd_step(tiny_model, grads)
    state.velocities[0] = (np.zeros((1, 1, 3, 3), dtype=np.float32), np.zeros(1))
    with pytest.raises(d_errors.DimensionError, match='Momentum buffers'):
        d_optim.sgd_step(tiny_model, grads, state=state)
