import os

import numpy as np
import pytest

import dcck.data as d_data
import dcck.errors as d_errors
import dcck.models as d_models

#: A network small enough for the 12x12 synthetic glyphs.
TINY_LAYERS = (
    'conv:8:3', 'relu', 'pool:2',
    'conv:8:2', 'relu', 'pool:2',
    'flatten', 'fc:4', 'softmax',
)
TINY_INPUT_SHAPE = (1, 12, 12)

TINY_CONFIG = """\
# small synthetic run
data.source = synthetic
data.synthetic_count = 300
data.synthetic_test_count = 100
data.validation_fraction = 0.2
model.layers = {layers}
optim.batch_size = 32
dcck.minibatches = 5
dcck.max_finetune_evals = 3
split.sigma_noise = 0.001
split.sigma_angle = 0.2
output.dir = {output}
"""


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


@pytest.fixture()
def tiny_model():
    return d_models.build_model(TINY_INPUT_SHAPE, TINY_LAYERS, seed=3)


@pytest.fixture(scope='session')
def tiny_data():
    train, validation = d_data.split_train_validation(
        d_data.synth_digits(400, seed=0), 0.25, seed=0)
    return d_data.DataSplits(
        train=train, validation=validation, test=d_data.synth_digits(100, seed=1))


@pytest.fixture()
def write_config(tmp_path):
    """Write a small synthetic run configuration; extra lines are appended."""

    def write(*extra_lines, name='run.cfg', output='run'):
        text = TINY_CONFIG.format(
            layers=' '.join(TINY_LAYERS), output=str(tmp_path / output))
        text += ''.join(line + '\n' for line in extra_lines)
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


@pytest.fixture(scope='session')
def mnist_root():
    root = os.environ.get(d_data.DATA_DIR_ENV)
    if not root:
        pytest.skip('{0} is not set'.format(d_data.DATA_DIR_ENV))
    try:
        d_data.mnist_paths(root, 'train')
        d_data.mnist_paths(root, 'test')
    except d_errors.DatasetError:
        pytest.skip('MNIST files not found under {0}'.format(root))
    return root
