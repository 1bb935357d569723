from .architecture import (
    build_model, MNIST_INPUT_SHAPE, parse_input_shape, parse_layer_spec, REFERENCE_LAYERS,
    split_architecture,
)
from .network import NetworkModel
from .validation import consumer_index, ensure_valid, validate_model, ValidationReport

__all__ = (
    'build_model', 'consumer_index', 'ensure_valid', 'MNIST_INPUT_SHAPE', 'NetworkModel',
    'parse_input_shape', 'parse_layer_spec', 'split_architecture', 'REFERENCE_LAYERS',
    'validate_model', 'ValidationReport',
)
