import typing as typ

import attr

from ..errors import DimensionError, ModelValidationError
from ..layers import Conv, Fc, Flatten, SoftmaxXent
from .network import NetworkModel


@attr.s(frozen=True)
class ValidationReport(object):
    """
    The outcome of :func:`validate_model`.

    When ``ok`` is ``False``, ``layers`` names the layer indices involved in
    the first violated constraint (``-1`` stands for the model input).
    """

    ok = attr.ib()
    message = attr.ib(default='')
    layers = attr.ib(default=(), converter=tuple)

    def __bool__(self):
        return self.ok


OK = ValidationReport(ok=True)


def validate_model(model: NetworkModel) -> ValidationReport:
    """
    Check that the layers chain shapes from ``model.input_shape`` and that
    the network ends in exactly one loss layer.
    """
    layers = model.layers
    if not layers:
        return ValidationReport(False, 'The model has no layers')
    loss_indices = [idx for idx, layer in enumerate(layers) if isinstance(layer, SoftmaxXent)]
    if loss_indices != [len(layers) - 1]:
        return ValidationReport(
            False, 'Expected exactly one loss layer, in last position; found {0}'.format(
                loss_indices or 'none'),
            loss_indices)

    shape = model.input_shape
    producer = -1
    for idx, layer in enumerate(layers):
        if isinstance(layer, Conv) and len(shape) == 1:
            return ValidationReport(
                False, 'Convolution at layer {0} follows a flattened layer {1}'.format(
                    idx, producer), (producer, idx))
        try:
            shape = layer.output_shape(shape)
        except DimensionError as e:
            return ValidationReport(
                False, 'Layer {0} ({1}) cannot consume the output of layer {2}: {3}'.format(
                    idx, layer.describe(), producer, e),
                (producer, idx))
        if isinstance(layer, (Conv, Fc, Flatten)):
            producer = idx
    return OK


def ensure_valid(model: NetworkModel) -> NetworkModel:
    """
    .. raises::
        ModelValidationError: If :func:`validate_model` fails.
    """
    report = validate_model(model)
    if not report.ok:
        raise ModelValidationError(report)
    return model


def consumer_index(model: NetworkModel, index: int) -> typ.Optional[int]:
    """The index of the next parameterised layer after ``index``, if any."""
    for idx in range(index + 1, len(model.layers)):
        if model.layers[idx].has_params:
            return idx
    return None
