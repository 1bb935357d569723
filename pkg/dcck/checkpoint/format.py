"""
The checkpoint file format.

Layout, all integers little-endian::

    b'DCCK' | u32 version | u32 manifest length | manifest (UTF-8 JSON)
    | payload (float32 tensors in manifest order) | u32 CRC-32 of all prior bytes

The manifest lists every layer descriptor with the shapes of its tensors
and, optionally, the SGD state whose momentum buffers follow the model
tensors in the payload.
"""
import json
import logging
import struct
import typing as typ
import zlib

import numpy as np

from ..errors import CheckpointError, CheckpointVersionError, ChecksumError, ManifestError
from ..layers import Conv, ConvLayerParams, Fc, FcLayerParams, Flatten, MaxPool, ReLU, SoftmaxXent
from ..models import ensure_valid, NetworkModel, parse_layer_spec
from ..optim import SgdState

logger = logging.getLogger(__name__)

MAGIC = b'DCCK'
VERSION = 1
PAYLOAD_DTYPE = np.dtype('<f4')

_PREFIX = struct.Struct('<4sII')
_CRC = struct.Struct('<I')
_MANIFEST_KEYS = {'input_shape', 'layers', 'trainer_state'}
_LAYER_KEYS = {'spec', 'tensors'}
_STATE_KEYS = {'step', 'momentum'}
_MOMENTUM_KEYS = {'layer', 'tensors'}


def _tensors_of(layer) -> typ.List[np.ndarray]:
    if layer.has_params:
        return [layer.params.weights, layer.params.biases]
    return []


def encode(model: NetworkModel, state: typ.Optional[SgdState] = None) -> bytes:
    tensors = []
    layers = []
    for layer in model.layers:
        own = _tensors_of(layer)
        tensors.extend(own)
        layers.append({'spec': layer.describe(), 'tensors': [list(t.shape) for t in own]})
    trainer_state = None
    if state is not None:
        momentum = []
        for index in sorted(state.velocities):
            buffers = list(state.velocities[index])
            tensors.extend(buffers)
            momentum.append({'layer': index, 'tensors': [list(t.shape) for t in buffers]})
        trainer_state = {'step': state.step, 'momentum': momentum}
    manifest = json.dumps(
        {'input_shape': list(model.input_shape), 'layers': layers,
         'trainer_state': trainer_state},
        sort_keys=True, separators=(',', ':')).encode('utf-8')
    body = b''.join(
        [_PREFIX.pack(MAGIC, VERSION, len(manifest)), manifest]
        + [np.ascontiguousarray(t, dtype=PAYLOAD_DTYPE).tobytes() for t in tensors])
    return body + _CRC.pack(zlib.crc32(body))


def _check_keys(obj, expected: set, what: str):
    if not isinstance(obj, dict) or set(obj) != expected:
        raise ManifestError('Malformed {0}: expected keys {1}, got {2}'.format(
            what, sorted(expected), sorted(obj) if isinstance(obj, dict) else type(obj).__name__))


class _Payload(object):
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, shape) -> np.ndarray:
        shape = tuple(int(extent) for extent in shape)
        if any(extent < 1 for extent in shape):
            raise ManifestError('Invalid tensor shape {0}'.format(shape))
        size = int(np.prod(shape)) * PAYLOAD_DTYPE.itemsize
        if self.offset + size > len(self.data):
            raise ManifestError('Manifest describes more data than the payload holds')
        array = np.frombuffer(self.data, dtype=PAYLOAD_DTYPE, count=size // PAYLOAD_DTYPE.itemsize,
                              offset=self.offset)
        self.offset += size
        return array.astype(np.float32).reshape(shape)


def _build_layer(entry, payload: _Payload):
    _check_keys(entry, _LAYER_KEYS, 'layer entry')
    kind, args = parse_layer_spec(entry['spec'])
    shapes = entry['tensors']
    expected_tensors = 2 if kind in ('conv', 'fc') else 0
    if len(shapes) != expected_tensors:
        raise ManifestError('Layer {0!r} lists {1} tensors'.format(entry['spec'], len(shapes)))
    if kind == 'conv':
        layer = Conv(ConvLayerParams(payload.take(shapes[0]), payload.take(shapes[1])))
        if (layer.params.kernel_count, layer.params.kernel_size) != args:
            raise ManifestError('Layer {0!r} does not match its tensors'.format(entry['spec']))
        return layer
    if kind == 'fc':
        layer = Fc(FcLayerParams(payload.take(shapes[0]), payload.take(shapes[1])))
        if (layer.params.out_features,) != args:
            raise ManifestError('Layer {0!r} does not match its tensors'.format(entry['spec']))
        return layer
    if kind == 'pool':
        return MaxPool(args[0])
    return {'relu': ReLU, 'flatten': Flatten, 'softmax': SoftmaxXent}[kind]()


def decode(data: bytes) -> typ.Tuple[NetworkModel, typ.Optional[SgdState]]:
    """
    .. raises::
        ChecksumError: If the file is truncated or corrupted.
        CheckpointVersionError: If the version is not :data:`VERSION`.
        ManifestError: If the manifest does not describe the payload.
    """
    if len(data) < _PREFIX.size + _CRC.size:
        raise ChecksumError('Checkpoint is truncated ({0} bytes)'.format(len(data)))
    magic, version, manifest_size = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError('Not a checkpoint file (magic {0!r})'.format(magic))
    stored, = _CRC.unpack_from(data, len(data) - _CRC.size)
    body = data[:-_CRC.size]
    if zlib.crc32(body) != stored:
        raise ChecksumError('Checkpoint checksum mismatch')
    if version != VERSION:
        raise CheckpointVersionError('Checkpoint version {0}, expected {1}'.format(
            version, VERSION))
    start = _PREFIX.size
    if start + manifest_size > len(body):
        raise ManifestError('Manifest length exceeds the file')
    try:
        manifest = json.loads(body[start:start + manifest_size].decode('utf-8'))
    except ValueError as e:
        raise ManifestError('Unreadable manifest: {0}'.format(e)) from e
    _check_keys(manifest, _MANIFEST_KEYS, 'manifest')

    payload = _Payload(body[start + manifest_size:])
    try:
        layers = [_build_layer(entry, payload) for entry in manifest['layers']]
        model = ensure_valid(NetworkModel(input_shape=manifest['input_shape'], layers=layers))
    except CheckpointError:
        raise
    except Exception as e:
        raise ManifestError('Manifest does not describe a valid model: {0}'.format(e)) from e

    state = None
    if manifest['trainer_state'] is not None:
        _check_keys(manifest['trainer_state'], _STATE_KEYS, 'trainer state')
        state = SgdState(step=int(manifest['trainer_state']['step']))
        for entry in manifest['trainer_state']['momentum']:
            _check_keys(entry, _MOMENTUM_KEYS, 'momentum entry')
            if len(entry['tensors']) != 2:
                raise ManifestError('Momentum entries hold two tensors')
            state.velocities[int(entry['layer'])] = tuple(
                payload.take(shape) for shape in entry['tensors'])
    if payload.offset != len(payload.data):
        raise ManifestError('{0} payload bytes are not described by the manifest'.format(
            len(payload.data) - payload.offset))
    return model, state


def save(model: NetworkModel, path: str, state: typ.Optional[SgdState] = None):
    data = encode(model, state)
    with open(path, 'wb') as f:
        f.write(data)
    logger.info('Saved %s (%d parameters) to %s', model, model.parameter_count(), path)


def load(path: str) -> typ.Tuple[NetworkModel, typ.Optional[SgdState]]:
    with open(path, 'rb') as f:
        data = f.read()
    return decode(data)
