from .activation import ReLU, relu_backward, relu_forward
from .base import Layer, ParameterizedLayer, ParamGrads
from .conv import Conv, conv_backward, conv_forward, ConvLayerParams, im2col, init_conv_params
from .dense import Fc, fc_backward, fc_forward, FcLayerParams, Flatten, init_fc_params
from .loss import softmax_xent_backward, softmax_xent_forward, SoftmaxXent
from .pooling import MaxPool, maxpool_backward, maxpool_forward

__all__ = (
    'Conv', 'ConvLayerParams', 'conv_backward', 'conv_forward', 'im2col', 'init_conv_params',
    'Fc', 'FcLayerParams', 'fc_backward', 'fc_forward', 'init_fc_params', 'Flatten',
    'Layer', 'ParameterizedLayer', 'ParamGrads',
    'MaxPool', 'maxpool_backward', 'maxpool_forward',
    'ReLU', 'relu_backward', 'relu_forward',
    'SoftmaxXent', 'softmax_xent_backward', 'softmax_xent_forward',
)
