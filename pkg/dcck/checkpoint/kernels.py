import math

import numpy as np

from ..errors import SurgeryError
from ..layers import Conv
from ..models import NetworkModel

#: Gray level for a kernel whose weights are all equal.
DEGENERATE_LEVEL = 0.5
SEPARATOR_LEVEL = 0.0


def normalise_kernel(kernel: np.ndarray) -> np.ndarray:
    low, high = float(kernel.min()), float(kernel.max())
    if high == low:
        return np.full(kernel.shape, DEGENERATE_LEVEL)
    return (kernel.astype(np.float64) - low) / (high - low)


def kernel_mosaic(model: NetworkModel, layer_index: int) -> np.ndarray:
    """
    Tile the kernels of a convolution into one ``[0, 1]`` image.

    Kernels are laid out row-major on a ``ceil(sqrt(N))``-wide grid with
    one-pixel separators. Multi-channel kernels are averaged over their
    input channels.
    """
    if not 0 <= layer_index < len(model.layers) or not isinstance(
            model.layers[layer_index], Conv):
        raise SurgeryError('Layer {0} is not a convolution'.format(layer_index))
    weights = model.layers[layer_index].params.weights
    count, size = weights.shape[0], weights.shape[2]
    cols = int(math.ceil(math.sqrt(count)))
    rows = int(math.ceil(count / cols))
    mosaic = np.full((rows * (size + 1) - 1, cols * (size + 1) - 1), SEPARATOR_LEVEL)
    for idx in range(count):
        top, left = (idx // cols) * (size + 1), (idx % cols) * (size + 1)
        mosaic[top:top + size, left:left + size] = normalise_kernel(weights[idx].mean(axis=0))
    return mosaic


def write_pgm(path: str, image: np.ndarray):
    """Write a ``[0, 1]`` image as a binary portable graymap."""
    pixels = np.rint(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)
    with open(path, 'wb') as f:
        f.write('P5\n{0} {1}\n255\n'.format(pixels.shape[1], pixels.shape[0]).encode('ascii'))
        f.write(pixels.tobytes())


def export_kernel_grid(model: NetworkModel, layer_index: int, path: str) -> np.ndarray:
    mosaic = kernel_mosaic(model, layer_index)
    write_pgm(path, mosaic)
    return mosaic
