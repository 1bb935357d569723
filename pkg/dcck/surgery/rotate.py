import numpy as np
from scipy import ndimage

from ..errors import DimensionError
from ..tensor import Tensor


def rotate_kernel(kernel: Tensor, angle: float) -> Tensor:
    """
    Rotate every ``k x k`` channel of a ``[d x k x k]`` kernel by ``angle``
    radians (counter-clockwise as displayed) about the grid centre.

    Each output pixel samples the source at the inversely rotated position
    with bilinear interpolation; positions off the grid read as ``0``.
    """
    if kernel.ndim != 3 or kernel.shape[1] != kernel.shape[2]:
        raise DimensionError('Expected a [d x k x k] kernel, got {0}'.format(kernel.shape))
    if angle == 0:
        return kernel.copy()
    size = kernel.shape[1]
    centre = (size - 1) / 2.0
    rows, cols = np.mgrid[0:size, 0:size].astype(np.float64)
    dy, dx = rows - centre, cols - centre
    cos, sin = np.cos(angle), np.sin(angle)
    coords = np.stack([
        dx * sin + dy * cos + centre,
        dx * cos - dy * sin + centre,
    ])
    # Snap round-off so exact quarter turns land on grid points, not just outside them.
    coords = np.round(coords, decimals=12)
    rotated = np.empty_like(kernel)
    for channel in range(kernel.shape[0]):
        rotated[channel] = ndimage.map_coordinates(
            kernel[channel].astype(np.float64), coords, order=1, mode='constant', cval=0.0)
    return rotated
