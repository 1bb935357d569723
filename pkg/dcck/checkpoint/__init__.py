from .format import decode, encode, load, MAGIC, save, VERSION
from .kernels import export_kernel_grid, kernel_mosaic, write_pgm

__all__ = (
    'decode', 'encode', 'load', 'MAGIC', 'save', 'VERSION',
    'export_kernel_grid', 'kernel_mosaic', 'write_pgm',
)
