from .merge import BiasVariant, merge_layer, MergeConfig, WeightVariant
from .rewire import locate, SurgerySite
from .rotate import rotate_kernel
from .split import split_layer, SplitConfig, SplitMode

__all__ = (
    'BiasVariant', 'merge_layer', 'MergeConfig', 'WeightVariant',
    'locate', 'SurgerySite',
    'rotate_kernel',
    'split_layer', 'SplitConfig', 'SplitMode',
)
