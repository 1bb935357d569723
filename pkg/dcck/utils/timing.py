import statistics
import time

import numpy as np

from ..tensor import Tensor

#: Batch size used for forward-pass timing.
TIMING_BATCH = 10
#: Number of minibatches timed.
TIMING_BATCHES = 100


def measure_forward_ms(model, images: Tensor, batches: int = TIMING_BATCHES,
                       batch_size: int = TIMING_BATCH) -> float:
    """
    Median wall-clock milliseconds of ``model.forward`` over ``batches``
    consecutive minibatches of ``images``, wrapping around at the end.
    """
    samples = []
    for n in range(batches):
        batch = np.take(images, np.arange(n * batch_size, (n + 1) * batch_size),
                        axis=0, mode='wrap')
        start = time.perf_counter()
        model.forward(batch)
        samples.append((time.perf_counter() - start) * 1000.0)
    model.clear_caches()
    return statistics.median(samples)
