from .timing import measure_forward_ms, TIMING_BATCH, TIMING_BATCHES

__all__ = ('measure_forward_ms', 'TIMING_BATCH', 'TIMING_BATCHES')
