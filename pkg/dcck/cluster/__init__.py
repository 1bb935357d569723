from .kmeans import ClusterOutcome, distortion_of, kmeans, nearest_member

__all__ = (
    'ClusterOutcome',
    'distortion_of',
    'kmeans',
    'nearest_member',
)
