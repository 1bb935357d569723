"""
Lloyd's k-means over flattened kernels, with k-means++ seeding.
"""
import logging
import typing as typ

import attr
import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ClusteringError
from ..tensor import ACCUMULATOR_DTYPE, Tensor

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 300
DEFAULT_TOL = 1e-6
# Slack allowed on the "distortion never increases" check, relative.
_MONOTONE_SLACK = 1e-9


@attr.s(eq=False, frozen=True)
class ClusterOutcome(object):
    """
    The result of :func:`kmeans`.

    Clusters are numbered by their lowest member index, so cluster ``0``
    contains point ``0``.
    """

    centroids = attr.ib()
    assignment = attr.ib()
    cluster_sizes = attr.ib()
    distortion = attr.ib()
    #: Distortion after every Lloyd iteration of the winning run.
    history = attr.ib(default=(), converter=tuple)
    iterations = attr.ib(default=0)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == cluster)


def squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return cdist(points, centroids, metric='sqeuclidean')


def distortion_of(points: np.ndarray, centroids: np.ndarray, assignment: np.ndarray) -> float:
    """``sum_j sum_{p in cluster j} ||p - mu_j||^2``"""
    residual = points.astype(ACCUMULATOR_DTYPE) - centroids[assignment]
    return float(np.einsum('ij,ij->', residual, residual))


def _plus_plus_seeds(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    closest = squared_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            weights = closest / total
            candidate = int(rng.choice(n, p=weights / weights.sum()))
        else:
            # Every point coincides with a seed already; take the first unused.
            taken = set(chosen)
            candidate = next(idx for idx in range(n) if idx not in taken)
        chosen.append(candidate)
        closest = np.minimum(closest, squared_distances(points, points[[candidate]])[:, 0])
    return points[chosen].copy()


def _means(points: np.ndarray, assignment: np.ndarray, k: int,
           previous: np.ndarray) -> typ.Tuple[np.ndarray, np.ndarray]:
    sizes = np.bincount(assignment, minlength=k)
    sums = np.zeros_like(previous)
    np.add.at(sums, assignment, points)
    centroids = previous.copy()
    filled = sizes > 0
    centroids[filled] = sums[filled] / sizes[filled, None]
    return centroids, sizes


def _repair_empty(points: np.ndarray, assignment: np.ndarray, centroids: np.ndarray,
                  k: int) -> typ.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Give every empty cluster the point farthest from its own centroid, taken
    from a cluster that keeps at least one member.
    """
    centroids, sizes = _means(points, assignment, k, centroids)
    while (sizes == 0).any():
        empty = int(np.flatnonzero(sizes == 0)[0])
        errors = ((points - centroids[assignment]) ** 2).sum(axis=1)
        errors[sizes[assignment] < 2] = -1.0
        donor = int(np.argmax(errors))
        logger.debug('Moving point %d into empty cluster %d', donor, empty)
        assignment[donor] = empty
        centroids[empty] = points[donor]
        centroids, sizes = _means(points, assignment, k, centroids)
    return assignment, centroids, sizes


def _lloyd(points: np.ndarray, k: int, rng: np.random.Generator,
           max_iters: int, tol: float) -> ClusterOutcome:
    centroids = _plus_plus_seeds(points, k, rng)
    assignment = None
    history = []
    iteration = 0
    for iteration in range(1, max_iters + 1):
        new_assignment = squared_distances(points, centroids).argmin(axis=1)
        new_assignment, centroids, sizes = _repair_empty(points, new_assignment, centroids, k)
        distortion = distortion_of(points, centroids, new_assignment)
        if history and distortion > history[-1] * (1 + _MONOTONE_SLACK) + _MONOTONE_SLACK:
            raise ClusteringError(
                'k-means distortion rose from {0!r} to {1!r} at iteration {2}'.format(
                    history[-1], distortion, iteration))
        stable = assignment is not None and np.array_equal(new_assignment, assignment)
        converged = bool(history) and history[-1] - distortion <= tol * history[-1]
        history.append(distortion)
        assignment = new_assignment
        if stable or converged:
            break
    return ClusterOutcome(
        centroids=centroids,
        assignment=assignment,
        cluster_sizes=np.bincount(assignment, minlength=k),
        distortion=history[-1],
        history=history,
        iterations=iteration,
    )


def _canonical(outcome: ClusterOutcome) -> ClusterOutcome:
    """Renumber clusters by their lowest member index."""
    first_member = np.full(outcome.k, np.iinfo(np.int64).max)
    np.minimum.at(first_member, outcome.assignment, np.arange(outcome.assignment.shape[0]))
    order = np.argsort(first_member, kind='stable')
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.shape[0])
    return attr.evolve(
        outcome,
        centroids=outcome.centroids[order],
        assignment=relabel[outcome.assignment],
        cluster_sizes=outcome.cluster_sizes[order],
    )


def kmeans(points: Tensor, k: int, seed: int = 0, max_iters: int = DEFAULT_MAX_ITERS,
           tol: float = DEFAULT_TOL, n_init: int = 1) -> ClusterOutcome:
    """
    Cluster the rows of ``points`` into ``k`` groups under L2 distortion.

    Iterates until the assignment is a fixed point, the relative distortion
    improvement drops below ``tol``, or ``max_iters`` is reached. With
    ``n_init > 1`` the lowest-distortion of several seeded runs is kept.
    Deterministic for a fixed ``(points, k, seed, n_init)``.

    .. raises::
        ClusteringError: Unless ``1 <= k <= len(points)``.
    """
    points = np.asarray(points, dtype=ACCUMULATOR_DTYPE)
    if points.ndim != 2:
        raise ClusteringError('Expected an [n x P] matrix, got shape {0}'.format(points.shape))
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ClusteringError('Cannot form {0} clusters from {1} points'.format(k, n))
    if max_iters < 1 or n_init < 1:
        raise ClusteringError('max_iters and n_init must be positive')

    if k == n:
        return ClusterOutcome(
            centroids=points.copy(),
            assignment=np.arange(n),
            cluster_sizes=np.ones(n, dtype=np.int64),
            distortion=0.0,
            history=(0.0,),
            iterations=0,
        )

    rng = np.random.default_rng(seed)
    best = None
    for run in range(n_init):
        outcome = _lloyd(points, k, rng, max_iters, tol)
        logger.debug('k-means run %d: distortion %g after %d iterations',
                     run, outcome.distortion, outcome.iterations)
        if best is None or outcome.distortion < best.distortion:
            best = outcome
    return _canonical(best)


def nearest_member(points: Tensor, outcome: ClusterOutcome) -> np.ndarray:
    """
    For each cluster, the index of the member point nearest its centroid.

    Ties go to the lowest point index.

    .. raises::
        ClusteringError: If some cluster has no member.
    """
    points = np.asarray(points, dtype=ACCUMULATOR_DTYPE)
    residual = points - outcome.centroids[outcome.assignment]
    errors = np.einsum('ij,ij->i', residual, residual)
    representatives = np.empty(outcome.k, dtype=np.int64)
    for cluster in range(outcome.k):
        members = outcome.members(cluster)
        if members.size == 0:
            raise ClusteringError('Cluster {0} is empty'.format(cluster))
        representatives[cluster] = members[np.argmin(errors[members])]
    return representatives
