"""Finite subsets, Hausdorff distance, and occupancy coarse-graining.

A greedy cover at radius eps induces a partition into cells of diameter
< 2 eps; recording which cells a subset meets (or how much mass a measure
gives each cell) compresses subsets and measures with controlled loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covering import maximal_packing
from .errors import DomainError, SizeLimit, SpaceMismatch
from .measures import DiscreteMeasure, random_measure
from .spaces import FiniteMetricSpace
from .transport import wasserstein

__all__ = [
    "FiniteSubset",
    "hausdorff_distance",
    "Partition",
    "build_partition",
    "occupancy_map",
    "measure_occupancy",
    "occupancy_distance",
    "occupancy_w2_bound",
    "WCoveringReport",
    "wasserstein_covering_bound",
]


@dataclass
class FiniteSubset:
    """A non-empty set of points of an indexed space, kept sorted."""

    space: FiniteMetricSpace
    indices: np.ndarray

    def __post_init__(self):
        if not self.space.is_indexed:
            raise DomainError("subsets are defined over indexed spaces")
        idx = np.unique(np.asarray(self.indices, dtype=np.int64))
        if idx.size == 0:
            raise DomainError("subset must be non-empty")
        if idx[0] < 0 or idx[-1] >= self.space.point_count:
            raise DomainError("subset index out of range")
        self.indices = idx

    def __len__(self) -> int:
        return len(self.indices)


def hausdorff_distance(A: FiniteSubset, B: FiniteSubset) -> float:
    """max of the two directed sup-inf distances."""
    if A.space is not B.space:
        raise SpaceMismatch("subsets live on different spaces")

    def directed(X: FiniteSubset, Y: FiniteSubset) -> float:
        worst = 0.0
        for x in X.indices:
            worst = max(worst, float(X.space.dist_one_many(x, Y.indices).min()))
        return worst

    return max(directed(A, B), directed(B, A))


@dataclass
class Partition:
    """Cells of a greedy eps-cover: every cell sits inside an open eps-ball."""

    space: FiniteMetricSpace
    eps: float
    centers: np.ndarray
    cell_of: np.ndarray  # point index -> cell id
    cells: list  # cell id -> point indices
    diameters: np.ndarray  # exact per-cell diameters

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    def fiber_bound(self) -> float:
        """Upper bound 2 eps on any cell diameter."""
        return 2.0 * self.eps


def build_partition(
    space: FiniteMetricSpace, eps: float, max_points: int = 20000
) -> Partition:
    """Assign every point to the first greedy center within < eps of it."""
    if space.point_count > max_points:
        raise SizeLimit(
            f"partition needs full enumeration; {space.point_count} > {max_points}"
        )
    pts = space.all_points(limit=max_points)
    centers = maximal_packing(space, eps, points=pts)
    cell_of = np.full(space.point_count, -1, dtype=np.int64)
    for cid, center in enumerate(centers):
        d = space.dist_one_many(center, pts)
        hit = (d < eps) & (cell_of < 0)
        cell_of[pts[hit]] = cid
    if np.any(cell_of < 0):  # greedy guarantees coverage; guard anyway
        raise RuntimeError("partition left a point unassigned")
    cells = [pts[cell_of == cid] for cid in range(len(centers))]
    diameters = np.zeros(len(cells))
    for cid, cell in enumerate(cells):
        worst = 0.0
        for x in cell:
            worst = max(worst, float(space.dist_one_many(x, cell).max()))
        diameters[cid] = worst
    return Partition(
        space=space,
        eps=eps,
        centers=centers,
        cell_of=cell_of,
        cells=cells,
        diameters=diameters,
    )


def occupancy_map(subset: FiniteSubset, partition: Partition) -> np.ndarray:
    """0/1 vector: which cells the subset meets."""
    if subset.space is not partition.space:
        raise SpaceMismatch("subset and partition live on different spaces")
    bits = np.zeros(partition.cell_count, dtype=np.uint8)
    bits[partition.cell_of[subset.indices]] = 1
    return bits


def measure_occupancy(mu: DiscreteMeasure, partition: Partition) -> np.ndarray:
    """Cell masses of a measure under the partition."""
    if mu.space is not partition.space:
        raise SpaceMismatch("measure and partition live on different spaces")
    out = np.zeros(partition.cell_count, dtype=float)
    np.add.at(out, partition.cell_of[mu.support], mu.masses)
    return out


def occupancy_distance(v: np.ndarray, w: np.ndarray) -> float:
    """l1 distance between occupancy vectors."""
    if v.shape != w.shape:
        raise DomainError(f"occupancy shapes differ: {v.shape} vs {w.shape}")
    return float(np.abs(np.asarray(v, dtype=float) - np.asarray(w, dtype=float)).sum())


def occupancy_w2_bound(
    mu: DiscreteMeasure, nu: DiscreteMeasure, partition: Partition
) -> tuple[float, float]:
    """(bound, sigma): W_2(mu, nu) <= diam sqrt(sigma) + 2 eps where sigma
    is the l1 gap of the two cell-mass vectors."""
    sigma = occupancy_distance(
        measure_occupancy(mu, partition), measure_occupancy(nu, partition)
    )
    bound = partition.space.diameter() * math.sqrt(sigma) + 2.0 * partition.eps
    return bound, sigma


# ---------------------------------------------------------------------------
# covering growth of the measure space


@dataclass
class WCoveringReport:
    epsilon: float
    d_prime: float
    eta: float
    separation: float  # greedy separation used for the observed packing
    log_bound: float
    bound: float
    observed_packing: int
    candidates: int

    def within_bound(self) -> bool:
        return self.observed_packing <= self.bound


def wasserstein_covering_bound(
    space: FiniteMetricSpace,
    eps: float,
    d_prime: float,
    eta: float = 1.0,
    candidates: int = 150,
    max_support: int = 5,
    p: float = 2.0,
    seed: int = 0,
) -> WCoveringReport:
    """Packing growth of sampled measures against the covering-number bound.

    The bound exp((2 (1/eps)^d' + eta) log(1/eps)) dominates the covering
    number of the measure space at radius (diam + 1) eps whenever d'
    exceeds the D-critical parameter; a greedy W_p packing of random
    measures at separation 2 (diam + 1) eps can therefore never exceed it.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0,1), got {eps}")
    if d_prime <= 0 or eta <= 0:
        raise DomainError("d_prime and eta must be positive")
    log_bound = (2.0 * (1.0 / eps) ** d_prime + eta) * math.log(1.0 / eps)
    bound = math.exp(log_bound) if log_bound < 700.0 else math.inf
    diam = space.diameter()
    sep = 2.0 * (diam + 1.0) * eps
    rng = np.random.default_rng(seed)
    kept: list[DiscreteMeasure] = []
    for _ in range(candidates):
        m = random_measure(space, rng, max_support=max_support)
        if all(wasserstein(m, c, p)[0] >= sep for c in kept):
            kept.append(m)
    return WCoveringReport(
        epsilon=eps,
        d_prime=d_prime,
        eta=eta,
        separation=sep,
        log_bound=log_bound,
        bound=bound,
        observed_packing=len(kept),
        candidates=candidates,
    )
