"""Greedy covering/packing profiles and exact oracles for small spaces.

One greedy pass at radius eps returns centers that are pairwise >= eps apart
(a packing) while every candidate point lies within < eps of some center
(a covering), so a single count is simultaneously a packing lower bound and
a covering upper bound.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, SizeLimit
from .spaces import FiniteMetricSpace

__all__ = [
    "ProfileEntry",
    "CoveringProfile",
    "SandwichReport",
    "maximal_packing",
    "covering_profile",
    "sandwich_check",
    "exact_cover_number",
    "exact_packing_number",
]

DEFAULT_SAMPLE_SIZE = 20000


@dataclass(frozen=True)
class ProfileEntry:
    epsilon: float
    cover_upper: int
    packing_lower: int
    sample_size: int


@dataclass
class CoveringProfile:
    space_label: str
    entries: list  # ProfileEntry, sorted by decreasing epsilon
    seed: int
    sample_relative: bool

    def epsilons(self) -> np.ndarray:
        return np.asarray([e.epsilon for e in self.entries], dtype=float)

    def counts(self, packing: bool = False) -> np.ndarray:
        key = "packing_lower" if packing else "cover_upper"
        return np.asarray([getattr(e, key) for e in self.entries], dtype=np.int64)


def _candidate_points(space, sample_size, seed):
    if space.point_count <= sample_size:
        pts = space.all_points(limit=max(sample_size, 1))
        return pts, False
    rng = np.random.default_rng(seed)
    return space.sample_points(sample_size, rng), True


def maximal_packing(
    space: FiniteMetricSpace,
    eps: float,
    points: np.ndarray | None = None,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
) -> np.ndarray:
    """Greedy maximal eps-packing over the given (or sampled) points.

    Always takes the lowest-position uncovered point as the next center and
    marks points at distance < eps as covered, so centers stay >= eps apart.
    Returns the center handles in selection order.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if points is None:
        points, _ = _candidate_points(space, sample_size, seed)
    n = len(points)
    avail = np.ones(n, dtype=bool)
    centers = []
    while True:
        rest = np.flatnonzero(avail)
        if rest.size == 0:
            break
        c = rest[0]
        centers.append(c)
        d = space.dist_one_many(points[c], points[rest])
        avail[rest[d < eps]] = False
    return points[np.asarray(centers, dtype=np.int64)]


def covering_profile(
    space: FiniteMetricSpace,
    eps_grid,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    threads: int = 1,
) -> CoveringProfile:
    """Greedy counts over a decreasing eps grid, one shared candidate set."""
    eps = np.unique(np.asarray(eps_grid, dtype=float))[::-1]
    if eps.size == 0 or eps[-1] <= 0:
        raise ValueError("eps grid must be non-empty and positive")
    points, sampled = _candidate_points(space, sample_size, seed)
    m = len(points)

    def count_at(e: float) -> int:
        return len(maximal_packing(space, e, points=points))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(count_at, eps))
    else:
        counts = [count_at(e) for e in eps]
    entries = [
        ProfileEntry(float(e), int(c), int(c), m) for e, c in zip(eps, counts)
    ]
    return CoveringProfile(
        space_label=space.label, entries=entries, seed=seed, sample_relative=sampled
    )


@dataclass
class SandwichReport:
    pairs: list  # (eps, cover_upper_at_2eps, packing_lower_at_eps)
    violations: list
    passed: bool


def sandwich_check(profile: CoveringProfile, rtol: float = 1e-9) -> SandwichReport:
    """Check N(2 eps) <= P(eps) across every doubled pair in the grid."""
    entries = profile.entries
    by_eps = [(e.epsilon, e) for e in entries]
    pairs = []
    violations = []
    for eps, entry in by_eps:
        target = 2.0 * eps
        for eps2, entry2 in by_eps:
            if abs(eps2 - target) <= rtol * target:
                rec = (eps, entry2.cover_upper, entry.packing_lower)
                pairs.append(rec)
                if entry2.cover_upper > entry.packing_lower:
                    violations.append(rec)
                break
    if not pairs:
        raise GridMismatch("no (eps, 2 eps) pairs present in the profile grid")
    return SandwichReport(pairs=pairs, violations=violations, passed=not violations)


# ---------------------------------------------------------------------------
# exact oracles (bitmask branch and bound, <= 64 points)


def _ball_masks(space, eps: float, closed: bool) -> list[int]:
    n = space.point_count
    if n > 64:
        raise SizeLimit(f"exact oracles need <= 64 points, got {n}")
    pts = space.all_points()
    masks = []
    for i in range(n):
        d = space.dist_one_many(pts[i], pts)
        inside = d <= eps if closed else d < eps
        m = 0
        for j in np.flatnonzero(inside):
            m |= 1 << int(j)
        masks.append(m)
    return masks


def exact_cover_number(space: FiniteMetricSpace, eps: float) -> int:
    """Minimum number of closed eps-balls covering the space (exact search)."""
    n = space.point_count
    balls = _ball_masks(space, eps, closed=True)
    full = (1 << n) - 1

    cov, best = 0, 0
    while cov != full:  # greedy upper bound
        pick = max(balls, key=lambda b: (b & ~cov).bit_count())
        cov |= pick
        best += 1

    order = sorted(range(n), key=lambda i: -balls[i].bit_count())

    def dfs(cov: int, used: int) -> None:
        nonlocal best
        if cov == full:
            best = min(best, used)
            return
        uncovered = full & ~cov
        gain = max(balls[i] & uncovered for i in order).bit_count()
        if used + -(-uncovered.bit_count() // gain) >= best:
            return
        # branch on the uncovered point with fewest covering balls
        pt = min(
            (i for i in range(n) if uncovered >> i & 1),
            key=lambda i: sum(1 for b in balls if b >> i & 1),
        )
        for i in order:
            if balls[i] >> pt & 1:
                dfs(cov | balls[i], used + 1)

    dfs(0, 0)
    return best


def exact_packing_number(space: FiniteMetricSpace, eps: float) -> int:
    """Maximum number of points pairwise >= eps apart (exact search)."""
    n = space.point_count
    conflict = _ball_masks(space, eps, closed=False)  # d < eps blocks coexistence
    best = 0

    def dfs(size: int, cand: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        v = (cand & -cand).bit_length() - 1
        dfs(size + 1, cand & ~conflict[v] & ~(1 << v))
        dfs(size, cand & ~(1 << v))

    dfs(0, (1 << n) - 1)
    return best
