"""Orbit metrics, separated-set growth, entropy slopes, and the
pushforward dimension-dial experiment.

Separated counts come from the same greedy as the static covering module,
run on the orbit (max over the first n iterates) metric.  Circle rotations
of multiplication maps get an exact fast path via translation invariance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .covering import maximal_packing
from .embeddings import dyadic_embedding, power_embedding_bounds
from .errors import DomainError, ParameterDomain
from .spaces import CircleSpace, FiniteMetricSpace, _IndexedSpace
from .transport import wasserstein

__all__ = [
    "DynamicalMap",
    "multiplication_map",
    "identity_map",
    "map_from_function",
    "BowenSpace",
    "bowen_metric",
    "separated_count",
    "DynamicsProfile",
    "separation_profile",
    "EntropyEstimate",
    "entropy_estimate",
    "MmdimTable",
    "mmdim_experiment",
    "SeparationAudit",
    "audit_pushforward_separation",
]


@dataclass
class DynamicalMap:
    """A self-map of an indexed space as an index table.

    ``exact`` is False when the map came from rounding a pointwise function
    to the nearest grid point; ``multiplier`` unlocks the circle fast path.
    """

    table: np.ndarray
    label: str
    exact: bool = True
    multiplier: int | None = None

    def iterate(self, idx: np.ndarray, times: int) -> np.ndarray:
        out = np.asarray(idx, dtype=np.int64)
        for _ in range(times):
            out = self.table[out]
        return out


def multiplication_map(space: CircleSpace, factor: int) -> DynamicalMap:
    """x -> factor x mod 1 on the circle grid (exact for integer factors)."""
    if not isinstance(space, CircleSpace):
        raise DomainError("multiplication maps need a circle space")
    if factor < 1:
        raise ParameterDomain(f"factor must be >= 1, got {factor}")
    r = space.resolution
    table = (factor * np.arange(r, dtype=np.int64)) % r
    return DynamicalMap(
        table=table, label=f"x{factor}", exact=True, multiplier=factor
    )


def identity_map(space: FiniteMetricSpace) -> DynamicalMap:
    table = np.arange(space.point_count, dtype=np.int64)
    mult = 1 if isinstance(space, CircleSpace) else None
    return DynamicalMap(table=table, label="identity", exact=True, multiplier=mult)


def map_from_function(space, fn, label: str = "custom") -> DynamicalMap:
    """Round a coordinate map to the nearest grid point (marked inexact)."""
    if isinstance(space, CircleSpace):
        pos = space.positions(space.all_points())
        img = np.mod(np.asarray([fn(x) for x in pos], dtype=float), 1.0)
        table = np.mod(np.rint(img * space.resolution).astype(np.int64), space.resolution)
        return DynamicalMap(table=table, label=label, exact=False, multiplier=None)
    raise DomainError("function rounding is only provided for circle spaces")


class BowenSpace(_IndexedSpace):
    """Same points, metric max_{0<=t<=n} d(phi^t x, phi^t y)."""

    def __init__(self, base: FiniteMetricSpace, dmap: DynamicalMap, n: int):
        if not base.is_indexed:
            raise DomainError("orbit metrics need an indexed base space")
        if n < 0:
            raise ParameterDomain(f"n must be >= 0, got {n}")
        if dmap.table.shape != (base.point_count,):
            raise DomainError("map table does not match the space")
        self.base = base
        self.dmap = dmap
        self.n = n
        self.point_count = base.point_count
        self.label = f"bowen({base.label},{dmap.label},{n})"
        orbits = [np.arange(base.point_count, dtype=np.int64)]
        for _ in range(n):
            orbits.append(dmap.table[orbits[-1]])
        self._orbits = np.stack(orbits)  # (n+1, N)

    def diameter(self) -> float:
        # every orbit term is <= the base diameter, and t = 0 attains it
        return self.base.diameter()

    def dist_one_many(self, p, handles) -> np.ndarray:
        Q = self._stack(handles)
        out = np.zeros(len(Q), dtype=float)
        for t in range(self.n + 1):
            np.maximum(
                out,
                self.base.dist_one_many(self._orbits[t, int(p)], self._orbits[t, Q]),
                out=out,
            )
        return out

    def dist_pairs(self, P, Q) -> np.ndarray:
        P, Q = self._stack(P), self._stack(Q)
        out = np.zeros(len(Q), dtype=float)
        for t in range(self.n + 1):
            np.maximum(
                out,
                self.base.dist_pairs(self._orbits[t, P], self._orbits[t, Q]),
                out=out,
            )
        return out


def bowen_metric(space, dmap: DynamicalMap, n: int) -> BowenSpace:
    return BowenSpace(space, dmap, n)


def _circle_fast_count(space: CircleSpace, factor: int, n: int, eps: float) -> int:
    """Greedy separated count via translation invariance of x -> factor x.

    The orbit distance depends only on the index difference, so one pass
    over differences gives the covered set of every center.
    """
    r = space.resolution
    delta = np.arange(r, dtype=np.int64)
    cur = delta.copy()
    worst = np.minimum(cur, r - cur) / r
    for _ in range(n):
        cur = (cur * factor) % r
        np.maximum(worst, np.minimum(cur, r - cur) / r, out=worst)
    bad = np.flatnonzero(worst < eps)  # covered offsets, includes 0
    avail = np.ones(r, dtype=bool)
    count = 0
    for c in range(r):
        if avail[c]:
            count += 1
            avail[(c + bad) % r] = False
    return count


def separated_count(
    space: FiniteMetricSpace,
    dmap: DynamicalMap,
    n: int,
    eps: float,
) -> int:
    """Size of the greedy maximal (n, eps)-separated set (full enumeration)."""
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if isinstance(space, CircleSpace) and dmap.multiplier is not None:
        return _circle_fast_count(space, dmap.multiplier, n, eps)
    bowen = BowenSpace(space, dmap, n)
    return len(maximal_packing(bowen, eps, points=bowen.all_points()))


@dataclass
class DynamicsProfile:
    space_label: str
    map_label: str
    point_count: int
    rows: list  # (n, eps, count)

    def counts_for(self, eps: float) -> list:
        return sorted((n, c) for n, e, c in self.rows if e == eps)

    def epsilons(self) -> list:
        return sorted({e for _, e, _ in self.rows}, reverse=True)


def separation_profile(
    space: FiniteMetricSpace,
    dmap: DynamicalMap,
    n_grid,
    eps_grid,
    threads: int = 1,
) -> DynamicsProfile:
    tasks = [
        (n, eps)
        for eps in sorted(set(float(e) for e in eps_grid), reverse=True)
        for n in sorted(set(int(n) for n in n_grid))
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(
                pool.map(lambda t: separated_count(space, dmap, t[0], t[1]), tasks)
            )
    else:
        counts = [separated_count(space, dmap, n, eps) for n, eps in tasks]
    rows = [(n, eps, c) for (n, eps), c in zip(tasks, counts)]
    return DynamicsProfile(
        space_label=space.label,
        map_label=dmap.label,
        point_count=space.point_count,
        rows=rows,
    )


@dataclass
class EntropyEstimate:
    value: float
    per_eps: list  # (eps, slope, rows_used)
    warnings: list = field(default_factory=list)
    profile: DynamicsProfile | None = None


def entropy_estimate(
    profile: DynamicsProfile,
    saturation_fraction: float = 0.5,
) -> EntropyEstimate:
    """Median over eps of the log-count growth slope in n.

    Rows whose count reaches saturation_fraction of the space are dropped
    first (the grid has run out of resolution, which flattens growth); the
    slope then fits the top half of the surviving n values.
    """
    warnings = []
    per_eps = []
    cap = saturation_fraction * profile.point_count
    for eps in profile.epsilons():
        rows = profile.counts_for(eps)
        usable = [(n, c) for n, c in rows if c < cap]
        if len(usable) < len(rows):
            warnings.append(
                f"InsufficientGrowth: counts saturate at eps={eps:g} "
                f"({len(rows) - len(usable)} rows at resolution cap)"
            )
        if len(usable) < 2:
            continue
        tail = usable[-max(2, len(usable) // 2) :]
        ns = np.asarray([n for n, _ in tail], dtype=float)
        logs = np.asarray([math.log(c) for _, c in tail])
        slope = float(np.polyfit(ns, logs, 1)[0])
        per_eps.append((eps, slope, len(tail)))
    if not per_eps:
        return EntropyEstimate(
            value=math.nan,
            per_eps=[],
            warnings=warnings + ["no eps level kept two usable rows"],
            profile=profile,
        )
    slopes = sorted(s for _, s, _ in per_eps)
    value = float(np.median(slopes))
    return EntropyEstimate(value=value, per_eps=per_eps, warnings=warnings, profile=profile)


# ---------------------------------------------------------------------------
# pushforward dimension dial


@dataclass
class MmdimTable:
    beta: float
    p: float
    rows: list  # (n, eps, k, eta, count, ratio)
    warnings: list = field(default_factory=list)

    def ratio_at(self, n: int, eps: float) -> float:
        for rn, re, _, _, _, ratio in self.rows:
            if rn == n and re == eps:
                return ratio
        raise KeyError((n, eps))


def mmdim_experiment(
    space: FiniteMetricSpace,
    dmap: DynamicalMap,
    p: float,
    eps_grid,
    n_grid,
    beta: float = 0.9,
) -> MmdimTable:
    """Tuple-length dial: k grows like beta p log2(1/eps), and the measured
    ratio k log(count) / (n log(1/eps)) tracks beta p as eps shrinks.

    Counts are separated counts of the base system at the blown-up radius
    eta = k (2^k - 1)^(1/p) eps implied by the embedding's lower constant.
    """
    if not 0 < beta <= 1:
        raise ParameterDomain(f"beta must be in (0,1], got {beta}")
    if not 1 <= p < math.inf:
        raise ParameterDomain(f"p must be in [1, inf), got {p}")
    rows = []
    warnings = []
    diam = space.diameter()
    for eps in sorted(set(float(e) for e in eps_grid), reverse=True):
        k = math.floor(beta * p * math.log2(1.0 / eps))
        if k < 1:
            warnings.append(f"eps={eps:g}: k floor is below 1, row skipped")
            continue
        lower, _ = power_embedding_bounds(k, p)
        eta = eps / lower  # k (2^k-1)^(1/p) eps
        if eta > diam:
            warnings.append(
                f"eps={eps:g}: blown-up radius {eta:g} exceeds diameter {diam:g}"
            )
        for n in sorted(set(int(n) for n in n_grid)):
            if n < 1:
                continue
            count = separated_count(space, dmap, n, min(eta, diam + 1.0))
            ratio = k * math.log(count) / (n * math.log(1.0 / eps)) if count >= 1 else 0.0
            rows.append((n, eps, k, eta, count, ratio))
    return MmdimTable(beta=beta, p=p, rows=rows, warnings=warnings)


@dataclass
class SeparationAudit:
    passed: bool
    min_margin: float
    pairs_checked: int


def audit_pushforward_separation(
    space: FiniteMetricSpace,
    dmap: DynamicalMap,
    p: float,
    k: int,
    n: int,
    eps: float,
    max_pairs: int = 20,
    seed: int = 0,
) -> SeparationAudit:
    """Distinct tuples over an (n, eta)-separated set must see their
    embedded orbits separate by eps in W_p at some time <= n."""
    lower, _ = power_embedding_bounds(k, p)
    eta = eps / lower
    bowen = BowenSpace(space, dmap, n)
    base_sep = maximal_packing(bowen, eta, points=bowen.all_points())
    if len(base_sep) < 2:
        raise DomainError("separated base set too small for distinct tuples")
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < max_pairs:
        a = base_sep[rng.integers(0, len(base_sep), size=k)]
        b = base_sep[rng.integers(0, len(base_sep), size=k)]
        if np.any(a != b):
            pairs.append((a, b))
    min_margin = math.inf
    for a, b in pairs:
        best = 0.0
        xs, ys = a.copy(), b.copy()
        for _ in range(n + 1):
            w, _ = wasserstein(
                dyadic_embedding(space, xs), dyadic_embedding(space, ys), p
            )
            best = max(best, w)
            xs, ys = dmap.table[xs], dmap.table[ys]
        min_margin = min(min_margin, best - eps)
    return SeparationAudit(
        passed=min_margin >= -1e-9,
        min_margin=float(min_margin),
        pairs_checked=len(pairs),
    )
