"""Measure-valued embeddings of product spaces and their distortion audits.

Each embedding sends tuples over a base space to finitely supported
measures (or finite subsets) and comes with an audit that replays the
two-sided comparison between transport distance on the image and the
product metric on the source, recording every violated inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, NotSummable, ParameterDomain
from .measures import DiscreteMeasure, pushforward
from .spaces import (
    FiniteMetricSpace,
    MatrixSpace,
    UltrametricSpace,
    LpPowerSpace,
)
from .transport import wasserstein

__all__ = [
    "DistortionReport",
    "dyadic_embedding",
    "power_embedding_bounds",
    "audit_power_embedding",
    "audit_intertwining",
    "GrayCodeMap",
    "gray_code_map",
    "audit_gray_code",
    "UltrametricEmbedding",
    "ultrametric_embedding",
    "audit_ultrametric_embedding",
    "geometric_embedding",
    "audit_geometric_embedding",
    "CubePlacement",
    "cube_packing",
    "HomotheticEmbedding",
    "homothetic_hc_embedding",
    "audit_homothetic_embedding",
    "SubsetEmbedding",
    "closed_subset_embedding",
    "audit_subset_embedding",
]

AUDIT_TOL = 1e-9


@dataclass
class DistortionReport:
    """Two-sided distortion of one embedding over a pair sample.

    ``empirical_m``/``empirical_M`` are the observed extreme ratios of image
    distance to source distance; the theoretical columns are the audited
    bounds; ``violations`` lists every pair that broke an inequality.
    """

    sample_count: int
    empirical_m: float
    empirical_M: float
    theoretical_m: float
    theoretical_M: float
    violations: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "sample_count": int(self.sample_count),
            "m_emp": float(self.empirical_m),
            "M_emp": float(self.empirical_M),
            "m_theory": float(self.theoretical_m),
            "M_theory": float(self.theoretical_M),
            "violations": [_jsonable(v) for v in self.violations],
            "extras": {k: _jsonable(v) for k, v in self.extras.items()},
        }


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _sample_tuple_pairs(space, k, count, rng):
    """Pairs of distinct k-tuples of point indices."""
    n = space.point_count
    pairs = []
    while len(pairs) < count:
        a = rng.integers(0, n, size=k)
        b = rng.integers(0, n, size=k)
        if np.any(a != b):
            pairs.append((a.astype(np.int64), b.astype(np.int64)))
    return pairs


def _tuple_lp(space, a, b, p) -> float:
    d = space.dist_pairs(a, b)
    if p == math.inf:
        return float(d.max())
    return float((d**p).sum() ** (1.0 / p))


# ---------------------------------------------------------------------------
# dyadic embedding of finite powers


def dyadic_embedding(space: FiniteMetricSpace, tuple_idx) -> DiscreteMeasure:
    """Tuple (x_1..x_k) -> normalized sum of 2^-i masses at the x_i.

    The i-th coordinate carries mass 2^-i / (1 - 2^-k); coinciding
    coordinates merge, so distinct tuples map to distinct measures.
    """
    xs = np.asarray(tuple_idx, dtype=np.int64).reshape(-1)
    k = len(xs)
    if k < 1:
        raise DomainError("tuple must have at least one coordinate")
    alpha = 1.0 / (1.0 - 2.0**-k)
    masses = alpha * np.exp2(-np.arange(1, k + 1, dtype=float))
    return DiscreteMeasure(space, xs, masses)


def power_embedding_bounds(k: int, p: float) -> tuple[float, float]:
    """(lower, upper) distortion constants of the dyadic embedding vs d_p."""
    if k < 1 or not 1 <= p < math.inf:
        raise ParameterDomain(f"need k >= 1 and finite p >= 1, got k={k}, p={p}")
    lower = 1.0 / (k * (2.0**k - 1.0) ** (1.0 / p))
    upper = (2.0 ** (k - 1) / (2.0**k - 1.0)) ** (1.0 / p)
    return lower, upper


def audit_power_embedding(
    space: FiniteMetricSpace,
    k: int,
    p: float,
    sample_pairs: int = 100,
    seed: int = 0,
    exhaustive: bool = False,
) -> DistortionReport:
    """Check both dyadic-embedding inequalities pairwise, plus a sup-metric
    lower bound, on sampled (or all) tuple pairs."""
    lower, upper = power_embedding_bounds(k, p)
    # A support path joining the worst coordinate pair can reuse target
    # atoms; it has up to 2k-1 edges, not k-1, hence the (2k-1) factor.
    # With k instead, k=2, p=2 on a circle already yields counterexamples.
    lower_sup = 1.0 / ((2.0 * k - 1.0) ** (1.0 - 1.0 / p) * (2.0**k - 1.0) ** (1.0 / p))
    if exhaustive:
        power = LpPowerSpace(space, k, p)
        tuples = power.all_points()
        pairs = [
            (tuples[i], tuples[j])
            for i in range(len(tuples))
            for j in range(i + 1, len(tuples))
        ]
    else:
        pairs = _sample_tuple_pairs(space, k, sample_pairs, np.random.default_rng(seed))

    ratios = []
    violations = []
    for a, b in pairs:
        dp = _tuple_lp(space, a, b, p)
        dsup = _tuple_lp(space, a, b, math.inf)
        if dp == 0.0:
            continue
        w, _ = wasserstein(dyadic_embedding(space, a), dyadic_embedding(space, b), p)
        ratios.append(w / dp)
        checks = [
            ("lower_p", lower * dp - w),
            ("lower_sup", lower_sup * dsup - w),
            ("upper_p", w - upper * dp),
        ]
        for name, slack in checks:
            if slack > AUDIT_TOL:
                violations.append(
                    {
                        "pair": (a.tolist(), b.tolist()),
                        "inequality": name,
                        "slack": float(slack),
                        "wasserstein": float(w),
                    }
                )
    if not ratios:
        raise DomainError("no pair with positive source distance")
    return DistortionReport(
        sample_count=len(ratios),
        empirical_m=float(min(ratios)),
        empirical_M=float(max(ratios)),
        theoretical_m=lower,
        theoretical_M=upper,
        violations=violations,
        extras={"k": k, "p": p, "lower_sup": lower_sup},
    )


def audit_intertwining(
    space: FiniteMetricSpace,
    index_map,
    k: int,
    sample_tuples: int = 50,
    seed: int = 0,
) -> float:
    """Largest atomwise gap between embed-then-push and push-then-embed.

    For a self-map phi acting coordinatewise on tuples, both routes must
    produce identical measures; returns the max absolute mass difference
    (0.0 means exact equality on every sampled tuple).
    """
    table = np.asarray(index_map, dtype=np.int64)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sample_tuples):
        xs = rng.integers(0, space.point_count, size=k).astype(np.int64)
        via_map = dyadic_embedding(space, table[xs])
        via_push = pushforward(table, dyadic_embedding(space, xs))
        if not np.array_equal(via_map.support, via_push.support):
            return math.inf
        worst = max(worst, float(np.abs(via_map.masses - via_push.masses).max()))
    return worst


# ---------------------------------------------------------------------------
# Gray-code snake through the cube of two-point measures


def _gray_word(i: int) -> int:
    return i ^ (i >> 1)


@dataclass(frozen=True)
class GrayCodeMap:
    """Reflected-binary walk {0,1}^k -> equally spaced masses on [0,1].

    ``words[i]`` is the i-th Gray word, mapped to the two-point measure
    with mass i/(2^k - 1) on one endpoint; consecutive words differ in one
    letter and consecutive masses by one grid step.
    """

    k: int
    words: tuple[int, ...]

    def value(self, position: int) -> Fraction:
        return Fraction(position, (1 << self.k) - 1)

    def position_of(self, word: int) -> int:
        return self.words.index(word)

    def measure(self, position: int, space: MatrixSpace) -> DiscreteMeasure:
        t = float(self.value(position))
        if t == 0.0:
            return DiscreteMeasure(space, [0], [1.0])
        if t == 1.0:
            return DiscreteMeasure(space, [1], [1.0])
        return DiscreteMeasure(space, [0, 1], [1.0 - t, t])


def gray_code_map(k: int) -> GrayCodeMap:
    if not 1 <= k <= 20:
        raise ParameterDomain(f"need 1 <= k <= 20, got {k}")
    return GrayCodeMap(k=k, words=tuple(_gray_word(i) for i in range(1 << k)))


def audit_gray_code(k: int, solver_pairs: int = 20, seed: int = 0) -> DistortionReport:
    """Exact distortion of the Gray walk vs Hamming distance.

    Integer arithmetic proves m = (2^k-1)^-1 and M <= 1 over all word
    pairs; a sampled handful of actual W_1 solves cross-checks that the
    two-point transport distance really is the mass gap.
    """
    gm = gray_code_map(k)
    n = 1 << k
    words = np.asarray(gm.words, dtype=np.int64)
    # all unordered pairs, integer-exact
    ii, jj = np.triu_indices(n, 1)
    steps = np.abs(ii - jj)  # |i - j| grid steps between values
    xor = words[ii] ^ words[jj]
    ham = np.zeros(len(xor), dtype=np.int64)
    v = xor.copy()
    while v.any():
        ham += v & 1
        v >>= 1
    violations = []
    if np.any(steps < ham):
        bad = int(np.argmax(steps < ham))
        violations.append(
            {
                "pair": (int(ii[bad]), int(jj[bad])),
                "inequality": "steps >= hamming",
                "slack": int(ham[bad] - steps[bad]),
            }
        )
    denom = n - 1
    # ratios are rationals with denominator <= k (2^k - 1): distinct values
    # are separated far beyond float error, so float argmin/argmax pick an
    # exact extreme, then Fraction recovers it exactly
    ratios = steps / (ham * denom)
    arg_m = int(np.argmin(ratios))
    m_exact = Fraction(int(steps[arg_m]), int(ham[arg_m]) * denom)
    arg_M = int(np.argmax(ratios))
    M_exact = Fraction(int(steps[arg_M]), int(ham[arg_M]) * denom)

    # tie the value gap to real transport on a two-point space
    two = MatrixSpace([[0.0, 1.0], [1.0, 0.0]], label="two_point", validate=False)
    rng = np.random.default_rng(seed)
    for _ in range(solver_pairs):
        a, b = rng.choice(n, size=2, replace=False)
        w, _ = wasserstein(gm.measure(int(a), two), gm.measure(int(b), two), 1.0)
        gap = abs(float(gm.value(int(a)) - gm.value(int(b))))
        if abs(w - gap) > AUDIT_TOL:
            violations.append(
                {
                    "pair": (int(a), int(b)),
                    "inequality": "W1 == value gap",
                    "slack": float(abs(w - gap)),
                }
            )
    return DistortionReport(
        sample_count=len(steps),
        empirical_m=float(m_exact),
        empirical_M=float(M_exact),
        theoretical_m=1.0 / denom,
        theoretical_M=1.0,
        violations=violations,
        extras={"k": k, "adjacent_step": 1.0 / denom},
    )


# ---------------------------------------------------------------------------
# ultrametric powers


@dataclass
class UltrametricEmbedding:
    """X^k -> measures on a deeper word space, one 1/k atom per coordinate.

    Coordinate i is prefixed with the i-th of k distinct ceil(log2 k)-letter
    words, which keeps the blocks 2^-l separated.
    """

    k: int
    base: UltrametricSpace
    target: UltrametricSpace
    prefix_bits: int

    def map(self, tuple_idx) -> DiscreteMeasure:
        xs = np.asarray(tuple_idx, dtype=np.int64).reshape(-1)
        if len(xs) != self.k:
            raise DomainError(f"expected a {self.k}-tuple, got {len(xs)}")
        prefixes = np.arange(self.k, dtype=np.int64) << self.base.depth
        return DiscreteMeasure(
            self.target, prefixes + xs, np.full(self.k, 1.0 / self.k)
        )

    def exact_factor(self, p: float) -> float:
        return self.k ** (-1.0 / p) * 2.0**-self.prefix_bits


def ultrametric_embedding(k: int, depth: int) -> UltrametricEmbedding:
    if k < 1:
        raise ParameterDomain(f"need k >= 1, got {k}")
    ell = max(1, (k - 1).bit_length()) if k > 1 else 0
    base = UltrametricSpace(depth)
    target = UltrametricSpace(depth + ell) if ell else base
    return UltrametricEmbedding(k=k, base=base, target=target, prefix_bits=ell)


def audit_ultrametric_embedding(
    k: int,
    depth: int,
    p: float,
    sample_pairs: int = 50,
    seed: int = 0,
) -> DistortionReport:
    """W_p between embedded tuples must equal k^(-1/p) 2^-l d_p exactly."""
    emb = ultrametric_embedding(k, depth)
    factor = emb.exact_factor(p)
    rng = np.random.default_rng(seed)
    pairs = _sample_tuple_pairs(emb.base, k, sample_pairs, rng)
    ratios = []
    violations = []
    for a, b in pairs:
        dp = _tuple_lp(emb.base, a, b, p)
        if dp == 0.0:
            continue
        w, _ = wasserstein(emb.map(a), emb.map(b), p)
        ratios.append(w / dp)
        if abs(w - factor * dp) > AUDIT_TOL:
            violations.append(
                {
                    "pair": (a.tolist(), b.tolist()),
                    "inequality": "W_p == factor * d_p",
                    "slack": float(abs(w - factor * dp)),
                }
            )
    return DistortionReport(
        sample_count=len(ratios),
        empirical_m=float(min(ratios)),
        empirical_M=float(max(ratios)),
        theoretical_m=factor,
        theoretical_M=factor,
        violations=violations,
        extras={"k": k, "depth": depth, "p": p, "prefix_bits": emb.prefix_bits},
    )


# ---------------------------------------------------------------------------
# geometric-mass embedding of long tuples


def geometric_embedding(space: FiniteMetricSpace, tuple_idx, beta: float) -> DiscreteMeasure:
    """Tuple (x_1..x_N) -> masses (1-b) b^(n-1), last coordinate b^(N-1)."""
    if not 0.0 < beta < 1.0:
        raise ParameterDomain(f"need beta in (0,1), got {beta}")
    xs = np.asarray(tuple_idx, dtype=np.int64).reshape(-1)
    N = len(xs)
    if N < 1:
        raise DomainError("tuple must have at least one coordinate")
    masses = (1.0 - beta) * beta ** np.arange(N, dtype=float)
    masses[-1] = beta ** (N - 1)
    return DiscreteMeasure(space, xs, masses)


def geometric_embedding_constants(beta: float, eps: float) -> tuple[float, float, float]:
    """(A, B, lambda): the audited lower bound is sqrt(A/B) d_(lambda^n)."""
    if not 0.0 < beta < 1.0:
        raise ParameterDomain(f"need beta in (0,1), got {beta}")
    if not 0.0 < eps < 1.0:
        raise ParameterDomain(f"need eps in (0,1), got {eps}")
    A = 1.0 - beta * (1.5 + 0.5 / eps)
    B = 0.5 * beta * (1.0 - eps)
    if A <= 0.0:
        raise ParameterDomain(
            f"no positive constant: beta={beta}, eps={eps} give A={A}; need eps > beta/(2-3 beta)"
        )
    return A, B, math.sqrt(B)


def audit_geometric_embedding(
    space: FiniteMetricSpace,
    beta: float,
    eps: float,
    depth: int,
    sample_pairs: int = 50,
    seed: int = 0,
) -> DistortionReport:
    """Check W_2 >= sqrt(A/B) d_(lambda^n) on sampled depth-tuples.

    The comparison metric is the truncated weighted-l2 metric with weights
    lambda^n, lambda = sqrt(B); repeating the last coordinate shows the
    truncated bound is implied by the full one.
    """
    A, B, lam = geometric_embedding_constants(beta, eps)
    factor = math.sqrt(A / B)
    rng = np.random.default_rng(seed)
    pairs = _sample_tuple_pairs(space, depth, sample_pairs, rng)
    weights2 = B ** np.arange(1, depth + 1, dtype=float)  # lambda^(2n)
    ratios = []
    violations = []
    for a, b in pairs:
        d = space.dist_pairs(a, b)
        dl = math.sqrt(float((weights2 * d * d).sum()))
        if dl == 0.0:
            continue
        w, _ = wasserstein(
            geometric_embedding(space, a, beta),
            geometric_embedding(space, b, beta),
            2.0,
        )
        ratios.append(w / dl)
        if factor * dl - w > AUDIT_TOL:
            violations.append(
                {
                    "pair": (a.tolist(), b.tolist()),
                    "inequality": "W_2 >= sqrt(A/B) d_lambda",
                    "slack": float(factor * dl - w),
                }
            )
    if not ratios:
        raise DomainError("no pair with positive weighted distance")
    return DistortionReport(
        sample_count=len(ratios),
        empirical_m=float(min(ratios)),
        empirical_M=float(max(ratios)),
        theoretical_m=factor,
        theoretical_M=math.inf,
        violations=violations,
        extras={"A": A, "B": B, "lambda": lam, "beta": beta, "eps": eps},
    )


# ---------------------------------------------------------------------------
# cube packings


@dataclass
class CubePlacement:
    """Axis-aligned homothetic cubes inside [0,1]^d.

    ``offsets[i]`` is the lower corner of the i-th cube, ``sides[i]`` its
    side K * c_i in input order.  Plain placements may touch along faces;
    separation placements keep every inter-cube gap at least the largest
    cube diameter.
    """

    dim: int
    offsets: np.ndarray
    sides: np.ndarray
    K: float
    separated: bool

    def max_diameter(self) -> float:
        return float(self.sides.max()) * math.sqrt(self.dim)

    def pair_gap(self, i: int, j: int) -> float:
        lo_i, hi_i = self.offsets[i], self.offsets[i] + self.sides[i]
        lo_j, hi_j = self.offsets[j], self.offsets[j] + self.sides[j]
        g = np.maximum(0.0, np.maximum(lo_i - hi_j, lo_j - hi_i))
        return float(np.sqrt((g * g).sum()))

    def min_gap(self) -> float:
        n = len(self.sides)
        return min(
            (self.pair_gap(i, j) for i in range(n) for j in range(i + 1, n)),
            default=math.inf,
        )

    def interiors_disjoint(self) -> bool:
        n = len(self.sides)
        for i in range(n):
            for j in range(i + 1, n):
                lo_i, hi_i = self.offsets[i], self.offsets[i] + self.sides[i]
                lo_j, hi_j = self.offsets[j], self.offsets[j] + self.sides[j]
                if np.all(np.minimum(hi_i, hi_j) - np.maximum(lo_i, lo_j) > 1e-15):
                    return False
        return True

    def inside_unit_cube(self, tol: float = 1e-12) -> bool:
        return bool(
            np.all(self.offsets >= -tol)
            and np.all(self.offsets + self.sides[:, None] <= 1.0 + tol)
        )


def _pack_sorted(c: np.ndarray, d: int) -> tuple[np.ndarray, float]:
    """Offsets and scale for non-increasing sides with ||c||_d <= 1.

    Returns (offsets, s) with disjoint cubes of side s*c_i in [0,1]^d.
    d = 1 lays intervals end to end; d >= 2 groups sides into blocks with
    sum c^(d-1) <= 2, packs each block in the facet, and stacks slices of
    height equal to each block's largest side.
    """
    n = len(c)
    if d == 1:
        total = float(c.sum())
        s = min(1.0, 1.0 / total)
        starts = np.concatenate([[0.0], np.cumsum(s * c)[:-1]])
        return starts[:, None], s

    blocks: list[list[int]] = []
    acc = 0.0
    for i in range(n):
        w = float(c[i]) ** (d - 1)
        if blocks and acc + w <= 2.0:
            blocks[-1].append(i)
            acc += w
        else:
            blocks.append([i])
            acc = w

    heights = np.asarray([float(c[b[0]]) for b in blocks])
    v = min(1.0, 1.0 / float(heights.sum()))
    scale = v
    offsets = np.zeros((n, d))
    z = 0.0
    for b, h in zip(blocks, heights):
        cb = c[b]
        norm = float((cb ** (d - 1)).sum()) ** (1.0 / (d - 1))
        sub_off, sub_s = _pack_sorted(cb / norm, d - 1)
        scale = min(scale, sub_s / norm)
        offsets[b, : d - 1] = sub_off
        offsets[b, d - 1] = z
        z += v * h
    return offsets, scale


def cube_packing(
    sides,
    dim: int,
    separation: bool = False,
    budget: float = 1e6,
) -> CubePlacement:
    """Pack homothetic cubes with the given side ratios into [0,1]^d.

    All cubes share one homothety constant K (actual side K * c_i).  With
    separation=True the packing is shrunk about cube centers until the
    smallest inter-cube gap is positive and at least the largest cube
    diameter.
    """
    c = np.asarray(sides, dtype=float)
    if c.ndim != 1 or len(c) == 0:
        raise DomainError("sides must be a non-empty 1-D sequence")
    if np.any(c <= 0) or not np.all(np.isfinite(c)):
        raise DomainError("sides must be positive and finite")
    if dim < 1:
        raise ParameterDomain(f"dimension must be >= 1, got {dim}")
    power_sum = float((c**dim).sum())
    if power_sum > budget:
        raise NotSummable(f"sum of sides^d = {power_sum} exceeds budget {budget}")

    order = np.argsort(-c, kind="stable")
    norm = max(1.0, power_sum ** (1.0 / dim))
    offsets_sorted, s = _pack_sorted(c[order] / norm, dim)
    K = s / norm
    offsets = np.empty_like(offsets_sorted)
    offsets[order] = offsets_sorted
    placement = CubePlacement(
        dim=dim, offsets=offsets, sides=K * c, K=K, separated=False
    )
    if not separation:
        return placement

    if len(c) == 1:
        placement.separated = True
        return placement
    for _ in range(200):
        gap = placement.min_gap()
        if gap > 0.0 and gap >= placement.max_diameter():
            placement.separated = True
            return placement
        centers = placement.offsets + placement.sides[:, None] / 2.0
        placement.sides = placement.sides / 2.0
        placement.K = placement.K / 2.0
        placement.offsets = centers - placement.sides[:, None] / 2.0
    raise RuntimeError("separation shrink did not converge")


# ---------------------------------------------------------------------------
# homothetic embedding of a Hilbert cube into one cube


@dataclass
class HomotheticEmbedding:
    """Truncated HC(grid, a) -> measures on separated cubes in [0,1]^d.

    Factor n maps homothetically into its own cube (side K c_n) carrying
    mass b_n / S, with b_n^(1/2) c_n = a_n; the factor products make
    W_2 = (K / sqrt(S)) d_a exact, witnessed by the diagonal plan.
    """

    weights: np.ndarray  # a_n
    b: np.ndarray
    c: np.ndarray
    mass_norm: float  # S = sum b_n
    grid: FiniteMetricSpace
    placement: CubePlacement
    dim: int

    @property
    def distance_factor(self) -> float:
        return self.placement.K / math.sqrt(self.mass_norm)

    def image_atoms(self, tuple_idx) -> tuple[np.ndarray, np.ndarray]:
        """(coords, masses): one atom per factor at its cube's grid point."""
        xs = np.asarray(tuple_idx, dtype=np.int64).reshape(-1)
        if len(xs) != len(self.weights):
            raise DomainError(f"expected a {len(self.weights)}-tuple")
        base = self.grid.coordinates(xs)  # (N, dim) in [0,1]^dim
        coords = self.placement.offsets + self.placement.sides[:, None] * base
        return coords, self.b / self.mass_norm


def homothetic_hc_embedding(
    weights,
    dim: int,
    resolution: int,
) -> HomotheticEmbedding:
    """Build the per-factor cube layout for weights a_n on a grid base."""
    from .spaces import GridSpace

    a = np.asarray(weights, dtype=float)
    if np.any(a <= 0) or np.any(np.diff(a) > 0):
        raise ParameterDomain("weights must be positive and non-increasing")
    b = a ** (2.0 * dim / (dim + 2.0))
    c = a ** (2.0 / (dim + 2.0))
    placement = cube_packing(c, dim, separation=True)
    return HomotheticEmbedding(
        weights=a,
        b=b,
        c=c,
        mass_norm=float(b.sum()),
        grid=GridSpace(dim, resolution),
        placement=placement,
        dim=dim,
    )


def audit_homothetic_embedding(
    emb: HomotheticEmbedding,
    sample_pairs: int = 100,
    seed: int = 0,
    rtol: float = 0.02,
) -> DistortionReport:
    """Solve W_2 between embedded pairs; ratio to d_a must equal the factor
    and the optimal plan must stay cube-diagonal."""
    N = len(emb.weights)
    rng = np.random.default_rng(seed)
    pairs = _sample_tuple_pairs(emb.grid, N, sample_pairs, rng)
    factor = emb.distance_factor
    ratios = []
    violations = []
    for a, b in pairs:
        base_d = emb.grid.dist_pairs(a, b)
        da = math.sqrt(float((emb.weights**2 * base_d * base_d).sum()))
        if da == 0.0:
            continue
        ca, ma = emb.image_atoms(a)
        cb, mb = emb.image_atoms(b)
        cloud = MatrixSpace.from_coords(np.concatenate([ca, cb]), "image")
        mu = DiscreteMeasure(cloud, np.arange(N), ma)
        nu = DiscreteMeasure(cloud, np.arange(N, 2 * N), mb)
        w, plan = wasserstein(mu, nu, 2.0)
        ratios.append(w / da)
        if abs(w - factor * da) > rtol * factor * da + AUDIT_TOL:
            violations.append(
                {
                    "pair": (a.tolist(), b.tolist()),
                    "inequality": "W_2 == K/sqrt(S) d_a",
                    "slack": float(abs(w - factor * da)),
                }
            )
        if np.any(plan.dst - N != plan.src):
            violations.append(
                {
                    "pair": (a.tolist(), b.tolist()),
                    "inequality": "diagonal plan",
                    "slack": float(
                        plan.mass[plan.dst - N != plan.src].sum()
                    ),
                }
            )
    if not ratios:
        raise DomainError("no pair with positive weighted distance")
    return DistortionReport(
        sample_count=len(ratios),
        empirical_m=float(min(ratios)),
        empirical_M=float(max(ratios)),
        theoretical_m=factor,
        theoretical_M=factor,
        violations=violations,
        extras={
            "K": emb.placement.K,
            "mass_norm": emb.mass_norm,
            "min_gap": emb.placement.min_gap(),
            "max_diameter": emb.placement.max_diameter(),
        },
    )


# ---------------------------------------------------------------------------
# closed-subset embedding of a Banach cube


@dataclass
class SubsetEmbedding:
    """Truncated BC(grid, (n^-d')) -> one image point per separated cube.

    Hausdorff distance between images equals K times the sup metric
    because inter-cube gaps dominate every within-cube move.
    """

    d_prime: float
    weights: np.ndarray  # n^-d'
    grid: FiniteMetricSpace
    placement: CubePlacement
    dim: int

    def image_coords(self, tuple_idx) -> np.ndarray:
        xs = np.asarray(tuple_idx, dtype=np.int64).reshape(-1)
        if len(xs) != len(self.weights):
            raise DomainError(f"expected a {len(self.weights)}-tuple")
        base = self.grid.coordinates(xs)
        return self.placement.offsets + self.placement.sides[:, None] * base


def closed_subset_embedding(
    dim: int,
    d_prime: float,
    depth: int,
    resolution: int,
) -> SubsetEmbedding:
    from .spaces import GridSpace

    if d_prime <= 0:
        raise ParameterDomain(f"need d' > 0, got {d_prime}")
    n = np.arange(1, depth + 1, dtype=float)
    weights = n ** (-d_prime)
    placement = cube_packing(weights, dim, separation=True)
    return SubsetEmbedding(
        d_prime=d_prime,
        weights=weights,
        grid=GridSpace(dim, resolution),
        placement=placement,
        dim=dim,
    )


def audit_subset_embedding(
    emb: SubsetEmbedding,
    sample_pairs: int = 100,
    seed: int = 0,
    rtol: float = 0.02,
) -> DistortionReport:
    """Hausdorff distance between image sets vs K * sup_n w_n d(x_n, y_n)."""
    from .subsets import FiniteSubset, hausdorff_distance

    N = len(emb.weights)
    rng = np.random.default_rng(seed)
    pairs = _sample_tuple_pairs(emb.grid, N, sample_pairs, rng)
    factor = emb.placement.K
    ratios = []
    violations = []
    for a, b in pairs:
        base_d = emb.grid.dist_pairs(a, b)
        dsup = float((emb.weights * base_d).max())
        if dsup == 0.0:
            continue
        ca = emb.image_coords(a)
        cb = emb.image_coords(b)
        cloud = MatrixSpace.from_coords(np.concatenate([ca, cb]), "image")
        dh = hausdorff_distance(
            FiniteSubset(cloud, np.arange(N)),
            FiniteSubset(cloud, np.arange(N, 2 * N)),
        )
        ratios.append(dh / dsup)
        if abs(dh - factor * dsup) > rtol * factor * dsup + AUDIT_TOL:
            violations.append(
                {
                    "pair": (a.tolist(), b.tolist()),
                    "inequality": "d_H == K sup-metric",
                    "slack": float(abs(dh - factor * dsup)),
                }
            )
    if not ratios:
        raise DomainError("no pair with positive sup distance")
    return DistortionReport(
        sample_count=len(ratios),
        empirical_m=float(min(ratios)),
        empirical_M=float(max(ratios)),
        theoretical_m=factor,
        theoretical_M=factor,
        violations=violations,
        extras={"K": factor, "d_prime": emb.d_prime},
    )
