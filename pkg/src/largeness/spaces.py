"""Finite metric spaces: indexed ground spaces and descriptor-based products.

Points are *handles*: plain integers for indexed spaces (matrix, grid,
circle, ultrametric) and 1-D integer arrays of base indices for product
spaces (finite powers, truncated Hilbert/Banach cubes).  Arrays of handles
are 1-D int arrays for indexed spaces and 2-D ``(m, depth)`` arrays for
products.  Distances are computed from coordinates on demand; no space
materializes a full distance matrix except :class:`MatrixSpace`, whose
matrix is its definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .errors import AxiomViolation, DomainError, ParameterDomain, SizeLimit

__all__ = [
    "FiniteMetricSpace",
    "MatrixSpace",
    "GridSpace",
    "CircleSpace",
    "UltrametricSpace",
    "ScaledSpace",
    "LpPowerSpace",
    "HilbertCubeSpace",
    "BanachCubeSpace",
    "WeightSequence",
    "ValidationReport",
    "build_space",
    "grid_cube",
    "circle_space",
    "ultrametric_space",
    "power_space",
    "scale_space",
    "hilbert_cube",
    "banach_cube",
    "validate_metric",
    "parse_space_spec",
    "parse_weight_spec",
]

# Enumeration budget for indexed spaces (indices only, never a matrix) and
# the much smaller default budget for materializing product tuples.
DEFAULT_INDEX_BUDGET = 1 << 22
DEFAULT_PRODUCT_BUDGET = 4096
ATOL = 1e-9


class FiniteMetricSpace:
    """Common interface over indexed and product spaces."""

    label: str = "space"
    point_count: int = 0
    is_indexed: bool = True

    def diameter(self) -> float:
        raise NotImplementedError

    def dist_one_many(self, p, handles) -> np.ndarray:
        """Distances from one point to a stacked array of points."""
        raise NotImplementedError

    def dist_pairs(self, P, Q) -> np.ndarray:
        """Elementwise distances between two equally long handle arrays."""
        raise NotImplementedError

    def dist(self, p, q) -> float:
        return float(self.dist_one_many(p, self._stack([q]))[0])

    def all_points(self, limit: int | None = None) -> np.ndarray:
        raise NotImplementedError

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def _stack(self, handles) -> np.ndarray:
        arr = np.asarray(handles, dtype=np.int64)
        want = 1 if self.is_indexed else 2
        if arr.ndim != want:
            raise DomainError(
                f"{self.label}: handle array must be {want}-D, got shape {arr.shape}"
            )
        return arr

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{type(self).__name__} {self.label} n={self.point_count}>"


class _IndexedSpace(FiniteMetricSpace):
    is_indexed = True

    def all_points(self, limit: int | None = None) -> np.ndarray:
        cap = DEFAULT_INDEX_BUDGET if limit is None else limit
        if self.point_count > cap:
            raise SizeLimit(
                f"{self.label}: {self.point_count} points exceed budget {cap}"
            )
        return np.arange(self.point_count, dtype=np.int64)

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        n = self.point_count
        if count >= n:
            return np.arange(n, dtype=np.int64)
        if n <= DEFAULT_INDEX_BUDGET:
            idx = rng.choice(n, size=count, replace=False)
        else:
            # Too many points for a permutation draw; accept a few duplicates'
            # worth of shrinkage after dedup.
            idx = np.unique(rng.integers(0, n, size=count))
        return np.sort(idx.astype(np.int64))


class MatrixSpace(_IndexedSpace):
    """A space defined by an explicit, validated distance matrix."""

    def __init__(self, matrix, label: str = "matrix", validate: bool = True):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"distance matrix must be square, got {m.shape}")
        if m.shape[0] == 0:
            raise DomainError("distance matrix must be non-empty")
        if not np.all(np.isfinite(m)):
            raise DomainError("distance matrix contains non-finite entries")
        self.matrix = m
        self.label = label
        self.point_count = m.shape[0]
        if validate:
            _validate_matrix(m)

    @classmethod
    def from_coords(cls, coords, label: str = "points") -> "MatrixSpace":
        """Euclidean point cloud; exact by construction, so not re-validated."""
        c = np.asarray(coords, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        diff = c[:, None, :] - c[None, :, :]
        m = np.sqrt((diff * diff).sum(axis=2))
        return cls(m, label=label, validate=False)

    def diameter(self) -> float:
        return float(self.matrix.max())

    def dist_one_many(self, p, handles) -> np.ndarray:
        return self.matrix[int(p), self._stack(handles)]

    def dist_pairs(self, P, Q) -> np.ndarray:
        return self.matrix[self._stack(P), self._stack(Q)]


class GridSpace(_IndexedSpace):
    """Uniform grid on [0,1]^dim with step 1/(resolution-1), Euclidean metric."""

    def __init__(self, dim: int, resolution: int, index_budget: int | None = None):
        if dim < 1:
            raise ParameterDomain(f"grid dimension must be >= 1, got {dim}")
        if resolution < 2:
            raise ParameterDomain(f"grid resolution must be >= 2, got {resolution}")
        count = resolution**dim
        cap = DEFAULT_INDEX_BUDGET if index_budget is None else index_budget
        if count > cap:
            raise SizeLimit(f"grid_cube({dim},{resolution}) = {count} points > budget {cap}")
        self.dim = dim
        self.resolution = resolution
        self.point_count = count
        self.label = f"grid({dim},{resolution})"
        self._coords: np.ndarray | None = None

    def coordinates(self, handles) -> np.ndarray:
        """Grid positions in [0,1]^dim for an array of indices."""
        idx = self._stack(handles)
        if self._coords is None:
            multi = np.stack(
                np.unravel_index(
                    np.arange(self.point_count), (self.resolution,) * self.dim
                ),
                axis=1,
            )
            self._coords = multi / (self.resolution - 1)
        return self._coords[idx]

    def diameter(self) -> float:
        return math.sqrt(self.dim)

    def dist_one_many(self, p, handles) -> np.ndarray:
        a = self.coordinates(np.asarray([int(p)], dtype=np.int64))[0]
        B = self.coordinates(handles)
        d = B - a
        return np.sqrt((d * d).sum(axis=1))

    def dist_pairs(self, P, Q) -> np.ndarray:
        d = self.coordinates(P) - self.coordinates(Q)
        return np.sqrt((d * d).sum(axis=1))


class CircleSpace(_IndexedSpace):
    """resolution equally spaced points on a circle of circumference 1, arc metric."""

    def __init__(self, resolution: int):
        if resolution < 2:
            raise ParameterDomain(f"circle resolution must be >= 2, got {resolution}")
        self.resolution = resolution
        self.point_count = resolution
        self.label = f"circle({resolution})"

    def positions(self, handles) -> np.ndarray:
        return self._stack(handles) / self.resolution

    def diameter(self) -> float:
        return (self.resolution // 2) / self.resolution

    def _arc(self, delta: np.ndarray) -> np.ndarray:
        delta = np.abs(delta)
        return np.minimum(delta, self.resolution - delta) / self.resolution

    def dist_one_many(self, p, handles) -> np.ndarray:
        return self._arc(self._stack(handles) - int(p))

    def dist_pairs(self, P, Q) -> np.ndarray:
        return self._arc(self._stack(P) - self._stack(Q))


class UltrametricSpace(_IndexedSpace):
    """Binary words of a fixed depth, d(x,y) = 2^-(first differing letter).

    A word's first letter is the most significant bit of its index, so the
    cylinder of words sharing a prefix is a contiguous index range.
    """

    def __init__(self, depth: int):
        if not 1 <= depth <= 32:
            raise ParameterDomain(f"ultrametric depth must be in [1, 32], got {depth}")
        self.depth = depth
        self.point_count = 1 << depth
        self.label = f"ultrametric({depth})"

    def diameter(self) -> float:
        return 0.5

    def _dist_from_xor(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(v.shape, dtype=float)
        nz = v != 0
        if nz.any():
            # highest set bit h: first differing letter is depth - h (1-based)
            h = np.floor(np.log2(v[nz].astype(float)))
            out[nz] = np.exp2(h - self.depth)
        return out

    def dist_one_many(self, p, handles) -> np.ndarray:
        return self._dist_from_xor(np.bitwise_xor(self._stack(handles), int(p)))

    def dist_pairs(self, P, Q) -> np.ndarray:
        return self._dist_from_xor(np.bitwise_xor(self._stack(P), self._stack(Q)))


class ScaledSpace(FiniteMetricSpace):
    """The same points with every distance multiplied by a positive factor."""

    def __init__(self, inner: FiniteMetricSpace, factor: float):
        if not (factor > 0 and math.isfinite(factor)):
            raise ParameterDomain(f"scale factor must be positive and finite, got {factor}")
        self.inner = inner
        self.factor = float(factor)
        self.point_count = inner.point_count
        self.is_indexed = inner.is_indexed
        self.label = f"{factor}*{inner.label}"

    def diameter(self) -> float:
        return self.factor * self.inner.diameter()

    def dist_one_many(self, p, handles) -> np.ndarray:
        return self.factor * self.inner.dist_one_many(p, handles)

    def dist_pairs(self, P, Q) -> np.ndarray:
        return self.factor * self.inner.dist_pairs(P, Q)

    def all_points(self, limit: int | None = None) -> np.ndarray:
        return self.inner.all_points(limit)

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return self.inner.sample_points(count, rng)


class _ProductSpace(FiniteMetricSpace):
    """Base for descriptor spaces: points are rows of base-space indices."""

    is_indexed = False

    def __init__(self, base: FiniteMetricSpace, depth: int, product_budget: int | None):
        if not base.is_indexed:
            raise DomainError("product constructions need an indexed base space")
        if depth < 1:
            raise ParameterDomain(f"depth must be >= 1, got {depth}")
        self.base = base
        self.depth = depth
        self.point_count = base.point_count**depth
        self.product_budget = (
            DEFAULT_PRODUCT_BUDGET if product_budget is None else product_budget
        )

    def _combine(self, per_coord: np.ndarray) -> np.ndarray:
        """Fold an (m, depth) array of base distances into product distances."""
        raise NotImplementedError

    def dist_pairs(self, P, Q) -> np.ndarray:
        P = self._stack(P)
        Q = self._stack(Q)
        if P.shape != Q.shape:
            raise DomainError(f"handle shapes differ: {P.shape} vs {Q.shape}")
        per = np.empty(P.shape, dtype=float)
        for i in range(self.depth):
            per[:, i] = self.base.dist_pairs(P[:, i], Q[:, i])
        return self._combine(per)

    def dist_one_many(self, p, handles) -> np.ndarray:
        Q = self._stack(handles)
        P = np.broadcast_to(np.asarray(p, dtype=np.int64), Q.shape)
        return self.dist_pairs(P, Q)

    def all_points(self, limit: int | None = None) -> np.ndarray:
        cap = self.product_budget if limit is None else limit
        if self.point_count > cap:
            raise SizeLimit(
                f"{self.label}: {self.point_count} tuples exceed budget {cap}"
            )
        n = self.base.point_count
        grids = np.meshgrid(*([np.arange(n, dtype=np.int64)] * self.depth), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        # One stream per coordinate, so a shallow draw is the column prefix of a
        # deeper draw under the same seed. Keeps depth sweeps comparable.
        out = np.empty((count, self.depth), dtype=np.int64)
        for j, child in enumerate(rng.spawn(self.depth)):
            out[:, j] = child.integers(0, self.base.point_count, size=count)
        return out


class LpPowerSpace(_ProductSpace):
    """Finite power X^k with the l_p combination of coordinate distances."""

    def __init__(self, base, k: int, p: float, product_budget: int | None = None):
        if not (p == math.inf or p >= 1):
            raise ParameterDomain(f"power exponent p must be in [1, inf], got {p}")
        super().__init__(base, k, product_budget)
        self.k = k
        self.p = p
        tag = "inf" if p == math.inf else f"{p:g}"
        self.label = f"{base.label}^{k}(l{tag})"

    def _combine(self, per: np.ndarray) -> np.ndarray:
        if self.p == math.inf:
            return per.max(axis=1)
        if self.p == 1:
            return per.sum(axis=1)
        if self.p == 2:
            return np.sqrt((per * per).sum(axis=1))
        return (per**self.p).sum(axis=1) ** (1.0 / self.p)

    def diameter(self) -> float:
        if self.p == math.inf:
            return self.base.diameter()
        return self.k ** (1.0 / self.p) * self.base.diameter()


@dataclass(frozen=True)
class WeightSequence:
    """Weights a_1 >= a_2 >= ... > 0 for truncated cube metrics.

    kind "geometric" uses a_n = parameter^n, "polynomial" a_n = n^-parameter,
    "explicit" a fixed positive non-increasing tuple.
    """

    kind: str
    depth: int
    parameter: float | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise ParameterDomain(f"weight depth must be >= 1, got {self.depth}")
        if self.kind == "geometric":
            if self.parameter is None or not 0 < self.parameter < 1:
                raise ParameterDomain(
                    f"geometric weights need parameter in (0,1), got {self.parameter}"
                )
        elif self.kind == "polynomial":
            if self.parameter is None or self.parameter <= 0:
                raise ParameterDomain(
                    f"polynomial weights need parameter > 0, got {self.parameter}"
                )
        elif self.kind == "explicit":
            if not self.values or len(self.values) != self.depth:
                raise ParameterDomain("explicit weights need depth values")
            v = np.asarray(self.values, dtype=float)
            if not np.all(v > 0) or np.any(np.diff(v) > 0):
                raise ParameterDomain("weights must be positive and non-increasing")
        else:
            raise ParameterDomain(f"unknown weight kind {self.kind!r}")

    def weights(self) -> np.ndarray:
        n = np.arange(1, self.depth + 1, dtype=float)
        if self.kind == "geometric":
            return self.parameter**n
        if self.kind == "polynomial":
            return n ** (-self.parameter)
        return np.asarray(self.values, dtype=float)

    def tail_l2(self) -> float:
        """sqrt(sum_{n > depth} a_n^2) over the untruncated sequence."""
        if self.kind == "geometric":
            lam = self.parameter
            return math.sqrt(lam ** (2 * (self.depth + 1)) / (1 - lam * lam))
        if self.kind == "polynomial":
            if self.parameter <= 0.5:
                return math.inf
            return math.sqrt(float(_hurwitz_zeta(2 * self.parameter, self.depth + 1)))
        return 0.0

    def tail_sup(self) -> float:
        """sup_{n > depth} a_n over the untruncated sequence."""
        if self.kind == "geometric":
            return self.parameter ** (self.depth + 1)
        if self.kind == "polynomial":
            return (self.depth + 1.0) ** (-self.parameter)
        return 0.0


class HilbertCubeSpace(_ProductSpace):
    """Truncated weighted-l2 product: d(x,y) = sqrt(sum a_n^2 d(x_n,y_n)^2)."""

    def __init__(self, base, weight_seq: WeightSequence, product_budget: int | None = None):
        if weight_seq.kind == "polynomial" and weight_seq.parameter <= 0.5:
            raise ParameterDomain(
                "hilbert cube weights must be square-summable (parameter > 1/2)"
            )
        super().__init__(base, weight_seq.depth, product_budget)
        self.weight_seq = weight_seq
        self._w2 = weight_seq.weights() ** 2
        self.label = f"HC({base.label};{weight_seq.kind},{weight_seq.parameter},{weight_seq.depth})"

    def _combine(self, per: np.ndarray) -> np.ndarray:
        return np.sqrt((per * per * self._w2).sum(axis=1))

    def diameter(self) -> float:
        return self.base.diameter() * math.sqrt(self._w2.sum())

    def truncation_error(self) -> float:
        """Diameter bound on what the dropped tail factors can contribute."""
        return self.base.diameter() * self.weight_seq.tail_l2()


class BanachCubeSpace(_ProductSpace):
    """Truncated sup product: d(x,y) = max_n a_n d(x_n,y_n)."""

    def __init__(self, base, weight_seq: WeightSequence, product_budget: int | None = None):
        super().__init__(base, weight_seq.depth, product_budget)
        self.weight_seq = weight_seq
        self._w = weight_seq.weights()
        self.label = f"BC({base.label};{weight_seq.kind},{weight_seq.parameter},{weight_seq.depth})"

    def _combine(self, per: np.ndarray) -> np.ndarray:
        return (per * self._w).max(axis=1)

    def diameter(self) -> float:
        return self.base.diameter() * float(self._w[0])

    def truncation_error(self) -> float:
        return self.base.diameter() * self.weight_seq.tail_sup()


# ---------------------------------------------------------------------------
# constructors


def build_space(matrix, label: str = "matrix") -> MatrixSpace:
    """Validate a raw distance matrix and wrap it as a space."""
    return MatrixSpace(matrix, label=label, validate=True)


def grid_cube(dim: int, resolution: int, index_budget: int | None = None) -> GridSpace:
    return GridSpace(dim, resolution, index_budget)


def circle_space(resolution: int) -> CircleSpace:
    return CircleSpace(resolution)


def ultrametric_space(depth: int) -> UltrametricSpace:
    return UltrametricSpace(depth)


def power_space(base, k: int, p: float, product_budget: int | None = None) -> LpPowerSpace:
    return LpPowerSpace(base, k, p, product_budget)


def scale_space(space: FiniteMetricSpace, factor: float) -> ScaledSpace:
    return ScaledSpace(space, factor)


def hilbert_cube(base, weight_seq: WeightSequence, product_budget: int | None = None) -> HilbertCubeSpace:
    return HilbertCubeSpace(base, weight_seq, product_budget)


def banach_cube(base, weight_seq: WeightSequence, product_budget: int | None = None) -> BanachCubeSpace:
    return BanachCubeSpace(base, weight_seq, product_budget)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    exhaustive: bool
    triples_checked: int


def _validate_matrix(m: np.ndarray, atol: float = ATOL) -> None:
    # Negative entries need no special case: d(i,j) < 0 makes (i, i, j) a
    # triangle witness, which the scan below finds.
    n = m.shape[0]
    diag = np.abs(np.diagonal(m))
    if np.any(diag > atol):
        i = int(np.argmax(diag > atol))
        raise AxiomViolation("diagonal", (i,), f"d(i,i) = {m[i, i]}")
    asym = np.abs(m - m.T)
    if np.any(asym > atol):
        i, j = np.argwhere(asym > atol)[0]
        raise AxiomViolation("symmetry", (i, j), f"{m[i, j]} != {m[j, i]}")
    # first witness in lexicographic (i, j, k) order
    for i in range(n):
        slack = m[i][:, None] - m[i][None, :] - m.T  # [j, k]: d(i,j)-d(i,k)-d(k,j)
        bad = np.argwhere(slack > atol)
        if bad.size:
            j, k = bad[np.lexsort((bad[:, 1], bad[:, 0]))][0]
            raise AxiomViolation(
                "triangle",
                (i, j, k),
                f"d={m[i, j]} > {m[i, k]} + {m[k, j]}",
            )


def validate_metric(
    space: FiniteMetricSpace,
    exhaustive_limit: int = 512,
    sample_triples: int = 10000,
    seed: int = 0,
    atol: float = ATOL,
) -> ValidationReport:
    """Check metric axioms, exhaustively when small, else on sampled triples.

    Raises AxiomViolation with a witness on the first failure found.
    """
    n = space.point_count
    if isinstance(space, MatrixSpace) and n <= exhaustive_limit:
        _validate_matrix(space.matrix, atol)
        return ValidationReport(exhaustive=True, triples_checked=n * n * n)
    if space.is_indexed and n <= exhaustive_limit:
        pts = space.all_points()
        m = np.empty((n, n), dtype=float)
        for i in range(n):
            m[i] = space.dist_one_many(pts[i], pts)
        _validate_matrix(m, atol)
        return ValidationReport(exhaustive=True, triples_checked=n * n * n)

    rng = np.random.default_rng(seed)
    X = space.sample_points(3 * sample_triples, rng)
    if len(X) < 3:
        raise DomainError("not enough sampled points for triple validation")
    take = len(X) // 3
    A, B, C = X[:take], X[take : 2 * take], X[2 * take : 3 * take]
    dAA = space.dist_pairs(A, A)
    if np.any(np.abs(dAA) > atol):
        i = int(np.argmax(np.abs(dAA) > atol))
        raise AxiomViolation("diagonal", np.atleast_1d(A[i]), f"d(x,x) = {dAA[i]}")
    dAB = space.dist_pairs(A, B)
    dBA = space.dist_pairs(B, A)
    if np.any(np.abs(dAB - dBA) > atol):
        i = int(np.argmax(np.abs(dAB - dBA) > atol))
        raise AxiomViolation("symmetry", np.atleast_1d(A[i]), f"{dAB[i]} != {dBA[i]}")
    dAC = space.dist_pairs(A, C)
    dBC = space.dist_pairs(B, C)
    viol = dAC - (dAB + dBC)
    if np.any(viol > atol):
        i = int(np.argmax(viol))
        raise AxiomViolation(
            "triangle", np.atleast_1d(A[i]), f"slack {viol[i]} via sampled triple"
        )
    return ValidationReport(exhaustive=False, triples_checked=take)


# ---------------------------------------------------------------------------
# JSON space specs


def parse_weight_spec(obj: dict) -> WeightSequence:
    allowed = {"kind", "parameter", "depth", "values"}
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown weight spec fields: {sorted(unknown)}")
    kind = obj.get("kind")
    if kind == "explicit":
        values = tuple(float(v) for v in obj.get("values", ()))
        return WeightSequence(kind="explicit", depth=len(values), values=values)
    return WeightSequence(
        kind=str(kind),
        depth=int(obj.get("depth", 0)),
        parameter=float(obj["parameter"]) if "parameter" in obj else None,
    )


def parse_space_spec(
    obj: dict,
    base_dir: str = ".",
    product_budget: int | None = None,
) -> FiniteMetricSpace:
    """Build a space from its JSON description.

    Kinds: grid, circle, ultrametric, matrix (CSV path), power,
    hilbert_cube, banach_cube, scaled.  Unknown fields are rejected.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("space spec must be an object with a 'kind' field")
    kind = obj["kind"]

    def expect(*fields):
        unknown = set(obj) - {"kind", *fields}
        if unknown:
            raise ValueError(f"unknown fields for kind {kind!r}: {sorted(unknown)}")

    if kind == "grid":
        expect("dim", "resolution")
        return grid_cube(int(obj["dim"]), int(obj["resolution"]))
    if kind == "circle":
        expect("resolution")
        return circle_space(int(obj["resolution"]))
    if kind == "ultrametric":
        expect("depth")
        return ultrametric_space(int(obj["depth"]))
    if kind == "matrix":
        expect("path", "delimiter")
        import os

        path = os.path.join(base_dir, obj["path"])
        m = np.loadtxt(path, delimiter=obj.get("delimiter", ","), dtype=float)
        return build_space(np.atleast_2d(m), label=os.path.basename(path))
    if kind == "power":
        expect("base", "k", "p")
        base = parse_space_spec(obj["base"], base_dir, product_budget)
        p = math.inf if obj["p"] in ("inf", "Infinity") else float(obj["p"])
        return power_space(base, int(obj["k"]), p, product_budget)
    if kind == "hilbert_cube":
        expect("base", "weights")
        base = parse_space_spec(obj["base"], base_dir, product_budget)
        return hilbert_cube(base, parse_weight_spec(obj["weights"]), product_budget)
    if kind == "banach_cube":
        expect("base", "weights")
        base = parse_space_spec(obj["base"], base_dir, product_budget)
        return banach_cube(base, parse_weight_spec(obj["weights"]), product_budget)
    if kind == "scaled":
        expect("base", "factor")
        base = parse_space_spec(obj["base"], base_dir, product_budget)
        return scale_space(base, float(obj["factor"]))
    raise ValueError(f"unknown space kind {kind!r}")
