"""Exact p-Wasserstein distances, transport plans, and plan-graph surgery.

The main solver delegates the transport linear program to HiGHS dual
simplex (vertex solutions, hence basic plans).  The assignment oracle is an
independent route: it expands measures whose masses are multiples of a
common granularity into unit atoms and runs a self-contained Hungarian
algorithm, so solver and oracle share no code path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    MassMismatch,
    NotMultiple,
    ParameterDomain,
    SizeLimit,
    SpaceMismatch,
)
from .measures import DiscreteMeasure, pushforward  # re-exported  # noqa: F401

__all__ = [
    "TransportPlan",
    "LabelledGraph",
    "CMReport",
    "wasserstein",
    "assignment_oracle",
    "plan_graph",
    "canonicalize_to_forest",
    "is_forest",
    "check_cyclical_monotonicity",
    "DiscreteMeasure",
    "pushforward",
]

PRUNE_TOL = 1e-12
MASS_TOL = 1e-9


@dataclass
class TransportPlan:
    """Edges (src point, dst point, mass) of a coupling between two measures."""

    source: DiscreteMeasure
    target: DiscreteMeasure
    p: float
    src: np.ndarray
    dst: np.ndarray
    mass: np.ndarray

    def edge_costs(self) -> np.ndarray:
        return self.source.space.dist_pairs(self.src, self.dst) ** self.p

    def cost(self) -> float:
        return float((self.mass * self.edge_costs()).sum())

    def distance(self) -> float:
        return self.cost() ** (1.0 / self.p)

    def marginal_error(self) -> float:
        """Largest atomwise gap between edge sums and the two measures."""
        worst = 0.0
        for measure, ends in ((self.source, self.src), (self.target, self.dst)):
            got = {}
            for point, m in zip(ends.tolist(), self.mass.tolist()):
                got[point] = got.get(point, 0.0) + m
            for point, m in zip(measure.support.tolist(), measure.masses.tolist()):
                worst = max(worst, abs(got.pop(point, 0.0) - m))
            for m in got.values():
                worst = max(worst, abs(m))
        return worst

    def copy(self) -> "TransportPlan":
        return TransportPlan(
            self.source,
            self.target,
            self.p,
            self.src.copy(),
            self.dst.copy(),
            self.mass.copy(),
        )


def _check_pair(mu: DiscreteMeasure, nu: DiscreteMeasure, p: float) -> None:
    if mu.space is not nu.space:
        raise SpaceMismatch("measures live on different space objects")
    if not mu.space.is_indexed:
        raise SpaceMismatch("transport needs an indexed ground space")
    if not (1 <= p < math.inf):
        raise ParameterDomain(f"p must be in [1, inf), got {p}")
    if abs(mu.total_mass - nu.total_mass) > MASS_TOL:
        raise MassMismatch(
            f"total masses differ: {mu.total_mass} vs {nu.total_mass}"
        )


def wasserstein(
    mu: DiscreteMeasure, nu: DiscreteMeasure, p: float = 1.0
) -> tuple[float, TransportPlan]:
    """Exact W_p between two discrete measures of equal total mass.

    Returns the distance and an optimal plan with at most m+n-1 edges
    (masses below 1e-12 pruned).
    """
    _check_pair(mu, nu, p)
    m, n = mu.atom_count(), nu.atom_count()
    cost = np.empty((m, n), dtype=float)
    for i in range(m):
        cost[i] = mu.space.dist_one_many(mu.support[i], nu.support) ** p

    A = np.zeros((m + n, m * n))
    for i in range(m):
        A[i, i * n : (i + 1) * n] = 1.0
    for j in range(n):
        A[m + j, j::n] = 1.0
    b = np.concatenate([mu.masses, nu.masses])
    res = linprog(cost.ravel(), A_eq=A, b_eq=b, method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    x = res.x.reshape(m, n)
    ii, jj = np.nonzero(x > PRUNE_TOL)
    plan = TransportPlan(
        source=mu,
        target=nu,
        p=p,
        src=mu.support[ii],
        dst=nu.support[jj],
        mass=x[ii, jj].astype(float),
    )
    return plan.distance(), plan


def _hungarian(cost: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect matching on a square matrix (potentials method).

    Returns (col_of_row, total_cost).
    """
    n = cost.shape[0]
    INF = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row assigned to column j (1-based)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    col_of_row = np.empty(n, dtype=np.int64)
    total = 0.0
    for j in range(1, n + 1):
        col_of_row[match[j] - 1] = j - 1
        total += cost[match[j] - 1][j - 1]
    return col_of_row, total


def assignment_oracle(
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    p: float,
    granularity: float,
    size_limit: int = 512,
) -> float:
    """W_p via unit-atom expansion and an assignment solve.

    Every mass must be an integer multiple of ``granularity``; the measures
    then expand into equally many atoms of that mass and the optimal plan is
    a perfect matching.
    """
    _check_pair(mu, nu, p)
    if granularity <= 0:
        raise ParameterDomain(f"granularity must be positive, got {granularity}")

    def expand(measure):
        reps = []
        for point, mass in zip(measure.support, measure.masses):
            k = round(mass / granularity)
            if k < 1 or abs(mass - k * granularity) > MASS_TOL:
                raise NotMultiple(granularity, f"atom mass {mass}")
            reps.extend([point] * k)
        return np.asarray(reps, dtype=np.int64)

    left = expand(mu)
    right = expand(nu)
    if len(left) != len(right):
        raise MassMismatch(
            f"unit-atom counts differ: {len(left)} vs {len(right)}"
        )
    n = len(left)
    if n > size_limit:
        raise SizeLimit(f"assignment on {n} atoms exceeds limit {size_limit}")
    cost = np.empty((n, n), dtype=float)
    for i in range(n):
        cost[i] = mu.space.dist_one_many(left[i], right) ** p
    _, total = _hungarian(cost)
    return (granularity * total) ** (1.0 / p)


# ---------------------------------------------------------------------------
# plan graphs


@dataclass
class LabelledGraph:
    """Directed multigraph of a plan: edges off the diagonal plus marginals."""

    vertices: np.ndarray  # sorted point indices, supp(mu) | supp(nu)
    edges: np.ndarray  # (k, 2) point indices, src != dst
    mass: np.ndarray  # (k,)
    m0: np.ndarray  # source marginal per vertex
    m1: np.ndarray  # target marginal per vertex

    def admissibility_check(self, tol: float = MASS_TOL) -> tuple[bool, list[str]]:
        """Mass invariance and flow caps at every vertex; reasons on failure."""
        reasons = []
        if abs(self.m0.sum() - self.m1.sum()) > tol:
            reasons.append(
                f"total masses differ: {self.m0.sum()} vs {self.m1.sum()}"
            )
        if np.any(self.mass <= 0):
            reasons.append("edge with non-positive mass")
        pos = {int(v): i for i, v in enumerate(self.vertices)}
        inflow = np.zeros(len(self.vertices))
        outflow = np.zeros(len(self.vertices))
        for (x, y), m in zip(self.edges.tolist(), self.mass.tolist()):
            if x == y:
                reasons.append(f"loop edge at {x}")
                continue
            outflow[pos[x]] += m
            inflow[pos[y]] += m
        for i, v in enumerate(self.vertices):
            if self.m0[i] + inflow[i] - outflow[i] - self.m1[i] > tol or self.m1[
                i
            ] - (self.m0[i] + inflow[i] - outflow[i]) > tol:
                reasons.append(f"mass invariance fails at vertex {v}")
            if inflow[i] > self.m1[i] + tol:
                reasons.append(f"inflow exceeds target mass at vertex {v}")
            if outflow[i] > self.m0[i] + tol:
                reasons.append(f"outflow exceeds source mass at vertex {v}")
        return (not reasons, reasons)


def plan_graph(plan: TransportPlan) -> LabelledGraph:
    """Identify source and target copies of each point; drop diagonal edges."""
    verts = np.unique(np.concatenate([plan.source.support, plan.target.support]))
    pos = {int(v): i for i, v in enumerate(verts)}
    m0 = np.zeros(len(verts))
    m1 = np.zeros(len(verts))
    for point, mass in zip(plan.source.support.tolist(), plan.source.masses.tolist()):
        m0[pos[point]] = mass
    for point, mass in zip(plan.target.support.tolist(), plan.target.masses.tolist()):
        m1[pos[point]] = mass
    off = plan.src != plan.dst
    edges = np.stack([plan.src[off], plan.dst[off]], axis=1)
    return LabelledGraph(
        vertices=verts, edges=edges, mass=plan.mass[off].copy(), m0=m0, m1=m1
    )


def _tree_and_chords(edges: list[tuple[int, int]]):
    """Split edges into a spanning forest (adjacency) and chord positions."""
    parent: dict[int, int] = {}

    def find(a):
        root = a
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(a, a) != a:
            parent[a], a = root, parent[a]
        return root

    adj: dict[int, list[tuple[int, int]]] = {}
    chords: list[int] = []
    for pos, (x, y) in enumerate(edges):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
            adj.setdefault(x, []).append((pos, y))
            adj.setdefault(y, []).append((pos, x))
        else:
            chords.append(pos)
    return adj, chords


def _chord_cycle(edges: list[tuple[int, int]], adj, pos: int):
    """Fundamental cycle closed by the chord at `pos`: (positions, signs).

    Signs are +1 where the edge direction agrees with the traversal order,
    which runs x -> ... -> y through the tree and back y -> x on the chord.
    """
    x, y = edges[pos]
    prev: dict[int, tuple[int, int] | None] = {y: None}
    stack = [y]
    while stack:
        cur = stack.pop()
        if cur == x:
            break
        for epos, other in adj.get(cur, ()):
            if other not in prev:
                prev[other] = (cur, epos)
                stack.append(other)
    positions = []
    signs = []
    cur = x
    while prev[cur] is not None:
        came_from, epos = prev[cur]
        # search ran y -> ... -> x; we unwind x -> y, so flip
        a, b = edges[epos]
        positions.append(epos)
        signs.append(1 if (a, b) == (cur, came_from) else -1)
        cur = came_from
    # the chord is traversed y -> x, against its stored direction (x, y)
    positions.append(pos)
    signs.append(-1)
    return positions, signs


def _find_cycle(edges: list[tuple[int, int]]):
    """First undirected cycle as (edge positions, orientation signs), or None."""
    adj, chords = _tree_and_chords(edges)
    if not chords:
        return None
    return _chord_cycle(edges, adj, chords[0])


def is_forest(plan_or_graph) -> bool:
    """True when the off-diagonal edges contain no undirected cycle."""
    if isinstance(plan_or_graph, TransportPlan):
        g = plan_graph(plan_or_graph)
    else:
        g = plan_or_graph
    return _find_cycle([tuple(e) for e in g.edges.tolist()]) is None


def canonicalize_to_forest(plan: TransportPlan, tol: float = MASS_TOL) -> TransportPlan:
    """Cancel circulations until no cycle can be removed.

    Each round pushes mass around one undirected cycle in a direction that
    does not raise the cost, sized so that at least one edge drains dry.
    Where the cycle runs straight through a vertex (mass both arriving and
    leaving), the push is balanced against that vertex's resident mass, so
    marginals are preserved exactly.  A cycle whose draining directions
    would all overdraw some resident mass or raise the cost is left in
    place; that only happens when mass strictly relays through a point, a
    configuration some optimal plans are forced into.
    """
    work = plan.copy()
    keep = work.src != work.dst
    diag: dict[int, float] = {}
    for v, m in zip(work.src[~keep].tolist(), work.mass[~keep].tolist()):
        diag[v] = diag.get(v, 0.0) + m
    src = list(work.src[keep].tolist())
    dst = list(work.dst[keep].tolist())
    mass = list(work.mass[keep].astype(float))
    costs = list(work.edge_costs()[keep].astype(float))

    def attempt(positions, signs) -> bool:
        delta_cost = sum(s * costs[e] for e, s in zip(positions, signs))
        net: dict[int, int] = {}
        dst_net: dict[int, int] = {}
        for e, s in zip(positions, signs):
            net[src[e]] = net.get(src[e], 0) + s
            dst_net[dst[e]] = dst_net.get(dst[e], 0) + s
        # on a simple cycle both roles of a vertex shift by the same amount,
        # so one resident-mass adjustment fixes both marginals
        if any(net.get(v, 0) != dst_net.get(v, 0) for v in set(net) | set(dst_net)):
            return False
        # push +1 raises aligned (+) edges, push -1 lowers them
        for direction in (1, -1):
            if direction * delta_cost > tol:
                continue  # would raise cost
            losing = [e for e, s in zip(positions, signs) if s * direction < 0]
            if not losing:
                continue  # nothing drains, no progress
            step = min(mass[e] for e in losing)
            drains = [v for v, k in net.items() if k * direction > 0]
            if any(diag.get(v, 0.0) < step - PRUNE_TOL for v in drains):
                continue  # would overdraw resident mass
            for e, s in zip(positions, signs):
                mass[e] += s * direction * step
            for v, k in net.items():
                if k:
                    diag[v] = diag.get(v, 0.0) - k * direction * step
                    if diag[v] <= PRUNE_TOL:
                        del diag[v]
            for e in sorted(positions, reverse=True):
                if mass[e] <= PRUNE_TOL:
                    del src[e], dst[e], mass[e], costs[e]
            return True
        return False

    while True:
        edges = list(zip(src, dst))
        adj, chords = _tree_and_chords(edges)
        progress = False
        for pos in chords:
            if attempt(*_chord_cycle(edges, adj, pos)):
                progress = True
                break
        if not progress:
            break

    diag_items = sorted(diag.items())
    out_src = np.concatenate(
        [
            np.asarray(src, dtype=np.int64),
            np.asarray([v for v, _ in diag_items], dtype=np.int64),
        ]
    )
    out_dst = np.concatenate(
        [
            np.asarray(dst, dtype=np.int64),
            np.asarray([v for v, _ in diag_items], dtype=np.int64),
        ]
    )
    out_mass = np.concatenate(
        [
            np.asarray(mass, dtype=float),
            np.asarray([m for _, m in diag_items], dtype=float),
        ]
    )
    order = np.lexsort((out_dst, out_src))
    return TransportPlan(
        source=plan.source,
        target=plan.target,
        p=plan.p,
        src=out_src[order],
        dst=out_dst[order],
        mass=out_mass[order],
    )


# ---------------------------------------------------------------------------
# cyclical monotonicity


@dataclass
class CMReport:
    passed: bool
    witness: list | None  # ordered (src, dst) pairs realizing the violation
    gap: float  # direct cost minus best rerouted cost over the witness
    tuples_checked: int


def check_cyclical_monotonicity(
    plan: TransportPlan, max_len: int = 4, tol: float = MASS_TOL
) -> CMReport:
    """Search support-pair families whose cyclic reroute beats the plan.

    Exhausts ordered families of 2..max_len distinct support pairs (first
    element fixed to break rotational symmetry).  A violation is
    sum c(x_i, y_i) > sum c(x_i, y_{i+1}) + tol.
    """
    pairs = list(zip(plan.src.tolist(), plan.dst.tolist()))
    n = len(pairs)
    work = sum(
        math.comb(n, L) * math.factorial(L - 1) * L for L in range(2, max_len + 1)
    )
    if work > 5_000_000:
        raise SizeLimit(f"{n} support pairs is too many for max_len={max_len}")

    points = np.unique(np.concatenate([plan.src, plan.dst]))
    pos = {int(v): i for i, v in enumerate(points)}
    cmat = np.empty((len(points), len(points)), dtype=float)
    for i, v in enumerate(points):
        cmat[i] = plan.source.space.dist_one_many(v, points) ** plan.p

    def c(a, b):
        return cmat[pos[a], pos[b]]

    checked = 0
    best_gap = 0.0
    best_witness = None
    for L in range(2, max_len + 1):
        for combo in itertools.combinations(range(n), L):
            direct = sum(c(*pairs[i]) for i in combo)
            first = combo[0]
            for rest in itertools.permutations(combo[1:]):
                order = (first, *rest)
                checked += 1
                rerouted = sum(
                    c(pairs[order[i]][0], pairs[order[(i + 1) % L]][1])
                    for i in range(L)
                )
                gap = direct - rerouted
                if gap > tol and gap > best_gap:
                    best_gap = gap
                    best_witness = [pairs[i] for i in order]
    if best_witness is not None:
        return CMReport(False, best_witness, float(best_gap), checked)
    return CMReport(True, None, 0.0, checked)
