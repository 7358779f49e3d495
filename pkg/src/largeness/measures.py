"""Finitely supported measures on finite metric spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySupport
from .spaces import FiniteMetricSpace

__all__ = ["DiscreteMeasure", "pushforward", "random_measure"]

MASS_ATOL = 1e-9


def _canonical_atoms(space, support, masses):
    """Sort support, merge duplicate atoms (mass added in operand order)."""
    masses = np.asarray(masses, dtype=float)
    if space.is_indexed:
        sup = np.asarray(support, dtype=np.int64).reshape(-1)
    else:
        sup = np.asarray(support, dtype=np.int64)
        if sup.ndim == 1:
            sup = sup.reshape(1, -1)
    if len(sup) != len(masses):
        raise DomainError(f"{len(sup)} atoms vs {len(masses)} masses")
    if not np.all(np.isfinite(masses)):
        raise DomainError("masses must be finite")
    if np.any(masses < 0):
        raise DomainError("masses must be non-negative")
    keep = masses > 0
    sup, masses = sup[keep], masses[keep]
    if len(sup) == 0:
        return sup, masses
    uniq, inv = np.unique(sup, axis=0 if sup.ndim == 2 else None, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=float)
    np.add.at(acc, inv.reshape(-1), masses)
    return uniq, acc


@dataclass
class DiscreteMeasure:
    """A measure with finite support, canonically sorted and merged.

    ``support`` holds point handles of the ground space (indices, or
    descriptor rows for product spaces); ``masses`` are strictly positive.
    """

    space: FiniteMetricSpace
    support: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        self.support, self.masses = _canonical_atoms(
            self.space, self.support, self.masses
        )
        if len(self.support) == 0:
            raise EmptySupport("measure has no mass")

    @classmethod
    def dirac(cls, space, point) -> "DiscreteMeasure":
        return cls(space, [point] if space.is_indexed else [point], [1.0])

    @classmethod
    def uniform(cls, space, points) -> "DiscreteMeasure":
        pts = np.asarray(points)
        n = len(pts)
        return cls(space, pts, np.full(n, 1.0 / n))

    @classmethod
    def from_atoms(cls, space, atoms) -> "DiscreteMeasure":
        """atoms: iterable of (point, mass) pairs; duplicates are merged."""
        pts = [a for a, _ in atoms]
        ms = [m for _, m in atoms]
        return cls(space, pts, ms)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= MASS_ATOL

    def atom_count(self) -> int:
        return len(self.masses)

    def mass_at(self, point) -> float:
        if self.space.is_indexed:
            hit = self.support == int(point)
        else:
            hit = (self.support == np.asarray(point, dtype=np.int64)).all(axis=1)
        m = self.masses[hit]
        return float(m[0]) if m.size else 0.0


def pushforward(phi, mu: DiscreteMeasure) -> DiscreteMeasure:
    """Image of mu under a self-map of its (indexed) ground space.

    phi is either an index table (array of length point_count) or a callable
    on index arrays.  Atoms with a common image are merged, mass added in
    support order.
    """
    if not mu.space.is_indexed:
        raise DomainError("pushforward needs an indexed ground space")
    if callable(phi):
        image = np.asarray(phi(mu.support), dtype=np.int64)
    else:
        table = np.asarray(phi, dtype=np.int64)
        if table.shape != (mu.space.point_count,):
            raise DomainError(
                f"map table must have length {mu.space.point_count}, got {table.shape}"
            )
        image = table[mu.support]
    if image.shape != mu.support.shape:
        raise DomainError("map must send indices to indices, one to one atom")
    return DiscreteMeasure(mu.space, image, mu.masses.copy())


def random_measure(
    space,
    rng: np.random.Generator,
    max_support: int = 8,
    granularity: float | None = None,
) -> DiscreteMeasure:
    """A random probability measure with small support; used by audits.

    With a granularity r, masses are positive integer multiples of r
    summing to 1 (r must divide 1).
    """
    k = int(rng.integers(1, max_support + 1))
    k = min(k, space.point_count)
    idx = rng.choice(space.point_count, size=k, replace=False)
    if granularity is None:
        w = rng.dirichlet(np.ones(k))
    else:
        units = round(1.0 / granularity)
        if abs(units * granularity - 1.0) > MASS_ATOL:
            raise DomainError(f"granularity {granularity} does not divide unit mass")
        counts = rng.multinomial(units, np.full(k, 1.0 / k))
        w = counts * granularity
    return DiscreteMeasure(space, idx, w)
