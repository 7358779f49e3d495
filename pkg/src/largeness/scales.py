"""Scale families and critical-parameter estimation from covering profiles.

Four one-parameter families of gauges f_s(r) on 0 < r < 1:

    D        r^s                      (s > 0)
    I        exp(-(log(1/r))^s)       (s >= 1)
    I_sigma  exp(-s (log(1/r))^sigma) (s > 0, sigma >= 1; sigma = 1 gives D)
    P        exp(-(1/r)^s)            (s > 0)

A Minkowski-style estimate inverts N(eps) ~ 1/f_s(eps) per grid point and
extrapolates s(eps) against 1/log(1/eps) to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateProfile,
    DomainError,
    InsufficientData,
    ParameterDomain,
)
from .covering import CoveringProfile
from .measures import DiscreteMeasure

__all__ = [
    "FAMILIES",
    "Scale",
    "scale_eval",
    "plain_exponential",
    "SeparationReport",
    "separation_audit",
    "CritEstimate",
    "mcrit_estimate",
    "FrostmanReport",
    "frostman_audit",
]

FAMILIES = ("D", "I", "I_sigma", "P")


@dataclass(frozen=True)
class Scale:
    """One gauge f_s from a named family (sigma only for I_sigma)."""

    family: str
    s: float
    sigma: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterDomain(f"unknown scale family {self.family!r}")
        if self.family == "I":
            if self.s < 1:
                raise ParameterDomain(f"I family needs s >= 1, got {self.s}")
        elif self.s <= 0:
            raise ParameterDomain(f"{self.family} family needs s > 0, got {self.s}")
        if self.family == "I_sigma":
            if self.sigma is None or self.sigma < 1:
                raise ParameterDomain(
                    f"I_sigma family needs sigma >= 1, got {self.sigma}"
                )
        elif self.sigma is not None:
            raise ParameterDomain(f"{self.family} family takes no sigma")

    def __call__(self, r: float) -> float:
        return scale_eval(self, r)


def scale_eval(scale: Scale, r: float) -> float:
    """f_s(r) for 0 < r < 1 (raises DomainError outside)."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"scale argument must be in (0,1), got {r}")
    L = math.log(1.0 / r)
    if scale.family == "D":
        return r**scale.s
    if scale.family == "I":
        return math.exp(-(L**scale.s))
    if scale.family == "I_sigma":
        return math.exp(-scale.s * L**scale.sigma)
    return math.exp(-((1.0 / r) ** scale.s))


def plain_exponential(s: float):
    """The excluded gauge r -> exp(-s/r); no separation constant exists for it."""
    if s <= 0:
        raise ParameterDomain(f"need s > 0, got {s}")

    def gauge(r: float) -> float:
        if not 0.0 < r < 1.0:
            raise DomainError(f"gauge argument must be in (0,1), got {r}")
        return math.exp(-s / r)

    return gauge


@dataclass
class SeparationReport:
    radii: np.ndarray
    ratios: np.ndarray
    final_ratio: float
    tail_monotone: bool
    passed: bool
    dropped: int


def separation_audit(
    fine,
    coarse,
    C: float,
    r_grid,
    threshold: float = 1e-3,
) -> SeparationReport:
    """Check fine(C r) = o(coarse(r)) numerically over a decreasing grid.

    ``fine`` is the faster-vanishing gauge (larger parameter), ``coarse``
    the slower one; both are Scale objects or gauge callables.  Passes when
    the ratio fine(C r)/coarse(r) is non-increasing over the tail half of
    the grid and ends below the threshold.
    """
    if C <= 0:
        raise ParameterDomain(f"need C > 0, got {C}")
    rs = np.unique(np.asarray(r_grid, dtype=float))[::-1]
    radii, ratios = [], []
    dropped = 0
    for r in rs:
        if not (0.0 < r < 1.0 and 0.0 < C * r < 1.0):
            dropped += 1
            continue
        denom = coarse(r)
        if denom == 0.0:
            dropped += 1
            continue
        radii.append(r)
        ratios.append(fine(C * r) / denom)
    if len(ratios) < 2:
        raise InsufficientData("fewer than two usable radii in separation grid")
    radii = np.asarray(radii)
    ratios = np.asarray(ratios)
    tail = ratios[len(ratios) // 2 :]
    tail_monotone = bool(np.all(np.diff(tail) <= 1e-12))
    final = float(ratios[-1])
    return SeparationReport(
        radii=radii,
        ratios=ratios,
        final_ratio=final,
        tail_monotone=tail_monotone,
        passed=tail_monotone and final < threshold,
        dropped=dropped,
    )


# ---------------------------------------------------------------------------
# critical parameter estimation


def _invert_count(family: str, sigma: float | None, N: int, eps: float):
    """Solve N f_s(eps) = 1 for s; None when outside the family's domain."""
    if N < 2 or not 0.0 < eps < 1.0:
        return None
    L = math.log(1.0 / eps)
    logN = math.log(N)
    if family == "D":
        return logN / L
    if family == "I_sigma":
        return logN / L**sigma
    # log-log forms need N >= 3 and eps < 1/e
    if N < 3 or eps >= math.exp(-1.0):
        return None
    if family == "I":
        return math.log(logN) / math.log(L)
    if family == "P":
        return math.log(logN) / L
    raise ParameterDomain(f"unknown family {family!r}")


@dataclass
class CritEstimate:
    family: str
    sigma: float | None
    point_estimate: float
    slope: float
    residual: float
    per_eps: list  # (epsilon, s_of_epsilon)
    dropped: int
    in_range: bool  # whether the extrapolated value sits inside the s(eps) envelope
    sample_relative: bool = False

    def summary(self) -> dict:
        return {
            "family": self.family,
            "sigma": self.sigma,
            "point_estimate": self.point_estimate,
            "slope": self.slope,
            "residual": self.residual,
            "entries_used": len(self.per_eps),
            "entries_dropped": self.dropped,
            "in_range": bool(self.in_range),
            "sample_relative": bool(self.sample_relative),
        }


def mcrit_estimate(
    profile: CoveringProfile,
    family: str,
    sigma: float | None = None,
    use_packing: bool = False,
    min_entries: int = 4,
) -> CritEstimate:
    """Critical-parameter estimate for one scale family from a profile.

    Per-eps inversions outside the family's domain are dropped (counted);
    the point estimate is the least-squares intercept of s(eps) against
    u = 1/log(1/eps) at u = 0.
    """
    if family not in FAMILIES:
        raise ParameterDomain(f"unknown family {family!r}")
    if family == "I_sigma":
        if sigma is None or sigma < 1:
            raise ParameterDomain(f"I_sigma needs sigma >= 1, got {sigma}")
    elif sigma is not None:
        raise ParameterDomain(f"{family} takes no sigma")

    counts = profile.counts(packing=use_packing)
    eps = profile.epsilons()
    if int((counts >= 2).sum()) < min_entries:
        raise InsufficientData(
            f"need >= {min_entries} profile entries with count >= 2"
        )
    usable = [(e, c) for e, c in zip(eps, counts) if c >= 2]
    if all(c == usable[0][1] for _, c in usable):
        raise DegenerateProfile("counts are constant across usable entries")

    per_eps = []
    dropped = 0
    for e, c in zip(eps, counts):
        s = _invert_count(family, sigma, int(c), float(e))
        if s is None:
            dropped += 1
            continue
        per_eps.append((float(e), float(s)))
    if len(per_eps) < 2:
        raise InsufficientData(
            f"only {len(per_eps)} usable entries after domain drops"
        )
    u = np.asarray([1.0 / math.log(1.0 / e) for e, _ in per_eps])
    s_vals = np.asarray([s for _, s in per_eps])
    slope, intercept = np.polyfit(u, s_vals, 1)
    fit = intercept + slope * u
    residual = float(np.sqrt(np.mean((fit - s_vals) ** 2)))
    lo, hi = float(s_vals.min()), float(s_vals.max())
    return CritEstimate(
        family=family,
        sigma=sigma,
        point_estimate=float(intercept),
        slope=float(slope),
        residual=residual,
        per_eps=per_eps,
        dropped=dropped,
        in_range=lo <= intercept <= hi,
        sample_relative=profile.sample_relative,
    )


# ---------------------------------------------------------------------------
# Frostman-type audit


@dataclass
class FrostmanReport:
    scale: Scale
    c_hat: float
    per_radius: list  # (r, max over centers of mu(B(x,r))/f_s(r))
    center_count: int

    def certifies(self, C: float) -> bool:
        """True when every audited ball satisfies mu(B(x,r)) <= C f_s(r)."""
        return self.c_hat <= C


def frostman_audit(
    mu: DiscreteMeasure,
    scale: Scale,
    r_grid,
    center_count: int = 200,
    seed: int = 0,
) -> FrostmanReport:
    """Largest ratio mu(B(x,r))/f_s(r) over support centers and grid radii.

    Balls are closed.  When the support is larger than center_count, centers
    are a seeded uniform draw of support atoms.
    """
    rs = np.unique(np.asarray(r_grid, dtype=float))
    if rs.size == 0 or rs[0] <= 0 or rs[-1] >= 1:
        raise DomainError("radii must lie in (0,1)")
    atoms = mu.support
    if len(atoms) > center_count:
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(len(atoms), size=center_count, replace=False))
        centers = atoms[pick]
    else:
        centers = atoms
    gauge = np.asarray([scale_eval(scale, float(r)) for r in rs])
    per_radius_max = np.zeros(rs.size)
    for x in centers:
        d = mu.space.dist_one_many(x, atoms)
        ball_mass = np.asarray([mu.masses[d <= r].sum() for r in rs])
        per_radius_max = np.maximum(per_radius_max, ball_mass / gauge)
    return FrostmanReport(
        scale=scale,
        c_hat=float(per_radius_max.max()),
        per_radius=[(float(r), float(m)) for r, m in zip(rs, per_radius_max)],
        center_count=len(centers),
    )
