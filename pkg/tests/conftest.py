import numpy as np
import pytest

from largeness import grid_cube, circle_space, random_measure

# acceptance tests register one line each; the summary hook prints them all
# so the verdicts survive output capture.
ACCEPTANCE_RESULTS = []


def record_acceptance(num, label, passed, detail):
    ACCEPTANCE_RESULTS.append((num, label, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, passed, detail in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict} {label}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def line9():
    return grid_cube(1, 9)


@pytest.fixture
def circle16():
    return circle_space(16)


def granular_pair(space, rng, granularity=1 / 16, max_support=8):
    """Two random probability measures sharing the mass unit `granularity`."""
    mu = random_measure(space, rng, max_support=max_support, granularity=granularity)
    nu = random_measure(space, rng, max_support=max_support, granularity=granularity)
    return mu, nu


def disjoint_pair(space, rng, granularity=1 / 16, max_support=8):
    """Random granular pair whose supports never share a point.

    With disjoint supports no point both sends and receives mass, so every
    cycle in a plan graph alternates and cancellation is always possible.
    """
    from largeness import DiscreteMeasure

    units = round(1.0 / granularity)
    pool = rng.permutation(space.point_count)
    halves = pool[: 2 * max_support].reshape(2, max_support)
    out = []
    for side in halves:
        k = int(rng.integers(1, max_support + 1))
        cuts = rng.multinomial(units, np.full(k, 1.0 / k))
        pts = [int(p) for p, c in zip(side[:k], cuts) if c > 0]
        ms = [c * granularity for c in cuts if c > 0]
        out.append(DiscreteMeasure(space, pts, ms))
    return out[0], out[1]
