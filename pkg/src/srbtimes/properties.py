"""Randomized and exhaustive invariant suites.

Every suite is ``fn(cases, seed) -> list of failures``; a failure is a dict
with ``case``, ``check`` and a ``detail`` string that is enough to rebuild
the input.  Case ``j`` draws from ``numpy.random.default_rng([seed, j])``,
so any single case can be replayed on its own.
"""
import itertools
import math

import numpy as np

from . import oracles
from .dynsys import SYSTEM_NAMES, make_system, orbit
from .entropy import misiurewicz_bound_fixed, misiurewicz_bound_setvalued
from .measures import PointMeasure, almost_invariance_defect, empirical_measure_on, weak_star_distance
from .partition import GridPartition
from .seeding import seed_points
from .timesets import (TimeSet, boundary, chain, component_sum_violations, connected_components,
                       density, dilate, g_double, hyperbolic_times, interval_refine,
                       mildly_hyperbolic_times, weakly_hyperbolic_times)

TIE_MARGIN = 1e-9
VALUES = (-2, -1, 0, 1, 2)
# irrational levels keep integer window sums away from (p - k) * delta
EXHAUSTIVE_DELTAS = (math.sqrt(0.5), (math.sqrt(5.0) - 1.0) / 2.0)
EXHAUSTIVE_FULL_LENGTH = 7
EXHAUSTIVE_SAMPLED = {8: 2000, 9: 2000, 10: 2000, 11: 2000, 12: 2000}


def _rng(seed, case):
    return np.random.default_rng([seed, case])


def _fmt_seq(a):
    return " ".join(repr(float(v)) for v in a)


def _window_margin(a, level):
    """Smallest ``|sum(a[k:p]) - (p - k) * level|`` over all windows."""
    s = np.concatenate(([0.0], np.cumsum(a)))
    p, k = np.triu_indices(s.size, 1)
    return float(np.min(np.abs(s[k] - s[p] - (p - k) * level))) if p.size else math.inf


def tie_free_sequence(rng, length, deltas, scale=2.5, shift=0.0):
    """``shift`` plus uniform values in ``[-scale, scale]``, redrawn until no window ties a level."""
    levels = list(deltas) + [d / 2 for d in deltas]
    while True:
        a = shift + rng.uniform(-scale, scale, size=length)
        if all(_window_margin(a, lv) >= TIE_MARGIN for lv in levels):
            return a


def random_timeset(rng, horizon, p=None):
    p = rng.uniform(0.05, 0.9) if p is None else p
    return TimeSet(np.flatnonzero(rng.random(horizon) < p), horizon)


def compare_with_oracles(a, delta, M, N, n):
    """Names of the operations whose fast path disagrees with brute force."""
    al = [float(v) for v in a]
    H = len(al)
    E = hyperbolic_times(a, delta)
    F = weakly_hyperbolic_times(a, delta, M)
    FM = dilate(F, M)
    oE = oracles.hyperbolic(al, delta)
    oF = oracles.weakly(al, delta, M)
    oFM = oracles.dilate(oF, M, H)
    pairs = {
        "hyperbolic_times": (list(E), oE),
        "weakly_hyperbolic_times": (list(F), oF),
        "dilate": ((list(dilate(E, M)), list(FM)), (oracles.dilate(oE, M, H), oFM)),
        "chain": ((list(chain(E, M)), list(chain(F, N))),
                  (oracles.chain(oE, M, H), oracles.chain(oF, N, H))),
        "connected_components": (connected_components(FM).as_lists(), oracles.components(oFM)),
        "mildly_hyperbolic_times": (list(mildly_hyperbolic_times(a, delta, M, check=False)),
                                    oracles.mildly(al, delta, M)),
        "g_double": (list(g_double(a, delta, M, N, check=False)),
                     oracles.g_double(al, delta, M, N)),
        "density": ((density(E, n), density(F, n)),
                    (oracles.density(oE, n), oracles.density(oF, n))),
        "boundary": (list(boundary(F)), oracles.boundary(oF)),
        "interval_refine": ((list(interval_refine(FM, E)), list(interval_refine(FM, F))),
                            (oracles.interval_refine(oFM, oE, H),
                             oracles.interval_refine(oFM, oF, H))),
    }
    return [name for name, (fast, ref) in pairs.items() if fast != ref]


def _oracle_failures(case, a, delta, M, N, n):
    bad = compare_with_oracles(a, delta, M, N, n)
    detail = f"delta={delta!r} M={M} N={N} n={n} a={_fmt_seq(a)}"
    return [{"case": case, "check": name, "detail": detail} for name in bad]


def suite_timesets_oracle(cases, seed):
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        length = int(rng.integers(1, 65))
        delta = float(rng.uniform(0.05, 1.5))
        a = tie_free_sequence(rng, length, [delta])
        M = int(rng.integers(1, length + 3))
        N = int(rng.integers(1, length + 3))
        n = int(rng.integers(1, length + 2))
        failures += _oracle_failures(j, a, delta, M, N, n)
    return failures


def exhaustive_sequences(seed=0):
    """Every sequence over ``VALUES`` of length <= 7, then a fixed sample of lengths 8-12."""
    for length in range(1, EXHAUSTIVE_FULL_LENGTH + 1):
        for a in itertools.product(VALUES, repeat=length):
            yield np.array(a, dtype=float)
    rng = np.random.default_rng([seed, 12])
    for length, count in EXHAUSTIVE_SAMPLED.items():
        for row in rng.choice(VALUES, size=(count, length)):
            yield row.astype(float)


def exhaustive_size():
    full = sum(len(VALUES) ** L for L in range(1, EXHAUSTIVE_FULL_LENGTH + 1))
    return full + sum(EXHAUSTIVE_SAMPLED.values())


def suite_timesets_exhaustive(cases, seed):
    """Parameters cycle with the case index: delta over two irrational levels, M, N and n."""
    failures = []
    for j, a in enumerate(itertools.islice(exhaustive_sequences(seed), cases)):
        delta = EXHAUSTIVE_DELTAS[j % 2]
        M = (1, 2, 3, 5, 13)[j % 5]
        N = (1, 2, 4)[j % 3]
        n = j % a.size + 1
        failures += _oracle_failures(j, a, delta, M, N, n)
    return failures


def suite_chain_dilate(cases, seed):
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        E = random_timeset(rng, int(rng.integers(1, 200)))
        M = int(rng.integers(1, 40))
        if not chain(E, M) <= dilate(E, M):
            failures.append({"case": j, "check": "chain<=dilate", "detail": f"M={M} E={E}"})
    return failures


def suite_angle(cases, seed):
    """``d_n(E(M) minus E<N>) <= M/n + M/N`` for ``N >= M``, compared in integers."""
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        H = int(rng.integers(1, 400))
        E = random_timeset(rng, H, p=float(rng.uniform(0.005, 0.5)))
        M = int(rng.integers(1, 30))
        N = int(rng.integers(M, 4 * M + 30))
        n = int(rng.integers(1, H + 50))
        count = round(density(dilate(E, M) - chain(E, N), n) * n)
        if count * N > M * N + M * n:
            failures.append({"case": j, "check": "angle",
                             "detail": f"M={M} N={N} n={n} count={count} E={E}"})
    return failures


def pliss_instance(rng):
    """Sequence with mean >= delta, ``delta`` and ``theta = (delta/2) / (A - delta/2)``."""
    length = int(rng.integers(4, 65))
    delta = float(rng.uniform(0.05, 1.0))
    while True:
        scale = float(rng.uniform(0.5, 3.0))
        a = rng.uniform(-scale, scale, size=length)
        a = a - a.mean() + delta + float(rng.exponential(0.05))
        if _window_margin(a, delta / 2) >= TIE_MARGIN:
            break
    A = float(a.max())
    return a, delta, (delta / 2) / (A - delta / 2)


def suite_pliss(cases, seed):
    failures = []
    for j in range(cases):
        a, delta, theta = pliss_instance(_rng(seed, j))
        count = len(hyperbolic_times(a, delta / 2))
        need = math.floor(theta * a.size) - 1
        if count < need:
            failures.append({"case": j, "check": "pliss",
                             "detail": f"count={count} need={need} delta={delta!r} a={_fmt_seq(a)}"})
    return failures


def suite_nesting(cases, seed):
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        length = int(rng.integers(1, 65))
        d1, d2 = sorted(rng.uniform(0.05, 1.5, size=2).tolist())
        a = tie_free_sequence(rng, length, [d1, d2])
        E = hyperbolic_times(a, d1)
        detail = f"delta={d1!r},{d2!r} a={_fmt_seq(a)}"
        inter = set(range(length))
        for M in range(1, length + 1):
            F = weakly_hyperbolic_times(a, d1, M)
            if not E <= F:
                failures.append({"case": j, "check": f"E<=F(M={M})", "detail": detail})
            inter &= set(F)
        if sorted(inter) != list(E):
            failures.append({"case": j, "check": "E=intersection", "detail": detail})
        if not hyperbolic_times(a, d2) <= E:
            failures.append({"case": j, "check": "monotone-delta", "detail": detail})
    return failures


def suite_component_sums(cases, seed):
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        length = int(rng.integers(1, 129))
        delta = float(rng.uniform(0.05, 1.5))
        a = tie_free_sequence(rng, length, [delta], shift=float(rng.uniform(-0.5, 1.0)))
        M = int(rng.integers(1, 20))
        bad = component_sum_violations(a, delta, M)
        if bad:
            failures.append({"case": j, "check": "component-sum",
                             "detail": f"delta={delta!r} M={M} first={bad[0]} a={_fmt_seq(a)}"})
    return failures


def misiurewicz_instance(rng, setvalued):
    """Random sample measure, partition, time set(s), ``m`` and system."""
    system = make_system(SYSTEM_NAMES[int(rng.integers(len(SYSTEM_NAMES)))], check_points_count=16)
    S = int(rng.integers(1, 201))
    pts = rng.random((S, system.dim))
    w = rng.random(S) + 1e-3
    mu = PointMeasure(pts, w / w.sum())
    P = GridPartition(system.dim, int(rng.integers(1, 4)))
    m = int(rng.choice([1, 2, 4]))

    def draw():
        if rng.random() < 0.3:
            lo = int(rng.integers(0, 31))
            return TimeSet.interval(lo, int(rng.integers(lo + 1, 33)), 32)
        F = random_timeset(rng, 32)
        return F if len(F) else TimeSet([int(rng.integers(32))], 32)

    if not setvalued:
        return system, mu, P, draw(), m
    pool = [draw() for _ in range(int(rng.integers(1, 5)))]
    times = [pool[int(rng.integers(len(pool)))] for _ in range(S)]
    return system, mu, P, times, m


def suite_misiurewicz(setvalued):
    bound = misiurewicz_bound_setvalued if setvalued else misiurewicz_bound_fixed
    check = "misiurewicz-setvalued" if setvalued else "misiurewicz-fixed"

    def run(cases, seed):
        failures = []
        for j in range(cases):
            system, mu, P, F, m = misiurewicz_instance(_rng(seed, j), setvalued)
            pair = bound(mu, P, F, m, system)
            if not pair.holds(1e-9):
                failures.append({"case": j, "check": check,
                                 "detail": f"system={system.name} r={P.resolution} m={m} "
                                           f"lhs={pair.lhs!r} rhs={pair.rhs!r}"})
        return failures
    return run


def random_measure(rng, dim, max_atoms=50):
    S = int(rng.integers(1, max_atoms + 1))
    w = rng.random(S) + 1e-3
    return PointMeasure(rng.random((S, dim)), w / w.sum() * rng.uniform(0.1, 1.0))


def suite_metric(cases, seed):
    """Symmetry (exact), triangle inequality, convexity and the bound ``d <= 4``."""
    failures = []
    for j in range(cases):
        rng = _rng(seed, j)
        dim = int(rng.integers(2, 5))
        K = int(rng.choice([8, 16, 64]))
        mu, nu, eta = (random_measure(rng, dim) for _ in range(3))

        def d(x, y):
            return weak_star_distance(x, y, K)

        dmn, dnm = d(mu, nu), d(nu, mu)
        detail = f"dim={dim} K={K}"
        if dmn != dnm:
            failures.append({"case": j, "check": "symmetry", "detail": detail})
        if dmn > d(mu, eta) + d(eta, nu) + 1e-12:
            failures.append({"case": j, "check": "triangle", "detail": detail})
        t = float(rng.random())
        if d(mu.mix(eta, t), nu) > t * d(mu, nu) + (1 - t) * d(eta, nu) + 1e-12:
            failures.append({"case": j, "check": "convexity", "detail": detail})
        if not 0.0 <= dmn <= 4.0:
            failures.append({"case": j, "check": "range", "detail": detail})
    return failures


def suite_defect(cases, seed, horizons=(1_000, 10_000)):
    """``d(mu_x^n, T_* mu_x^n) <= 4/n`` on every built-in, ``cases`` seeds each."""
    failures = []
    for name in SYSTEM_NAMES:
        system = make_system(name)
        seeds, pts = seed_points(seed, cases, system.dim)
        orbs = orbit(system, pts, max(horizons))
        for s in range(cases):
            for n in horizons:
                mu = empirical_measure_on(orbs[:, s], TimeSet.interval(0, n), n)
                defect = almost_invariance_defect(mu, system)
                if defect > 4.0 / n:
                    failures.append({"case": s, "check": f"defect-{name}",
                                     "detail": f"seed={seeds[s]} n={n} defect={defect!r}"})
    return failures


SUITES = {
    "timesets-oracle": suite_timesets_oracle,
    "timesets-exhaustive": suite_timesets_exhaustive,
    "chain-dilate": suite_chain_dilate,
    "angle": suite_angle,
    "pliss": suite_pliss,
    "nesting": suite_nesting,
    "component-sums": suite_component_sums,
    "misiurewicz-fixed": suite_misiurewicz(False),
    "misiurewicz-setvalued": suite_misiurewicz(True),
    "metric": suite_metric,
    "defect": suite_defect,
}

DEFAULT_CASES = {
    "timesets-exhaustive": exhaustive_size(),
    "misiurewicz-fixed": 500,
    "misiurewicz-setvalued": 500,
    "defect": 100,
}


def run_suite(name, cases=None, seed=0):
    if name not in SUITES:
        raise KeyError(name)
    cases = DEFAULT_CASES.get(name, 1000) if cases is None else cases
    return SUITES[name](cases, seed)
