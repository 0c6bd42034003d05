import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from srbtimes.dynsys import make_system, orbit
from srbtimes.exceptions import DimensionError, EmptyTimeSet, InvalidParameter
from srbtimes.measures import (PointMeasure, ReferenceMeasure, almost_invariance_defect,
                               empirical_measure_on, haar, is_component, pushforward,
                               test_family, time_averaged_measure, weak_star_distance)
from srbtimes.partition import GridPartition
from srbtimes.timesets import TimeSet, boundary, dilate, hyperbolic_times


@pytest.fixture(scope="module")
def cat2():
    return make_system("cat2")


def brute_distance(mu, nu, K):
    """Term-by-term evaluation of the truncated series with explicit test functions."""
    freqs, kinds = test_family(mu.dim, K)
    total = 0.0
    for j in range(K):
        k, kind = freqs[j], kinds[j]

        def f(x):
            if kind == 0:
                return 1.0
            phase = 2 * math.pi * sum(int(c) * float(v) for c, v in zip(k, x))
            return math.cos(phase) if kind == 1 else math.sin(phase)
        a = sum(w * f(x) for x, w in zip(mu.points, mu.weights))
        b = sum(w * f(x) for x, w in zip(nu.points, nu.weights))
        total += abs(a - b) / (2 ** j * 2)
    return total


def random_measure(rng, dim, atoms=20, mass=1.0):
    w = rng.random(atoms) + 1e-3
    return PointMeasure(rng.random((atoms, dim)), w / w.sum() * mass)


class TestTestFamily:
    def test_enumeration_start(self):
        freqs, kinds = test_family(2, 9)
        assert kinds.tolist() == [0, 1, 2, 1, 2, 1, 2, 1, 2]
        assert [tuple(v) for v in freqs[1::2]] == [(0, 1), (1, -1), (1, 0), (1, 1)]

    def test_first_nonzero_positive(self):
        freqs, _ = test_family(3, 64)
        for v in freqs[1:]:
            assert next(c for c in v if c != 0) > 0


class TestWeakStar:
    def test_hand_value(self):
        # terms 1..8: cos/sin at (0,1), (1,-1), (1,0), (1,1) of (1/2, 1/2) are -1,0,1,0,-1,0,1,0
        # so the cosine gaps are 2,0,2,0 at j = 1,3,5,7: 2*(1/4 + 1/16 + 1/64 + 1/256)/2
        mu, nu = PointMeasure.dirac([0.0, 0.0]), PointMeasure.dirac([0.5, 0.5])
        assert weak_star_distance(mu, nu, 8) == 0.53125

    def test_matches_brute_force(self):
        rng = np.random.default_rng(4)
        for dim in (2, 3, 4):
            mu, nu = random_measure(rng, dim), random_measure(rng, dim, mass=0.4)
            assert weak_star_distance(mu, nu, 40) == pytest.approx(brute_distance(mu, nu, 40),
                                                                   abs=1e-13)

    def test_self_distance_zero(self):
        mu = random_measure(np.random.default_rng(1), 3)
        assert weak_star_distance(mu, mu) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            weak_star_distance(PointMeasure.dirac([0.1, 0.2]), haar(3))

    def test_truncation_tail(self):
        rng = np.random.default_rng(2)
        mu, nu = random_measure(rng, 2), random_measure(rng, 2)
        short, long = weak_star_distance(mu, nu, 20), weak_star_distance(mu, nu, 64)
        assert 0 <= long - short <= 2.0 ** (1 - 20)

    def test_reference_measure_integrals(self):
        ref = ReferenceMeasure(3, {2: 0.5})
        on_circle = PointMeasure(np.array([[0.25, 0.75, 0.5]]), [1.0])
        vals = ref.test_integrals(64)
        assert vals[0] == 1.0
        freqs, _ = test_family(3, 64)
        fiber_only = np.all(freqs[:, :2] == 0, axis=1)
        assert np.all(vals[~fiber_only] == 0.0)
        assert np.allclose(vals[fiber_only], on_circle.test_integrals(64)[fiber_only])


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 4]))
def test_pseudometric_axioms(seed, dim):
    rng = np.random.default_rng(seed)
    mu, nu, eta = (random_measure(rng, dim, int(rng.integers(1, 30)), rng.uniform(0.1, 1))
                   for _ in range(3))
    d = weak_star_distance
    assert d(mu, nu) == d(nu, mu)
    assert d(mu, nu) <= d(mu, eta) + d(eta, nu) + 1e-12
    assert 0 <= d(mu, nu) <= 4
    t = float(rng.random())
    assert d(mu.mix(eta, t), nu) <= t * d(mu, nu) + (1 - t) * d(eta, nu) + 1e-12


class TestPointMeasure:
    def test_validation(self):
        with pytest.raises(InvalidParameter):
            PointMeasure([[0.1, 0.2]], [0.0])
        with pytest.raises(InvalidParameter):
            PointMeasure([[0.1, 0.2], [0.3, 0.4]], [0.7, 0.7])
        with pytest.raises(InvalidParameter):
            PointMeasure([[1.0, 0.2]], [1.0])

    def test_subprobability_and_normalize(self):
        mu = PointMeasure([[0.1, 0.2], [0.3, 0.4]], [0.1, 0.3])
        assert mu.mass == pytest.approx(0.4)
        assert mu.normalized().mass == pytest.approx(1.0)

    def test_csv_round_trip(self):
        mu = random_measure(np.random.default_rng(3), 3, mass=0.5)
        back = PointMeasure.from_csv(mu.to_csv())
        assert np.array_equal(back.points, mu.points)
        assert np.array_equal(back.weights, mu.weights)


class TestEmpirical:
    def test_full_interval(self, cat2):
        orb = orbit(cat2, [0.1, 0.3], 50)
        mu = empirical_measure_on(orb, TimeSet.interval(0, 50), 50)
        assert mu.mass == pytest.approx(1.0)
        assert len(mu) == 50

    def test_single_time(self, cat2):
        orb = orbit(cat2, [0.1, 0.3], 4)
        mu = empirical_measure_on(orb, TimeSet([0], 4), 4)
        assert mu.weights.tolist() == [0.25]
        assert np.array_equal(mu.points[0], orb[0])

    def test_empty(self, cat2):
        orb = orbit(cat2, [0.1, 0.3], 10)
        with pytest.raises(EmptyTimeSet):
            empirical_measure_on(orb, TimeSet([12], 20), 10)

    @given(st.lists(st.integers(0, 79), min_size=1, max_size=60), st.integers(1, 80))
    def test_mass_identity(self, times, n):
        orb = np.random.default_rng(0).random((80, 2))
        E = TimeSet(times, 80)
        count = int(np.count_nonzero(E.times < n))
        if count == 0:
            return
        assert empirical_measure_on(orb, E, n).mass == pytest.approx(count / n, rel=1e-12)


class TestPushforward:
    def test_dirac(self, cat2):
        mu = pushforward(PointMeasure.dirac([0.5, 0.5]), cat2)
        assert mu.points.tolist() == [[0.5, 0.0]]

    def test_mass_and_composition(self, cat2):
        mu = random_measure(np.random.default_rng(5), 2, mass=0.7)
        twice = pushforward(pushforward(mu, cat2), cat2)
        assert twice.mass == pytest.approx(mu.mass)
        direct = orbit(cat2, mu.points, 3)[2]
        assert np.array_equal(twice.points, direct)

    def test_periodic_orbit_is_invariant(self, cat2):
        cycle = orbit(cat2, [0.5, 0.5], 3)
        mu = PointMeasure(cycle, np.full(3, 1 / 3))
        assert almost_invariance_defect(mu, cat2) <= 1e-15

    @pytest.mark.parametrize("name", ["cat2", "catrot", "catns", "lin4"])
    def test_empirical_defect(self, name):
        system = make_system(name)
        x0 = np.random.default_rng(7).random(system.dim)
        orb = orbit(system, x0, 2000)
        for n in (10, 300, 2000):
            mu = empirical_measure_on(orb, TimeSet.interval(0, n), n)
            assert almost_invariance_defect(mu, system) <= 4 / n

    def test_dilated_time_set_defect(self):
        # telescoping: the defect of mu_x^n[E(M)] is at most #boundary(E(M) ∩ [0,n)) / n
        system = make_system("catns")
        orb = orbit(system, np.array([0.3, 0.6, 0.05]), 5000)
        phi = system.observable(1, orb)
        for M in (10, 100):
            EM = dilate(hyperbolic_times(phi, 0.01), M)
            n = 5000
            if len(EM.clip(0, n)) == 0:
                continue
            mu = empirical_measure_on(orb, EM, n)
            c = len(boundary(EM.clip(0, n)))
            assert almost_invariance_defect(mu, system) <= 1 / M + c / n


class TestTimeAveraged:
    def test_single_time_returns_input(self, cat2):
        mu = random_measure(np.random.default_rng(6), 2)
        out = time_averaged_measure(mu, [TimeSet([0], 1)] * len(mu), cat2)
        assert np.allclose(out.points, mu.points)
        assert np.allclose(out.weights, mu.weights)

    def test_two_times(self, cat2):
        mu = random_measure(np.random.default_rng(8), 2, atoms=5)
        out = time_averaged_measure(mu, [TimeSet([0, 1], 2)] * 5, cat2)
        expected = mu.mix(pushforward(mu, cat2), 0.5)
        assert weak_star_distance(out, expected) <= 1e-15
        assert out.mass == pytest.approx(1.0)

    def test_random_times(self, cat2):
        rng = np.random.default_rng(9)
        mu = random_measure(rng, 2, atoms=8)
        times = [TimeSet(np.flatnonzero(rng.random(12) < 0.4), 12) for _ in range(8)]
        times[0] = TimeSet([3], 12)
        out = time_averaged_measure(mu, times, cat2)
        assert out.mass == pytest.approx(1.0)
        orbs = orbit(cat2, mu.points, 12)
        allowed = {tuple(orbs[k, s]) for s, F in enumerate(times) for k in F}
        assert all(tuple(p) in allowed for p in out.points)

    def test_all_empty(self, cat2):
        mu = random_measure(np.random.default_rng(1), 2, atoms=2)
        with pytest.raises(EmptyTimeSet):
            time_averaged_measure(mu, [TimeSet([], 3)] * 2, cat2)


class TestComponent:
    def test_half_and_equal(self):
        mu = random_measure(np.random.default_rng(2), 2)
        P = GridPartition(2, 2)
        assert is_component(mu.scaled(0.5), mu, P)[0]
        assert is_component(mu, mu, P)[0]

    def test_disjoint(self):
        P = GridPartition(2, 1)
        ok, worst = is_component(PointMeasure.dirac([0.1, 0.1]), PointMeasure.dirac([0.9, 0.9]), P)
        assert not ok and worst == pytest.approx(1.0)
