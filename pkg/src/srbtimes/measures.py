"""Finite atomic measures on the torus and the weak-* distance between them.

Measures may have total mass below one: components of a measure are
first-class here.  Weights are stored as given; :meth:`PointMeasure.normalized`
is the explicit way to get a probability.

The distance is a truncation of

    d(mu, nu) = sum_j |∫f_j dmu - ∫f_j dnu| / (2^j (1 + ||f_j||))

over a fixed trigonometric family: ``f_0 = 1``, then for each frequency
vector ``k`` (nonzero, first nonzero entry positive, ordered by max-norm and
then lexicographically) the pair ``cos(2π k·x)``, ``sin(2π k·x)``.  Every
``f_j`` has sup-norm 1, so dropping terms ``j >= K`` changes the value by at
most ``2**(1-K)``.
"""
import itertools
from functools import lru_cache

import numpy as np

from ._validation import check_points, check_positive_int
from .dynsys import orbit
from .exceptions import DimensionError, EmptyMeasure, EmptyTimeSet, InvalidParameter

DEFAULT_TERMS = 64
_MASS_TOL = 1e-12
_CHUNK = 8192


@lru_cache(maxsize=None)
def _frequency_table(dim, K):
    freqs = [np.zeros(dim, dtype=np.int64)]
    kinds = [0]
    r = 1
    while len(kinds) < K:
        shell = [v for v in itertools.product(range(-r, r + 1), repeat=dim)
                 if max(abs(c) for c in v) == r and next(c for c in v if c != 0) > 0]
        for v in sorted(shell):
            for kind in (1, 2):
                freqs.append(np.array(v, dtype=np.int64))
                kinds.append(kind)
        r += 1
    freqs = np.array(freqs[:K])
    kinds = np.array(kinds[:K])
    freqs.setflags(write=False)
    kinds.setflags(write=False)
    return freqs, kinds


def test_family(dim, K=DEFAULT_TERMS):
    """``(frequencies, kinds)`` of the first ``K`` test functions.

    ``kinds`` is 0 for the constant, 1 for cosine and 2 for sine.
    """
    return _frequency_table(check_positive_int(dim, "dim"), check_positive_int(K, "K"))


test_family.__test__ = False  # not a pytest test


def _trig_integrals(points, weights, K):
    freqs, kinds = test_family(points.shape[1], K)
    out = np.zeros(K)
    for lo in range(0, points.shape[0], _CHUNK):
        x = points[lo:lo + _CHUNK]
        w = weights[lo:lo + _CHUNK]
        phase = np.zeros((x.shape[0], K))
        for c in range(x.shape[1]):
            phase += x[:, c:c + 1] * freqs[:, c]
        phase *= 2.0 * np.pi
        sine = kinds == 2
        vals = np.empty_like(phase)
        vals[:, ~sine] = np.cos(phase[:, ~sine])
        vals[:, sine] = np.sin(phase[:, sine])
        out += w @ vals
    return out


class PointMeasure:
    """Weighted atoms on the d-torus, ``d`` in {2, 3, 4}."""

    def __init__(self, points, weights):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] not in (2, 3, 4):
            raise DimensionError(f"points must have shape (n, d) with d in 2..4, got {points.shape}")
        points = check_points(points)
        weights = np.asarray(weights, dtype=float).ravel()
        if weights.shape[0] != points.shape[0]:
            raise InvalidParameter("one weight per atom required")
        if points.shape[0] == 0:
            raise EmptyMeasure("a PointMeasure needs at least one atom")
        if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
            raise InvalidParameter("atom weights must be finite and > 0")
        if weights.sum() > 1.0 + _MASS_TOL:
            raise InvalidParameter(f"total mass {weights.sum()!r} exceeds 1")
        self.points = points
        self.weights = weights

    @classmethod
    def dirac(cls, point):
        return cls(np.atleast_2d(point), [1.0])

    @classmethod
    def uniform(cls, points):
        points = np.atleast_2d(points)
        return cls(points, np.full(points.shape[0], 1.0 / points.shape[0]))

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def mass(self):
        return float(self.weights.sum())

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"PointMeasure(atoms={len(self)}, dim={self.dim}, mass={self.mass:.6g})"

    def normalized(self):
        return PointMeasure(self.points, self.weights / self.weights.sum())

    def scaled(self, t):
        return PointMeasure(self.points, self.weights * t)

    def mix(self, other, t):
        """``t * self + (1 - t) * other`` as a concatenation of atoms."""
        if other.dim != self.dim:
            raise DimensionError("cannot mix measures of different dimension")
        parts = [(self.points, self.weights * t), (other.points, other.weights * (1 - t))]
        keep = [(p, w) for p, w in parts if w.size and w[0] > 0]
        return PointMeasure(np.concatenate([p for p, _ in keep]),
                            np.concatenate([w for _, w in keep]))

    def test_integrals(self, K=DEFAULT_TERMS):
        return _trig_integrals(self.points, self.weights, K)

    def to_csv(self):
        cols = [f"x{c}" for c in range(self.dim)] + ["weight"]
        lines = [f"# d={self.dim},mass={self.mass:.17g}", ",".join(cols)]
        for p, w in zip(self.points, self.weights):
            lines.append(",".join(format(v, ".17g") for v in (*p, w)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text):
        rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        header, body = rows[0].split(","), rows[1:]
        if header[-1] != "weight":
            raise InvalidParameter("last CSV column must be 'weight'")
        data = np.array([[float(v) for v in ln.split(",")] for ln in body])
        return cls(data[:, :-1], data[:, -1])


class ReferenceMeasure:
    """Haar measure on the free coordinates times Dirac masses on ``fixed`` ones.

    ``ReferenceMeasure(3, {2: 0.5})`` is Lebesgue on the 2-torus times the
    point mass at ``θ = 1/2``.  Test integrals are exact.
    """

    def __init__(self, dim, fixed=None):
        self.dim = dim
        self.fixed = dict(fixed or {})

    def __repr__(self):
        return f"ReferenceMeasure(dim={self.dim}, fixed={self.fixed})"

    @property
    def mass(self):
        return 1.0

    def test_integrals(self, K=DEFAULT_TERMS):
        freqs, kinds = test_family(self.dim, K)
        free = [c for c in range(self.dim) if c not in self.fixed]
        survives = np.all(freqs[:, free] == 0, axis=1) if free else np.ones(K, dtype=bool)
        phase = np.zeros(K)
        for c, v in self.fixed.items():
            phase += freqs[:, c] * v
        phase *= 2.0 * np.pi
        vals = np.where(kinds == 2, np.sin(phase), np.cos(phase))
        return np.where(survives, vals, 0.0)


def haar(dim):
    return ReferenceMeasure(dim)


def weak_star_distance(mu, nu, K=DEFAULT_TERMS):
    """Truncated weak-* distance over the first ``K`` test functions."""
    K = check_positive_int(K, "K")
    if mu.dim != nu.dim:
        raise DimensionError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    diff = np.abs(mu.test_integrals(K) - nu.test_integrals(K))
    scale = 2.0 * np.ldexp(1.0, np.arange(K))
    return float(np.sum(diff / scale))


def empirical_measure_on(orbit_points, E, n):
    """``(1/n) Σ_{k ∈ E, 0 <= k < n} δ_{T^k x}``; mass ``#(E ∩ [0, n)) / n``."""
    n = check_positive_int(n, "n")
    orbit_points = np.asarray(orbit_points, dtype=float)
    if orbit_points.shape[0] < n:
        raise InvalidParameter(f"orbit of length {orbit_points.shape[0]} shorter than n={n}")
    t = E.times
    t = t[t < n]
    if t.size == 0:
        raise EmptyTimeSet(f"time set has no element in [0, {n})")
    return PointMeasure(orbit_points[t], np.full(t.size, 1.0 / n))


def pushforward(mu, system):
    if mu.dim != system.dim:
        raise DimensionError(f"measure dim {mu.dim} vs system dim {system.dim}")
    return PointMeasure(system.step(mu.points), mu.weights)


def almost_invariance_defect(mu, system, K=DEFAULT_TERMS):
    """``d(mu, T_* mu)``; ``mu`` is M-almost invariant when this is ``<= 1/M``."""
    return weak_star_distance(mu, pushforward(mu, system), K)


def time_averaged_measure(mu, times, orbits):
    """Set-valued time average of a sample measure.

    ``mu`` carries one atom per sample point, ``times[s]`` is the time set
    attached to atom ``s`` and ``orbits`` is either a ``(L, S, d)`` array of
    sample orbits or a system used to generate them.  Returns
    ``∫ Σ_{k∈F(x)} δ_{T^k x} dmu / ∫ #F dmu``.
    """
    if len(times) != len(mu):
        raise InvalidParameter("need one time set per sample atom")
    if not isinstance(orbits, np.ndarray):
        L = max((int(t.times[-1]) + 1 for t in times if len(t)), default=1)
        orbits = orbit(orbits, mu.points, L)
    pts, wts = [], []
    for s, F in enumerate(times):
        if len(F):
            pts.append(orbits[F.times, s])
            wts.append(np.full(len(F), mu.weights[s]))
    if not pts:
        raise EmptyTimeSet("every sample time set is empty")
    wts = np.concatenate(wts)
    return PointMeasure(np.concatenate(pts), wts / wts.sum())


def atom_masses(mu, partition):
    """Mass of each partition atom as a dict ``{atom id: mass}``."""
    ids = partition.atom_id(mu.points)
    uniq, inv = np.unique(ids, return_inverse=True)
    return dict(zip(uniq.tolist(), np.bincount(inv, weights=mu.weights).tolist()))


def is_component(nu, mu, partition):
    """Whether ``nu(A) <= mu(A) + 1e-12`` on every atom ``A``; also the worst excess."""
    if nu.dim != mu.dim:
        raise DimensionError("dimension mismatch")
    m = atom_masses(mu, partition)
    worst = 0.0
    for atom, mass in atom_masses(nu, partition).items():
        worst = max(worst, mass - m.get(atom, 0.0))
    return worst <= _MASS_TOL, worst
