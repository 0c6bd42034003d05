"""Partition entropies of atomic measures and Misiurewicz-type lower bounds.

An atom of the iterated partition ``P^F`` is identified with the sequence of
grid boxes visited at the times of ``F``.  Every entropy here is computed on
the normalized measure, with ``0 log 0 = 0``.  Atom masses in the set-valued
bound are weighted frequencies over the finite sample: they estimate the
true measure of an atom and are exact only for the sample measure itself.
"""
import math
from typing import NamedTuple

import numpy as np

from ._validation import check_positive_int, check_positive_real
from .dynsys import orbit
from .exceptions import EmptyMeasure, EmptyTimeSet, UnsupportedSystem
from .partition import GridPartition
from .timesets import boundary

__all__ = [
    "GridPartition", "BoundPair", "static_entropy", "iterated_atom_label",
    "iterated_entropy", "misiurewicz_bound_fixed", "misiurewicz_bound_setvalued",
    "unstable_volume_decay", "mean_volume_decay", "decay_slope",
]

BISECTION_TOL = 1e-14


class BoundPair(NamedTuple):
    lhs: float
    rhs: float

    def holds(self, tol=1e-9):
        return self.lhs >= self.rhs - tol


def _probabilities(mu):
    total = mu.weights.sum()
    if not total > 0:
        raise EmptyMeasure("measure has zero mass")
    return mu.weights / total


def _entropy_from_groups(keys, p):
    """Entropy of the partition of atoms by equal rows of ``keys``."""
    keys = np.asarray(keys)
    if keys.ndim == 1:
        keys = keys[:, None]
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    masses = np.bincount(inv.ravel(), weights=p)
    masses = masses[masses > 0]
    masses = masses / masses.sum()
    return float(-np.sum(masses * np.log(masses)))


def _label_matrix(system, points, partition, length):
    """Atom ids along the orbits, shape ``(length, n_points)``."""
    orb = orbit(system, points, length)
    return partition.atom_id(orb)


def static_entropy(mu, partition):
    """``H_mu(P) = -Σ mu(A) log mu(A)`` of the normalized measure."""
    p = _probabilities(mu)
    return _entropy_from_groups(partition.atom_id(mu.points), p)


def iterated_atom_label(x, partition, F, system):
    """``((k, box multi-index), ...)`` for ``k`` in ``F``: the atom of ``P^F`` holding ``x``."""
    if len(F) == 0:
        raise EmptyTimeSet("iterated partition needs a nonempty time set")
    orb = orbit(system, np.asarray(x, dtype=float), int(F.times[-1]) + 1)
    idx = partition.atom_index(orb[F.times])
    return tuple((int(k), tuple(int(c) for c in row)) for k, row in zip(F.times, idx))


def iterated_entropy(mu, partition, F, system):
    """``H_mu(P^F)`` with ``P^F = ∨_{k ∈ F} T^{-k} P``."""
    if len(F) == 0:
        raise EmptyTimeSet("iterated partition needs a nonempty time set")
    p = _probabilities(mu)
    ids = _label_matrix(system, mu.points, partition, int(F.times[-1]) + 1)
    return _entropy_from_groups(ids[F.times].T, p)


def _block_entropy(ids, starts, cols, weights, m):
    """``H(P^m)`` of the measure with atoms ``T^{start} x_col`` and the given weights."""
    rows = np.stack([ids[starts + j, cols] for j in range(m)], axis=1)
    return _entropy_from_groups(rows, weights / weights.sum())


def misiurewicz_bound_fixed(mu, partition, F, m, system):
    """Both sides of the fixed-set bound.

    ``lhs = H_{mu^F}(P^m) / m`` with ``mu^F = (1/#F) Σ_{k∈F} T^k_* mu`` and
    ``rhs = H_mu(P^F)/#F - 3 m log(#P) #∂F / #F``.
    """
    m = check_positive_int(m, "m")
    if len(F) == 0:
        raise EmptyTimeSet("F must be nonempty")
    p = _probabilities(mu)
    t = F.times
    ids = _label_matrix(system, mu.points, partition, int(t[-1]) + m)
    S = p.size
    starts = np.repeat(t, S)
    cols = np.tile(np.arange(S), t.size)
    lhs = _block_entropy(ids, starts, cols, np.tile(p, t.size), m) / m
    h_static = _entropy_from_groups(ids[t].T, p)
    nF = len(F)
    penalty = 3.0 * m * math.log(partition.size) * len(boundary(F)) / nF
    return BoundPair(lhs, h_static / nF - penalty)


def misiurewicz_bound_setvalued(mu, partition, times, m, system):
    """Both sides of the set-valued bound for a time set attached to each atom.

    ``lhs = (∫#F dmu / m) H_{mu^F}(P^m)`` and
    ``rhs = ∫ -log mu(P^{F(x)}(x)) dmu - H_mu(F) - ∫ 3 m #∂F(x) log #P dmu``,
    where ``H_mu(F)`` is the entropy of the partition by the value of ``F``.
    """
    m = check_positive_int(m, "m")
    if len(times) != len(mu):
        raise ValueError("need one time set per sample atom")
    if all(len(F) == 0 for F in times):
        raise EmptyTimeSet("every sample time set is empty")
    p = _probabilities(mu)
    S = p.size
    L = max(int(F.times[-1]) for F in times if len(F)) + m
    ids = _label_matrix(system, mu.points, partition, L)

    counts = np.array([len(F) for F in times], dtype=float)
    starts = np.concatenate([F.times for F in times])
    cols = np.concatenate([np.full(len(F), s) for s, F in enumerate(times)])
    weights = np.concatenate([np.full(len(F), p[s]) for s, F in enumerate(times)])
    mean_count = float(np.dot(p, counts))
    lhs = mean_count / m * _block_entropy(ids, starts, cols, weights, m)

    groups = {}
    for s, F in enumerate(times):
        groups.setdefault(F.times.tobytes(), []).append(s)
    info = 0.0
    h_values = 0.0
    for members in groups.values():
        members = np.asarray(members)
        E = times[members[0]].times
        group_mass = p[members].sum()
        h_values -= group_mass * math.log(group_mass)
        if E.size == 0:
            continue
        # mass of x's P^E atom under the whole sample, for each member x
        _, inv = np.unique(ids[E].T, axis=0, return_inverse=True)
        inv = inv.ravel()
        atom_mass = np.bincount(inv, weights=p)
        info -= float(np.sum(p[members] * np.log(atom_mass[inv[members]])))
    log_size = math.log(partition.size)
    penalty = sum(3.0 * m * len(boundary(F)) * log_size * p[s] for s, F in enumerate(times))
    return BoundPair(lhs, info - h_values - penalty)


def unstable_volume_decay(system, x, n, partition, gamma=0.05):
    """``(k, -log length_k)`` for ``k = 0..n`` on an unstable segment.

    The segment is ``{x + t v_u : |t| <= gamma}``; ``length_k`` is the length
    of the sub-interval around ``t = 0`` whose points share the grid box of
    ``x`` at every time ``j < k``.  The image of the segment at time ``j`` is
    the straight segment ``f^j(x) + t λ_u^j v_u`` in the lift, so the box
    constraint at each time cuts out an interval whose ends are found by
    bisection to ``1e-14`` in ``t``.  An orbit point sitting on a box face
    can collapse the interval; its length is then floored at that tolerance.
    """
    unstable = system.linear_unstable
    if unstable is None:
        raise UnsupportedSystem(f"{system.name}: unstable bundle is not a constant direction")
    n = check_positive_int(n, "n")
    gamma = check_positive_real(gamma, "gamma")
    log_lambda, v = unstable
    orb = orbit(system, np.asarray(x, dtype=float), n)
    cells = partition.cells
    boxes = partition.atom_index(orb)

    def inside(t, j):
        z = orb[j] + t * math.exp(j * log_lambda) * v
        return bool(np.all(np.floor(z * cells) == boxes[j]))

    def shrink(edge, j):
        if inside(edge, j):
            return edge
        lo, hi = 0.0, edge
        while abs(hi - lo) > BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if inside(mid, j):
                lo = mid
            else:
                hi = mid
        return lo

    right, left = gamma, -gamma
    curve = [(0, -math.log(2.0 * gamma))]
    for k in range(1, n + 1):
        right = shrink(right, k - 1)
        left = shrink(left, k - 1)
        curve.append((k, -math.log(max(right - left, BISECTION_TOL))))
    return curve


def decay_slope(curve, k_min=5, k_max=20):
    """Least-squares slope of ``-log length`` against ``k`` over ``[k_min, k_max]``."""
    ks = np.array([k for k, _ in curve if k_min <= k <= k_max], dtype=float)
    vals = np.array([v for k, v in curve if k_min <= k <= k_max])
    if ks.size < 2:
        raise ValueError("need at least two points to fit a slope")
    return float(np.polyfit(ks, vals, 1)[0])


def mean_volume_decay(system, points, n, partition, gamma=0.05):
    """Average of :func:`unstable_volume_decay` curves over several base points.

    Integrating ``-log length`` over the base point smooths the O(1)
    per-step fluctuation that comes from where each box boundary cuts the
    segment; the slope of the averaged curve is the stable estimate.
    """
    curves = [unstable_volume_decay(system, x, n, partition, gamma) for x in np.atleast_2d(points)]
    vals = np.mean([[v for _, v in c] for c in curves], axis=0)
    return [(k, float(v)) for k, v in enumerate(vals)]
