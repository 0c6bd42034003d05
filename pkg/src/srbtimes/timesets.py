"""Hyperbolic-time sets of finite real sequences.

A sequence ``a = (a_0, ..., a_{N-1})`` is typically an observable read along
an orbit, ``a_k = phi(T^k x)``.  Writing ``S_p = a_0 + ... + a_{p-1}`` and
``B_p = S_p - p*delta``, the time ``p`` is delta-hyperbolic exactly when
``B_p >= B_k`` for every ``k < p``; all fast paths below are running or
sliding maxima of ``B``.  Brute-force evaluations of the same definitions
live in :mod:`srbtimes.oracles`.

Two counting conventions coexist on purpose: :func:`density` counts
``E ∩ [1, n]`` while empirical measures sum over ``0 <= k < n``.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from ._validation import (check_nonneg_int, check_positive_int,
                          check_positive_real, check_values)
from .exceptions import InvalidParameter


class ComponentSumWarning(RuntimeWarning):
    """A component of ``F(M)`` failed ``sum(a_I) >= delta * #I``."""


class RealSequence:
    """A finite sequence of finite reals.

    Thin immutable wrapper around a float array; every function in this
    module also accepts plain array-likes.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = check_values(values).copy()
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self):
        return self._values

    def __len__(self):
        return self._values.size

    def __getitem__(self, item):
        return self._values[item]

    def __repr__(self):
        return f"RealSequence(len={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, RealSequence):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def sup_norm(self):
        return float(np.max(np.abs(self._values)))

    def partial_sums(self):
        """``S_0 .. S_N`` with ``S_p = sum(a[:p])``."""
        return np.concatenate(([0.0], np.cumsum(self._values)))

    def birkhoff_average(self, start=0):
        return float(np.mean(self._values[start:]))

    def to_csv_row(self):
        return ",".join(format(v, ".17g") for v in self._values)

    @classmethod
    def from_csv_row(cls, line):
        fields = [f for f in line.strip().split(",") if f.strip()]
        try:
            return cls([float(f) for f in fields])
        except ValueError as exc:
            raise InvalidParameter(f"bad sequence row {line.strip()!r}: {exc}") from None


class TimeSet:
    """Strictly increasing nonnegative integers below ``horizon``."""

    __slots__ = ("_times", "_horizon")

    def __init__(self, times, horizon):
        horizon = check_nonneg_int(horizon, "horizon")
        arr = np.unique(np.asarray(times, dtype=np.int64).ravel())
        if arr.size and (arr[0] < 0 or arr[-1] >= horizon):
            raise InvalidParameter(f"times must lie in [0, {horizon})")
        arr.setflags(write=False)
        self._times = arr
        self._horizon = horizon

    @classmethod
    def from_mask(cls, mask):
        mask = np.asarray(mask, dtype=bool)
        return cls(np.flatnonzero(mask), mask.size)

    @classmethod
    def interval(cls, start, stop, horizon=None):
        """The integers ``start <= k < stop``."""
        horizon = stop if horizon is None else horizon
        return cls(np.arange(start, stop, dtype=np.int64), horizon)

    @classmethod
    def parse(cls, text, horizon=None):
        fields = [f for f in text.strip().split(",") if f.strip()]
        times = [int(f) for f in fields]
        if horizon is None:
            horizon = max(times) + 1 if times else 0
        return cls(times, horizon)

    @property
    def times(self):
        return self._times

    @property
    def horizon(self):
        return self._horizon

    def mask(self, horizon=None):
        horizon = self._horizon if horizon is None else horizon
        out = np.zeros(horizon, dtype=bool)
        t = self._times[self._times < horizon]
        out[t] = True
        return out

    def __len__(self):
        return int(self._times.size)

    def __iter__(self):
        return iter(self._times.tolist())

    def __contains__(self, k):
        i = np.searchsorted(self._times, k)
        return bool(i < self._times.size and self._times[i] == k)

    def __eq__(self, other):
        if not isinstance(other, TimeSet):
            return NotImplemented
        return self._horizon == other._horizon and np.array_equal(self._times, other._times)

    def __hash__(self):
        return hash((self._horizon, self._times.tobytes()))

    def __repr__(self):
        head = ",".join(map(str, self._times[:8].tolist()))
        more = ",..." if self._times.size > 8 else ""
        return f"TimeSet({{{head}{more}}}, horizon={self._horizon})"

    def __str__(self):
        return ",".join(map(str, self._times.tolist()))

    def __and__(self, other):
        return TimeSet(np.intersect1d(self._times, other._times),
                       max(self._horizon, other._horizon))

    def __or__(self, other):
        return TimeSet(np.union1d(self._times, other._times),
                       max(self._horizon, other._horizon))

    def __sub__(self, other):
        return TimeSet(np.setdiff1d(self._times, other._times), self._horizon)

    def __le__(self, other):
        return bool(np.all(np.isin(self._times, other._times)))

    def clip(self, start, stop):
        """Restrict to ``start <= k < stop``."""
        t = self._times
        return TimeSet(t[(t >= start) & (t < stop)], self._horizon)

    def is_empty(self):
        return self._times.size == 0


@dataclass(frozen=True)
class IntervalDecomposition:
    """Maximal integer intervals ``[s, t]`` (inclusive) of a time set."""

    intervals: tuple

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def as_lists(self):
        return [[s, t] for s, t in self.intervals]


def _barrier(a, delta):
    s = np.concatenate(([0.0], np.cumsum(a)))
    return s - delta * np.arange(a.size + 1)


def hyperbolic_times(a, delta):
    """delta-hyperbolic times ``p`` in ``[1, N)``.

    ``p`` qualifies iff ``sum(a[k:p]) >= (p - k) * delta`` for every ``k < p``.
    """
    a = check_values(a)
    delta = check_positive_real(delta, "delta")
    n = a.size
    b = _barrier(a, delta)
    mask = np.zeros(n, dtype=bool)
    if n > 1:
        mask[1:] = b[1:n] >= np.maximum.accumulate(b[: n - 1])
    return TimeSet.from_mask(mask)


def weakly_hyperbolic_times(a, delta, M):
    """(delta, M)-weakly hyperbolic times: the window condition for ``p - k <= M`` only."""
    a = check_values(a)
    delta = check_positive_real(delta, "delta")
    M = check_positive_int(M, "M")
    n = a.size
    mask = np.zeros(n, dtype=bool)
    if n > 1:
        b = _barrier(a, delta)[:n]
        size = min(M, n)
        # trailing window: window_max[j] = max(b[j-M+1 .. j])
        window_max = maximum_filter1d(b, size=size, mode="nearest", origin=(size - 1) // 2)
        mask[1:] = b[1:n] >= window_max[: n - 1]
    return TimeSet.from_mask(mask)


def _run_indicator(starts, stops, horizon):
    """Mask of the union of half-open ``[start, stop)`` runs."""
    diff = np.zeros(horizon + 1, dtype=np.int64)
    np.add.at(diff, starts, 1)
    np.add.at(diff, stops, -1)
    return np.cumsum(diff[:horizon]) > 0


def dilate(E, M):
    """``E(M) = {k >= 0 : k + m in E for some 1 <= m <= M}``, clipped to the horizon."""
    M = check_positive_int(M, "M")
    t = E.times
    if t.size == 0:
        return TimeSet([], E.horizon)
    starts = np.maximum(t - M, 0)
    stops = np.minimum(t, E.horizon)
    return TimeSet.from_mask(_run_indicator(starts, stops, E.horizon))


def chain(E, M):
    """``E<M>``: times ``k`` with ``l <= k < m`` for some ``l, m`` in ``E``, ``m - l <= M``.

    Consecutive elements suffice, so this is the union of ``[e_j, e_{j+1})``
    over gaps of length at most ``M``.
    """
    M = check_positive_int(M, "M")
    t = E.times
    if t.size < 2:
        return TimeSet([], E.horizon)
    gaps = np.diff(t)
    keep = gaps <= M
    return TimeSet.from_mask(_run_indicator(t[:-1][keep], t[1:][keep], E.horizon))


def connected_components(E):
    t = E.times
    if t.size == 0:
        return IntervalDecomposition(())
    breaks = np.flatnonzero(np.diff(t) > 1)
    starts = np.concatenate(([t[0]], t[breaks + 1]))
    ends = np.concatenate((t[breaks], [t[-1]]))
    return IntervalDecomposition(tuple(zip(starts.tolist(), ends.tolist())))


def _component_sum_check(prefix, components, delta):
    bad = []
    for s, t in components:
        total = prefix[t + 1] - prefix[s]
        need = delta * (t - s + 1)
        if total < need - 1e-9 * (1.0 + abs(need)):
            bad.append((s, t, total, need))
    return bad


def _mild(a, delta, M, check=True):
    F = weakly_hyperbolic_times(a, delta, M)
    FM = dilate(F, M)
    comps = connected_components(FM)
    prefix = np.concatenate(([0.0], np.cumsum(a)))
    if check:
        bad = _component_sum_check(prefix, comps, delta)
        if bad:
            s, t, total, need = bad[0]
            warnings.warn(
                f"{len(bad)} component(s) of F(M) violate sum(a_I) >= delta*#I; "
                f"first [{s},{t}]: sum={total!r} < {need!r}",
                ComponentSumWarning, stacklevel=3)
    half = delta / 2.0
    mask = np.zeros(a.size, dtype=bool)
    for s, t in comps:
        if t == s:
            continue
        b = prefix[s:t + 1] - half * np.arange(t - s + 1)
        mask[s + 1:t + 1] = b[1:] >= np.maximum.accumulate(b[:-1])
    return TimeSet.from_mask(mask), F, FM


def mildly_hyperbolic_times(a, delta, M, check=True):
    """(delta, M)-mildly hyperbolic times.

    Union over components ``I = [s, t]`` of ``dilate(F, M)`` of the
    delta/2-hyperbolic times of ``a`` restricted to ``I``, indexed absolutely;
    the left endpoint ``s`` is never a candidate.  With ``check`` on, every
    component is verified to satisfy ``sum(a_I) >= delta * #I`` and a
    :class:`ComponentSumWarning` reports violations.
    """
    a = check_values(a)
    delta = check_positive_real(delta, "delta")
    M = check_positive_int(M, "M")
    return _mild(a, delta, M, check)[0]


def component_sum_violations(a, delta, M):
    """Components ``(s, t, sum, delta*#I)`` of ``dilate(F, M)`` with deficient sums."""
    a = check_values(a)
    delta = check_positive_real(delta, "delta")
    F = weakly_hyperbolic_times(a, delta, check_positive_int(M, "M"))
    prefix = np.concatenate(([0.0], np.cumsum(a)))
    return _component_sum_check(prefix, connected_components(dilate(F, M)), delta)


def g_double(a, delta, M, N, check=True):
    """``G((N)) = G(N) ∩ F(M)`` with ``G`` mildly and ``F`` weakly hyperbolic times."""
    a = check_values(a)
    delta = check_positive_real(delta, "delta")
    M = check_positive_int(M, "M")
    N = check_positive_int(N, "N")
    G, _, FM = _mild(a, delta, M, check)
    return dilate(G, N) & FM


def density(E, n):
    """``d_n(E) = #(E ∩ [1, n]) / n``."""
    n = check_positive_int(n, "n")
    t = E.times
    count = np.searchsorted(t, n, side="right") - np.searchsorted(t, 1, side="left")
    return float(count) / n


def boundary(F):
    """``F Δ (F + 1)``; the horizon grows by one."""
    h = F.horizon + 1
    m = F.mask(h)
    shifted = np.zeros(h, dtype=bool)
    shifted[1:] = m[:-1]
    return TimeSet.from_mask(m ^ shifted)


def interval_refine(S, E):
    """Union of ``(k, l]`` over consecutive ``k < l`` in ``E`` with ``(k, l] ⊆ S``.

    Arbitrary pairs give the same union, since ``(k, l]`` is covered by the
    consecutive steps between them.
    """
    t = E.times
    if t.size < 2 or len(S) == 0:
        return TimeSet([], S.horizon)
    h = max(S.horizon, int(t[-1]) + 1)
    covered = np.concatenate(([0], np.cumsum(S.mask(h))))
    k, l = t[:-1], t[1:]
    inside = (covered[l + 1] - covered[k + 1]) == (l - k)
    return TimeSet.from_mask(_run_indicator(k[inside] + 1, l[inside] + 1, h)[: S.horizon])


def neutral_block_violations(a, delta):
    """Consecutive hyperbolic times ``k < l`` breaking the two-sided block bound.

    Returns ``(k, l, deviation)`` for pairs where
    ``|sum(a[k:l]) - (l - k) * delta| > max|a|``.  The lower half holds
    because ``l`` is hyperbolic.  The upper half holds too: no time strictly
    between ``k`` and ``l`` qualifies, so the barrier sits below its value at
    ``k`` until step ``l - 1`` and then gains at most ``a[l-1] - delta``.
    A nonempty result therefore signals rounding trouble.
    """
    a = check_values(a)
    E = hyperbolic_times(a, delta)
    prefix = np.concatenate(([0.0], np.cumsum(a)))
    norm = float(np.max(np.abs(a)))
    t = E.times
    if t.size < 2:
        return []
    k, l = t[:-1], t[1:]
    dev = np.abs(prefix[l] - prefix[k] - (l - k) * delta)
    bad = np.flatnonzero(dev > norm + 1e-12)
    return [(int(k[i]), int(l[i]), float(dev[i])) for i in bad]
