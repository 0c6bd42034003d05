"""Finite-horizon density profiles and the hyperbolic / non-hyperbolic dichotomy.

For observable ``i`` along the orbit of ``x``:

* the alpha profile tabulates ``d_n(E^δ(M))`` where ``E^δ`` are the
  δ-hyperbolic times of ``phi^i``;
* the beta profile tabulates ``d_n(F^{δ,M}(M))`` where ``F^{δ,M}`` are the
  weakly hyperbolic times of ``-phi^i``.

The asymptotic quantities are limits in ``n``, ``M`` and ``δ``; here each is
replaced by the maximum over a finite grid at a fixed horizon.  These are
surrogates, and the classifier keeps an ``Undetermined`` band rather than
forcing a label.
"""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._validation import check_positive_int, check_positive_real
from .dynsys import make_system, observable_sequence, orbit
from .exceptions import EmptyTimeSet, IncompleteInput, NoHyperbolicTime
from .measures import (DEFAULT_TERMS, ReferenceMeasure, empirical_measure_on, haar,
                       weak_star_distance)
from .seeding import seed_points
from .timesets import (RealSequence, TimeSet, boundary, chain, density, dilate, g_double,
                       hyperbolic_times, interval_refine, weakly_hyperbolic_times)

DEFAULT_DELTAS = (0.005, 0.01, 0.03, 0.1)
DEFAULT_MS = (10, 100, 1000)
CHECKPOINTS = 10


@dataclass(frozen=True)
class Label:
    kind: str   # "HyperbolicBasin", "NonHyperbolicComponent" or "Undetermined"
    index: int = None

    def __str__(self):
        return self.kind if self.index is None else f"{self.kind}({self.index})"

    @classmethod
    def parse(cls, text):
        if "(" not in text:
            return cls(text)
        kind, rest = text.split("(", 1)
        return cls(kind, int(rest.rstrip(")")))


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """``table[a, b] = d_n`` at ``deltas[a]``, ``ms[b]``; ``curves`` holds running densities."""

    index: int
    kind: str
    deltas: tuple
    ms: tuple
    n: int
    table: np.ndarray
    curves: np.ndarray = None

    def summary(self):
        """Grid surrogate of the asymptotic density: the largest tabulated entry.

        Alpha entries grow as δ shrinks and ``M`` grows, so this is the
        entry at the smallest δ and largest ``M``.
        """
        return float(np.max(self.table))


def _grid_check(deltas, ms):
    deltas = tuple(check_positive_real(d, "delta") for d in deltas)
    ms = tuple(check_positive_int(m, "M") for m in ms)
    if not deltas or not ms:
        raise IncompleteInput("delta and M grids must be nonempty")
    if any(b <= a for a, b in zip(deltas, deltas[1:])) or any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("grids must be strictly increasing")
    return deltas, ms


def _checkpoints(n):
    return np.unique(np.linspace(n / CHECKPOINTS, n, CHECKPOINTS).astype(np.int64))


def _running(E, n):
    return np.array([density(E, int(c)) for c in _checkpoints(n)])


def _profile(seq, kind, index, deltas, ms, n):
    table = np.zeros((len(deltas), len(ms)))
    curves = np.zeros((len(deltas), len(ms), len(_checkpoints(n))))
    for a, d in enumerate(deltas):
        E = hyperbolic_times(seq, d) if kind == "alpha" else None
        for b, M in enumerate(ms):
            base = E if E is not None else weakly_hyperbolic_times(seq, d, M)
            S = dilate(base, M)
            table[a, b] = density(S, n)
            curves[a, b] = _running(S, n)
    return DensityProfile(index, kind, deltas, ms, n, table, curves)


def alpha_profile(system, x0, i, deltas=DEFAULT_DELTAS, ms=DEFAULT_MS, n=100_000,
                  orbit_points=None):
    """Entries ``d_n(E^δ_{Φ_i}(M))`` over the grid."""
    deltas, ms = _grid_check(deltas, ms)
    seq = observable_sequence(system, x0, n, i, orbit_points)
    return _profile(seq, "alpha", i, deltas, ms, n)


def beta_profile(system, x0, i, deltas=DEFAULT_DELTAS, ms=DEFAULT_MS, n=100_000,
                 orbit_points=None):
    """Entries ``d_n(F^{δ,M}_{-Φ_i}(M))`` over the grid."""
    deltas, ms = _grid_check(deltas, ms)
    seq = observable_sequence(system, x0, n, i, orbit_points)
    return _profile(RealSequence(-seq.values), "beta", i, deltas, ms, n)


def decide(alpha_hat, beta_hat, k, tau_hi=0.99, tau_lo=0.01, beta_hi=0.1):
    """Label from grid summaries.

    ``alpha_hat[i]`` for ``i = 1..k`` and ``beta_hat[i]`` for ``i = 1..k+1``;
    ``alpha_hat[0]`` is 1 by convention.  Picks the largest ``i <= k`` with
    ``alpha_hat[i] >= tau_hi``, then reads ``beta_hat[i+1]``: at least
    ``beta_hi`` gives ``HyperbolicBasin(i)``, at most ``tau_lo`` gives
    ``NonHyperbolicComponent(i)``, anything between is ``Undetermined``.
    """
    missing = [f"alpha[{i}]" for i in range(1, k + 1) if i not in alpha_hat]
    missing += [f"beta[{i}]" for i in range(1, k + 2) if i not in beta_hat]
    if missing:
        raise IncompleteInput(f"missing profiles: {', '.join(missing)}")
    i = 0
    for j in range(1, k + 1):
        if alpha_hat[j] >= tau_hi:
            i = j
    b = beta_hat[i + 1]
    if b >= beta_hi:
        return Label("HyperbolicBasin", i)
    if b <= tau_lo:
        return Label("NonHyperbolicComponent", i)
    return Label("Undetermined", i)


def candidate_times(system, x0, i, delta, M, N, P, n, orbit_points=None):
    """``G_{-Φ_{i+1}}((N)) ∩ E^δ_{Φ_i}(P) ∩ [1, n)`` and the anchor set ``E^δ_{Φ_i}``."""
    if not 0 <= i <= system.k:
        raise ValueError(f"index {i} outside 0..{system.k}")
    pts = orbit(system, x0, n) if orbit_points is None else orbit_points[:n]
    lower = observable_sequence(system, None, n, i, pts)
    upper = observable_sequence(system, None, n, i + 1, pts)
    G = g_double(-upper.values, delta, M, N)
    anchors = hyperbolic_times(lower, delta)
    cand = (G & dilate(anchors, P)).clip(1, n)
    return cand, anchors


def srb_candidate_measure(system, x0, i, delta=0.03, M=100, N=100, P=100, n=100_000,
                          orbit_points=None):
    """Normalized empirical measure on the candidate time set."""
    pts = orbit(system, x0, n) if orbit_points is None else orbit_points[:n]
    cand, _ = candidate_times(system, x0, i, delta, M, N, P, n, pts)
    if len(cand) == 0:
        raise EmptyTimeSet(f"{system.name}: candidate time set is empty for i={i}")
    return empirical_measure_on(pts, cand, n).normalized()


class Refinement(NamedTuple):
    refined: TimeSet
    candidate: TimeSet
    discarded: float
    stated_bound: float
    certified_bound: float


def refine_report(candidate, anchors, M, N, P, n):
    """Interval refinement of ``candidate`` against ``anchors`` with two bounds.

    ``stated_bound`` is ``P/N + P/M + P/n``.  ``certified_bound`` is
    ``(P + 1)(#∂C + 1) / n`` for ``C ⊆ anchors(P)``: inside a gap ``(k, l]``
    of the anchors, ``C`` lives in ``[l - P, l]``, a gap loses times only if
    it holds a boundary point of ``C``, and at most ``P`` times precede the
    first anchor.
    """
    refined = interval_refine(candidate, anchors)
    discarded = density(candidate - refined, n)
    n_boundary = len(boundary(candidate))
    return Refinement(refined, candidate, discarded, P / N + P / M + P / n,
                      (P + 1) * (n_boundary + 1) / n)


def refine_to_intervals(system, x0, i, delta, M, N, P, n, orbit_points=None):
    cand, anchors = candidate_times(system, x0, i, delta, M, N, P, n, orbit_points)
    return refine_report(cand, anchors, M, N, P, n)


def complement_defect_from_sequence(a, delta, M, n, sup_norm=None):
    """``|∫φ dζ - ζ(X) δ| - ||φ||/M`` for ``ζ = μ^{n'}[[0, n') \\ E^δ<M>]``.

    ``n'`` is the largest δ-hyperbolic time ``<= n`` (searched down to
    ``n/2``).  Returns ``(defect, n')``.
    """
    a = np.asarray(getattr(a, "values", a), dtype=float)
    E = hyperbolic_times(a[: n + 1], delta)
    t = E.times
    t = t[(t <= n) & (t >= max(1, n // 2))]
    if t.size == 0:
        raise NoHyperbolicTime(f"no {delta}-hyperbolic time in [{max(1, n // 2)}, {n}]")
    top = int(t[-1])
    chained = chain(E, M).mask(top)
    comp = np.flatnonzero(~chained)
    norm = float(np.max(np.abs(a[:top]))) if sup_norm is None else sup_norm
    integral = a[comp].sum() / top
    mass = comp.size / top
    return abs(integral - mass * delta) - norm / M, top


def complement_mass_defect(system, x0, i, delta, M, n, orbit_points=None):
    seq = observable_sequence(system, x0, n + 1, i, orbit_points)
    return complement_defect_from_sequence(seq, delta, M, n, system.sup_norm(i))[0]


def reference_measure(system):
    """Known SRB measure of a built-in system (Haar, or Haar times the attracting circle)."""
    if system.name == "catns":
        return ReferenceMeasure(3, {2: 0.5})
    return haar(system.dim)


@dataclass
class ClassificationRecord:
    seed_index: int
    seed: int
    x0: np.ndarray
    exponents: tuple
    alpha: dict = field(repr=False)
    beta: dict = field(repr=False)
    alpha_hat: dict = None
    beta_hat: dict = None
    label: Label = None
    distances: dict = None
    diagnostics: dict = None

    def relabel(self, tau_hi=0.99, tau_lo=0.01, beta_hi=0.1):
        k = len(self.exponents) - 2
        return decide(self.alpha_hat, self.beta_hat, k, tau_hi, tau_lo, beta_hi)


def classify_point(system, x0, deltas=DEFAULT_DELTAS, ms=DEFAULT_MS, n=100_000, burn_in=1000,
                   tau_hi=0.99, tau_lo=0.01, beta_hi=0.1, candidate=(0.03, 100, 100, 100),
                   terms=DEFAULT_TERMS, orbit_points=None, seed_index=0, seed=0):
    """Profiles, label and reference distances for one initial condition."""
    deltas, ms = _grid_check(deltas, ms)
    x0 = np.asarray(x0, dtype=float)
    pts = orbit(system, x0, n) if orbit_points is None else orbit_points[:n]
    k = system.k
    seqs = [observable_sequence(system, None, n, i, pts) for i in range(k + 2)]
    exponents = tuple(s.birkhoff_average(burn_in) for s in seqs)
    alpha = {i: _profile(seqs[i], "alpha", i, deltas, ms, n) for i in range(1, k + 1)}
    beta = {i: _profile(RealSequence(-seqs[i].values), "beta", i, deltas, ms, n)
            for i in range(1, k + 2)}
    alpha_hat = {i: p.summary() for i, p in alpha.items()}
    beta_hat = {i: p.summary() for i, p in beta.items()}
    label = decide(alpha_hat, beta_hat, k, tau_hi, tau_lo, beta_hi)

    ref = reference_measure(system)
    full = TimeSet.interval(0, n)
    distances = {"empirical": weak_star_distance(empirical_measure_on(pts, full, n), ref, terms)}
    delta, M, N, P = candidate
    i = label.index
    cand, anchors = candidate_times(system, x0, i, delta, M, N, P, n, pts)
    rep = refine_report(cand, anchors, M, N, P, n)
    diagnostics = {"discarded": rep.discarded, "stated_bound": rep.stated_bound,
                   "certified_bound": rep.certified_bound}
    if len(cand):
        mu = empirical_measure_on(pts, cand, n).normalized()
        distances["candidate"] = weak_star_distance(mu, ref, terms)
    else:
        distances["candidate"] = float("nan")
    try:
        diagnostics["complement_defect"] = complement_defect_from_sequence(
            seqs[i], delta, M, n - 1, system.sup_norm(i))[0]
    except NoHyperbolicTime:
        diagnostics["complement_defect"] = float("nan")
    return ClassificationRecord(seed_index, seed, x0, exponents, alpha, beta,
                                alpha_hat, beta_hat, label, distances, diagnostics)


def _classify_batch(system, points, offset, seeds, kwargs):
    n = kwargs["n"]
    orb = orbit(system, points, n)
    return [classify_point(system, points[s], orbit_points=orb[:, s, :],
                           seed_index=offset + s, seed=seeds[s], **kwargs)
            for s in range(points.shape[0])]


def classify_points(system, points, seeds=None, batch_size=10, n_jobs=1, **kwargs):
    """Classify many initial conditions; records come back in input order."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    seeds = list(range(points.shape[0])) if seeds is None else list(seeds)
    starts = range(0, points.shape[0], batch_size)
    jobs = [(system, points[lo:lo + batch_size], lo, seeds[lo:lo + batch_size], kwargs)
            for lo in starts]
    if n_jobs == 1:
        batches = [_classify_batch(*job) for job in jobs]
    else:
        from joblib import Parallel, delayed
        batches = Parallel(n_jobs=n_jobs)(delayed(_classify_batch)(*job) for job in jobs)
    return [rec for batch in batches for rec in batch]


def ensemble_run(config):
    """One record per seed derived from ``config.master_seed``."""
    system = make_system(config.system, config.params)
    seeds, points = seed_points(config.master_seed, config.seeds, system.dim)
    c = config.candidate
    return classify_points(
        system, points, seeds, batch_size=config.batch_size, n_jobs=config.n_jobs,
        deltas=config.delta_grid, ms=config.m_grid, n=config.n, burn_in=config.burn_in,
        tau_hi=config.tau_hi, tau_lo=config.tau_lo, beta_hi=config.beta_hi,
        candidate=(c.delta, c.M, c.N, c.P), terms=config.terms)


def summarize(records):
    counts = {}
    for r in records:
        counts[str(r.label)] = counts.get(str(r.label), 0) + 1
    exps = np.array([r.exponents for r in records])
    dist = {}
    for key in ("empirical", "candidate"):
        vals = np.array([r.distances[key] for r in records], dtype=float)
        vals = vals[~np.isnan(vals)]
        dist[key] = float(vals.mean()) if vals.size else float("nan")
    defects = np.array([r.diagnostics["complement_defect"] for r in records], dtype=float)
    defects = defects[~np.isnan(defects)]
    return {
        "records": len(records),
        "complement_defect_max": float(defects.max()) if defects.size else float("nan"),
        "complement_defect_positive": int(np.count_nonzero(defects > 0)),
        "refinement_discarded_max": max((r.diagnostics["discarded"] for r in records), default=0.0),
        "label_counts": dict(sorted(counts.items())),
        "mean_exponents": exps.mean(axis=0).tolist() if records else [],
        "mean_distances": dist,
    }
