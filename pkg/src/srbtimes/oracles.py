"""Brute-force evaluations of the time-set definitions.

Each function enumerates its definition literally, with direct window sums
and no prefix sums or running maxima, so it shares no code path with
:mod:`srbtimes.timesets`.  Inputs are plain Python lists and sets; outputs
are sorted lists.  Costs are O(N^2) to O(N^3).
"""


def _window_ok(a, k, p, level):
    return sum(a[k:p]) >= (p - k) * level


def hyperbolic(a, delta):
    return [p for p in range(1, len(a)) if all(_window_ok(a, k, p, delta) for k in range(p))]


def weakly(a, delta, M):
    return [p for p in range(1, len(a))
            if all(_window_ok(a, k, p, delta) for k in range(max(p - M, 0), p))]


def dilate(E, M, horizon):
    E = set(E)
    return [k for k in range(horizon) if any(k + m in E for m in range(1, M + 1))]


def chain(E, M, horizon):
    E = sorted(E)
    out = []
    for k in range(horizon):
        if any(l <= k < m and m - l <= M for l in E for m in E):
            out.append(k)
    return out


def components(E):
    out = []
    for k in sorted(E):
        if out and out[-1][1] == k - 1:
            out[-1][1] = k
        else:
            out.append([k, k])
    return out


def mildly(a, delta, M):
    F = weakly(a, delta, M)
    FM = dilate(F, M, len(a))
    out = []
    for s, t in components(FM):
        for p in range(s + 1, t + 1):
            if all(_window_ok(a, k, p, delta / 2) for k in range(s, p)):
                out.append(p)
    return out


def g_double(a, delta, M, N):
    n = len(a)
    FM = set(dilate(weakly(a, delta, M), M, n))
    GN = dilate(mildly(a, delta, M), N, n)
    return [k for k in GN if k in FM]


def density(E, n):
    return len([e for e in E if 1 <= e <= n]) / n


def boundary(F):
    F = set(F)
    return sorted(F ^ {f + 1 for f in F})


def interval_refine(S, E, horizon):
    """Union over all pairs ``k < l`` of ``E`` (not only consecutive ones)."""
    S = set(S)
    E = sorted(E)
    out = set()
    for i, k in enumerate(E):
        for l in E[i + 1:]:
            block = range(k + 1, l + 1)
            if all(j in S for j in block):
                out.update(block)
    return sorted(j for j in out if j < horizon)
