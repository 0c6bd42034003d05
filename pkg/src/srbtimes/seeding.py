"""Platform-independent seed derivation (splitmix64).

``seed_stream(master, count)`` yields the first ``count`` outputs of a
splitmix64 generator started at ``master``; a point is drawn from a seed by
running a fresh splitmix64 from that seed and mapping the top 53 bits of
each output to ``[0, 1)``.
"""
import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state):
    """Advance ``state`` and return ``(new_state, output)``."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def seed_stream(master, count):
    state = int(master) & _MASK
    out = []
    for _ in range(count):
        state, z = splitmix64(state)
        out.append(z)
    return out


def seed_point(seed, dim):
    state = int(seed) & _MASK
    coords = []
    for _ in range(dim):
        state, z = splitmix64(state)
        coords.append((z >> 11) * 2.0 ** -53)
    return np.array(coords)


def seed_points(master, count, dim):
    """``(seeds, points)`` for ``count`` initial conditions on the ``dim``-torus."""
    seeds = seed_stream(master, count)
    pts = np.array([seed_point(s, dim) for s in seeds]).reshape(count, dim)
    return seeds, pts
