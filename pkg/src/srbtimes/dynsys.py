"""Built-in partially hyperbolic torus maps with exact invariant splittings.

Every system is a block map on the d-torus: a hyperbolic toral automorphism
on the base, optionally skewed with a circle map on a fiber coordinate.
Bundles are ordered from most expanding (index 0, the unstable bundle)
to most contracting (index k+1, the stable bundle); observable ``i`` is the
log-derivative of the map along bundle ``i``.

Orbits are computed in double precision with explicit elementwise integer
combinations (no BLAS), so identical inputs give bit-identical orbits.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_nonneg_int, check_points, check_positive_int
from .exceptions import InvalidParameter, UnknownSystem
from .timesets import RealSequence

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
CAT = np.array([[2, 1], [1, 1]], dtype=np.int64)
CAT_LAMBDA = (3.0 + math.sqrt(5.0)) / 2.0
LIN4_BLOCK = np.array([[3, 2], [1, 1]], dtype=np.int64)
LIN4_LAMBDA = 2.0 + math.sqrt(3.0)

_SNAP = 1.0 - 1e-15


def reduce_mod1(x):
    """``x - floor(x)``, snapping values in ``[1 - 1e-15, 1)`` to 0."""
    y = x - np.floor(x)
    y[y >= _SNAP] = 0.0
    return y


def _apply_integer_matrix(A, x):
    out = np.zeros_like(x)
    rows, cols = A.shape
    for i in range(rows):
        acc = None
        for j in range(cols):
            c = int(A[i, j])
            if c == 0:
                continue
            term = x[..., j] if c == 1 else c * x[..., j]
            acc = term if acc is None else acc + term
        out[..., i] = acc
    return out


def _eig_direction(A, value):
    w, v = np.linalg.eig(A.astype(float))
    j = int(np.argmin(np.abs(w - value)))
    vec = np.real(v[:, j])
    vec = vec / np.linalg.norm(vec)
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return vec


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """A torus map together with its ordered splitting and observables.

    ``k`` is the number of one-dimensional center bundles, so there are
    ``k + 2`` observables ``phi^0 .. phi^{k+1}``.
    """

    name: str
    dim: int
    k: int
    params: dict
    blocks: tuple            # ((slice-start, integer matrix), ...)
    fiber: int = None        # index of the skew fiber coordinate, if any
    fiber_kind: str = None   # "rotation" or "sine"
    fiber_param: float = 0.0
    bundle_specs: tuple = field(default=())  # ("const", vector) or ("fiber", None)
    constant_logs: tuple = field(default=())  # log-multiplier per bundle; None if varying
    volume_preserving: bool = True

    # -- the map ---------------------------------------------------------
    def step(self, x):
        """One application of the map to points of shape ``(..., d)``."""
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        for start, A in self.blocks:
            size = A.shape[0]
            out[..., start:start + size] = _apply_integer_matrix(A, x[..., start:start + size])
        if self.fiber is not None:
            th = x[..., self.fiber]
            if self.fiber_kind == "rotation":
                out[..., self.fiber] = th + self.fiber_param
            else:
                out[..., self.fiber] = th + self.fiber_param * np.sin(2.0 * np.pi * th)
        return reduce_mod1(out)

    def jacobian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        J = np.zeros(x.shape[:-1] + (self.dim, self.dim))
        for start, A in self.blocks:
            size = A.shape[0]
            J[..., start:start + size, start:start + size] = A
        if self.fiber is not None:
            J[..., self.fiber, self.fiber] = self._fiber_derivative(x[..., self.fiber])
        return J

    def _fiber_derivative(self, th):
        if self.fiber_kind == "rotation":
            return np.ones_like(th)
        return 1.0 + 2.0 * np.pi * self.fiber_param * np.cos(2.0 * np.pi * th)

    # -- splitting ------------------------------------------------------
    @property
    def n_bundles(self):
        return self.k + 2

    def bundle(self, i, x):
        """Unit direction field of bundle ``i`` at points ``x``, shape ``(n, d)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        kind, vec = self.bundle_specs[i]
        out = np.zeros(x.shape[:-1] + (self.dim,))
        if kind == "const":
            out[...] = vec
        else:
            out[..., self.fiber] = 1.0
        return out

    def observable(self, i, x):
        """``phi^i(x)``, the log-derivative along bundle ``i``."""
        if not 0 <= i < self.n_bundles:
            raise IndexError(f"observable index {i} outside 0..{self.k + 1}")
        x = np.asarray(x, dtype=float)
        c = self.constant_logs[i]
        if c is not None:
            return np.full(x.shape[:-1], c)
        return np.log(self._fiber_derivative(x[..., self.fiber]))

    def psi(self, i, x):
        """Log-Jacobian along ``E^u ⊕ E_1 ⊕ ... ⊕ E_i`` (sum of ``phi^0..phi^i``)."""
        return sum(self.observable(j, x) for j in range(i + 1))

    def sup_norm(self, i):
        c = self.constant_logs[i]
        if c is not None:
            return abs(c)
        eps = 2.0 * np.pi * self.fiber_param
        return max(abs(math.log1p(eps)), abs(math.log1p(-eps)))

    @property
    def linear_unstable(self):
        """``(log multiplier, unit vector)`` of a constant unstable bundle, else None."""
        kind, vec = self.bundle_specs[0]
        c = self.constant_logs[0]
        if kind != "const" or c is None:
            return None
        return c, vec

    # -- self checks ----------------------------------------------------
    def invariance_defect(self, x):
        """Max deviation of ``Df(x) v_i(x)`` from the line ``v_i(f(x))`` over bundles."""
        x = np.atleast_2d(x)
        J = self.jacobian(x)
        fx = self.step(x)
        worst = 0.0
        for i in range(self.n_bundles):
            w = np.einsum("nij,nj->ni", J, self.bundle(i, x))
            u = self.bundle(i, fx)
            along = np.sum(w * u, axis=1, keepdims=True)
            resid = np.linalg.norm(w - along * u, axis=1) / np.linalg.norm(w, axis=1)
            worst = max(worst, float(np.max(resid)))
        return worst

    def domination_margin(self, x):
        """Minimum gap between consecutive log-derivatives over the sample."""
        x = np.atleast_2d(x)
        J = self.jacobian(x)
        logs = np.stack([np.log(np.linalg.norm(np.einsum("nij,nj->ni", J, self.bundle(i, x)),
                                               axis=1))
                         for i in range(self.n_bundles)])
        return float(np.min(logs[:-1] - logs[1:]))


def _cat2():
    lu = math.log(CAT_LAMBDA)
    return SystemSpec(
        name="cat2", dim=2, k=0, params={}, blocks=((0, CAT),),
        bundle_specs=(("const", _eig_direction(CAT, CAT_LAMBDA)),
                      ("const", _eig_direction(CAT, 1 / CAT_LAMBDA))),
        constant_logs=(lu, -lu))


def _catrot(rho):
    lu = math.log(CAT_LAMBDA)
    vu = np.append(_eig_direction(CAT, CAT_LAMBDA), 0.0)
    vs = np.append(_eig_direction(CAT, 1 / CAT_LAMBDA), 0.0)
    return SystemSpec(
        name="catrot", dim=3, k=1, params={"rho": rho}, blocks=((0, CAT),),
        fiber=2, fiber_kind="rotation", fiber_param=rho,
        bundle_specs=(("const", vu), ("fiber", None), ("const", vs)),
        constant_logs=(lu, 0.0, -lu))


def _catns(eps):
    lu = math.log(CAT_LAMBDA)
    vu = np.append(_eig_direction(CAT, CAT_LAMBDA), 0.0)
    vs = np.append(_eig_direction(CAT, 1 / CAT_LAMBDA), 0.0)
    return SystemSpec(
        name="catns", dim=3, k=1, params={"eps": eps}, blocks=((0, CAT),),
        fiber=2, fiber_kind="sine", fiber_param=eps,
        bundle_specs=(("const", vu), ("fiber", None), ("const", vs)),
        constant_logs=(lu, None, -lu), volume_preserving=False)


def _lin4():
    l1, l2 = LIN4_LAMBDA, CAT_LAMBDA

    def embed(vec, start):
        out = np.zeros(4)
        out[start:start + 2] = vec
        return out

    return SystemSpec(
        name="lin4", dim=4, k=2, params={}, blocks=((0, LIN4_BLOCK), (2, CAT)),
        bundle_specs=(("const", embed(_eig_direction(LIN4_BLOCK, l1), 0)),
                      ("const", embed(_eig_direction(CAT, l2), 2)),
                      ("const", embed(_eig_direction(CAT, 1 / l2), 2)),
                      ("const", embed(_eig_direction(LIN4_BLOCK, 1 / l1), 0))),
        constant_logs=(math.log(l1), math.log(l2), -math.log(l2), -math.log(l1)))


SYSTEM_NAMES = ("cat2", "catrot", "catns", "lin4")
_ALLOWED_PARAMS = {"cat2": set(), "catrot": {"rho"}, "catns": {"eps"}, "lin4": set()}


def make_system(name, params=None, check_points_count=10_000, seed=0):
    """Build and self-check a built-in system.

    ``catrot`` takes ``rho`` (default the golden-mean rotation ``(√5-1)/2``);
    ``catns`` takes ``eps`` in ``(0, 0.05]`` (default 0.01).  Invariance of
    every bundle (to 1e-12) and strict pointwise domination are checked on
    ``check_points_count`` random points.
    """
    params = dict(params or {})
    if name not in _ALLOWED_PARAMS:
        raise UnknownSystem(f"unknown system {name!r}; choose from {', '.join(SYSTEM_NAMES)}")
    extra = set(params) - _ALLOWED_PARAMS[name]
    if extra:
        raise InvalidParameter(f"{name} does not accept parameters {sorted(extra)}")
    if name == "cat2":
        system = _cat2()
    elif name == "catrot":
        rho = float(params.get("rho", GOLDEN - 1.0))
        if not 0.0 <= rho < 1.0:
            raise InvalidParameter(f"rho must lie in [0, 1), got {rho}")
        system = _catrot(rho)
    elif name == "catns":
        eps = params.get("eps", 0.01)
        if not isinstance(eps, (int, float)) or not 0.0 < eps <= 0.05:
            raise InvalidParameter(
                f"eps must lie in (0, 0.05] so the fiber derivative stays positive "
                f"and dominated, got {eps!r}")
        system = _catns(float(eps))
    else:
        system = _lin4()
    if check_points_count:
        pts = np.random.default_rng(seed).random((check_points_count, system.dim))
        defect = system.invariance_defect(pts)
        if defect > 1e-12:
            raise InvalidParameter(f"{name}: splitting not invariant (defect {defect:.3g})")
        if system.domination_margin(pts) <= 0:
            raise InvalidParameter(f"{name}: splitting not dominated")
    return system


def orbit(system, x0, n):
    """``[x0, f(x0), ..., f^{n-1}(x0)]``.

    ``x0`` of shape ``(d,)`` gives an ``(n, d)`` array; a batch ``(S, d)``
    gives ``(n, S, d)``.
    """
    n = check_positive_int(n, "n")
    x0 = np.asarray(x0, dtype=float)
    single = x0.ndim == 1
    pts = check_points(x0, system.dim)
    out = np.empty((n,) + pts.shape)
    out[0] = pts
    for j in range(1, n):
        out[j] = system.step(out[j - 1])
    return out[:, 0, :] if single else out


def observable_sequence(system, x0, n, i, orbit_points=None):
    """``(phi^i(f^k x0))_{k < n}`` as a :class:`RealSequence`."""
    if not 0 <= i <= system.k + 1:
        raise IndexError(f"observable index {i} outside 0..{system.k + 1}")
    pts = orbit(system, x0, n) if orbit_points is None else orbit_points[:n]
    return RealSequence(system.observable(i, pts))


def finite_time_exponent(system, x0, n, i, burn_in=0, orbit_points=None):
    """Average of ``phi^i`` over steps ``burn_in .. n-1``."""
    burn_in = check_nonneg_int(burn_in, "burn_in")
    if n <= burn_in:
        raise InvalidParameter(f"n must exceed burn_in, got n={n}, burn_in={burn_in}")
    seq = observable_sequence(system, x0, n, i, orbit_points)
    return seq.birkhoff_average(burn_in)
