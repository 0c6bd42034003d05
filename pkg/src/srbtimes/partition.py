"""Dyadic grid partitions of the d-torus."""
import numpy as np

from ._validation import check_positive_int
from .exceptions import DimensionError


class GridPartition:
    """Boxes of side ``2**-r`` along each of ``dim`` axes; ``#P = 2**(r*dim)``."""

    def __init__(self, dim, resolution):
        self.dim = check_positive_int(dim, "dim")
        self.resolution = check_positive_int(resolution, "resolution")
        self.cells = 1 << self.resolution

    def __repr__(self):
        return f"GridPartition(dim={self.dim}, resolution={self.resolution})"

    def __eq__(self, other):
        return (isinstance(other, GridPartition) and self.dim == other.dim
                and self.resolution == other.resolution)

    @property
    def size(self):
        return self.cells ** self.dim

    @property
    def diameter(self):
        return np.sqrt(self.dim) / self.cells

    def atom_index(self, points):
        """Multi-index of the box containing each point, shape ``(..., dim)``."""
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DimensionError(f"partition has dim {self.dim}, points have {points.shape[-1]}")
        idx = np.floor(points * self.cells).astype(np.int64)
        return np.clip(idx, 0, self.cells - 1)

    def atom_id(self, points):
        """Flat integer id of the box containing each point."""
        idx = self.atom_index(points)
        flat = np.zeros(idx.shape[:-1], dtype=np.int64)
        for c in range(self.dim):
            flat = flat * self.cells + idx[..., c]
        return flat
