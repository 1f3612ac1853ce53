"""Deterministic gradient noise and jittered grid sampling.

All randomness comes from splitmix-style integer hashing of lattice
coordinates, so equal seeds give bit-identical fields on every platform.
Everything here is the 2D planar case: plates are flat and imaged
perpendicular to the surface, so one noise slice is enough and the
nearest-center search only has to look at a 3x3 cell neighborhood.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_C1 = np.uint64(0x9E3779B97F4A7C15)
_C2 = np.uint64(0xC2B2AE3D27D4EB4F)
_SALT_GRAD = np.uint64(0xA2C68F9B1D3E5709)
_SALT_JIT_X = np.uint64(0x6F1D2B4C8A9E3517)
_SALT_JIT_Y = np.uint64(0x51F067D3B8A4C92E)

# 8 unit gradients (axes + diagonals), classic Perlin style.
_SQ = np.sqrt(0.5)
_GRAD_X = np.array([1.0, -1.0, 0.0, 0.0, _SQ, -_SQ, _SQ, -_SQ])
_GRAD_Y = np.array([0.0, 0.0, 1.0, -1.0, _SQ, _SQ, -_SQ, -_SQ])

# Unit-gradient 2D Perlin peaks at sqrt(2)/2 (cell center, gradients
# aligned inward); rescale so the output range is exactly [-1, 1].
_NORM = np.sqrt(2.0)


def _mix(h):
    h = (h ^ (h >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    h = (h ^ (h >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return h ^ (h >> np.uint64(31))


def _lattice_hash(ix, iy, seed, salt):
    """Hash integer lattice coordinates to uint64. ix, iy: int64 arrays."""
    # seed term computed in Python ints: numpy warns on scalar uint64 overflow
    seed_term = np.uint64(((seed & 0xFFFFFFFFFFFFFFFF) * 0xD6E8FEB86659FD93) & 0xFFFFFFFFFFFFFFFF)
    h = ix.astype(np.uint64) * _C1
    h ^= iy.astype(np.uint64) * _C2
    h ^= seed_term
    h ^= salt
    return _mix(h)


def _hash_unit(ix, iy, seed, salt):
    """Hash to floats strictly inside (0, 1)."""
    h = _lattice_hash(ix, iy, seed, salt)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def _fade(t):
    # improved quintic fade: 6t^5 - 15t^4 + 10t^3
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _grad_dot(ix, iy, dx, dy, seed):
    g = (_lattice_hash(ix, iy, seed, _SALT_GRAD) & np.uint64(7)).astype(np.intp)
    return _GRAD_X[g] * dx + _GRAD_Y[g] * dy


def perlin(px, py, frequency, seed):
    """Classic gradient noise at (px, py) * frequency.

    Accepts scalars or same-shape arrays; returns float64 of matching
    shape (scalar inputs give a Python float). Values lie in [-1, 1],
    are continuous in p, and vanish on the lattice.
    """
    if frequency <= 0:
        raise ConfigError(f"perlin frequency must be > 0, got {frequency}")
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    scalar = px.ndim == 0 and py.ndim == 0
    px, py = np.atleast_1d(px * frequency), np.atleast_1d(py * frequency)

    x0 = np.floor(px).astype(np.int64)
    y0 = np.floor(py).astype(np.int64)
    fx = px - x0
    fy = py - y0

    n00 = _grad_dot(x0, y0, fx, fy, seed)
    n10 = _grad_dot(x0 + 1, y0, fx - 1.0, fy, seed)
    n01 = _grad_dot(x0, y0 + 1, fx, fy - 1.0, seed)
    n11 = _grad_dot(x0 + 1, y0 + 1, fx - 1.0, fy - 1.0, seed)

    u = _fade(fx)
    v = _fade(fy)
    nx0 = n00 + u * (n10 - n00)
    nx1 = n01 + u * (n11 - n01)
    out = (nx0 + v * (nx1 - nx0)) * _NORM
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class GridSampling:
    """Jittered grid: one hashed center per cell of size G over a region.

    region is half-open (x0, y0, x1, y1) in texture units.
    """

    cell_size: float
    region: tuple
    seed: int

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ConfigError(f"cell_size must be > 0, got {self.cell_size}")
        x0, y0, x1, y1 = self.region
        if not (x1 > x0 and y1 > y0):
            raise ConfigError(f"degenerate region {self.region}")

    def cell_range(self):
        """Half-open index ranges (ix_lo, ix_hi, iy_lo, iy_hi) of cells
        intersecting the region; only these cells hold a center."""
        g = self.cell_size
        x0, y0, x1, y1 = self.region
        return (
            int(np.floor(x0 / g)),
            int(np.ceil(x1 / g)),
            int(np.floor(y0 / g)),
            int(np.ceil(y1 / g)),
        )


def cell_centers(ix, iy, sampling: GridSampling):
    """Jittered center of cells (ix, iy); strictly inside each cell.

    ix, iy: int64 arrays. Returns (cx, cy) float64 arrays. Lazy and
    order-independent: each center depends only on (seed, cell index).
    """
    g = sampling.cell_size
    u = _hash_unit(ix, iy, sampling.seed, _SALT_JIT_X)
    v = _hash_unit(ix, iy, sampling.seed, _SALT_JIT_Y)
    return (ix + u) * g, (iy + v) * g


def jitter_centers(sampling: GridSampling):
    """All centers for cells intersecting the region.

    Returns {(ix, iy): (cx, cy)} with exactly one entry per intersecting
    cell. Centers lie inside their cell, which may extend past the region
    edge.
    """
    ix_lo, ix_hi, iy_lo, iy_hi = sampling.cell_range()
    ix = np.arange(ix_lo, ix_hi, dtype=np.int64)
    iy = np.arange(iy_lo, iy_hi, dtype=np.int64)
    gx, gy = np.meshgrid(ix, iy, indexing="ij")
    cx, cy = cell_centers(gx.ravel(), gy.ravel(), sampling)
    return {
        (int(i), int(j)): (float(x), float(y))
        for i, j, x, y in zip(gx.ravel(), gy.ravel(), cx, cy)
    }


def nearest_center_many(px, py, sampling: GridSampling, search_radius=None):
    """Nearest jittered center for each point, searching the 3x3 cell
    neighborhood.

    The 3x3 search equals global brute force whenever the returned
    distance is <= search_radius and search_radius <= G; callers that
    rely on that (the stain inside-test does) pass their radius so the
    soundness bound is enforced.

    Returns (cx, cy, d) float64 arrays.
    """
    g = sampling.cell_size
    if search_radius is not None and search_radius > g:
        raise ConfigError(
            f"search radius {search_radius} exceeds cell size {g}; "
            "3x3 neighborhood search would miss centers"
        )
    px = np.atleast_1d(np.asarray(px, dtype=np.float64))
    py = np.atleast_1d(np.asarray(py, dtype=np.float64))
    ix = np.floor(px / g).astype(np.int64)
    iy = np.floor(py / g).astype(np.int64)
    ix_lo, ix_hi, iy_lo, iy_hi = sampling.cell_range()

    best_d2 = np.full(px.shape, np.inf)
    best_cx = np.zeros(px.shape)
    best_cy = np.zeros(px.shape)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            jx, jy = ix + dx, iy + dy
            cx, cy = cell_centers(jx, jy, sampling)
            d2 = (px - cx) ** 2 + (py - cy) ** 2
            # cells outside the region hold no center
            valid = (jx >= ix_lo) & (jx < ix_hi) & (jy >= iy_lo) & (jy < iy_hi)
            closer = valid & (d2 < best_d2)
            best_d2 = np.where(closer, d2, best_d2)
            best_cx = np.where(closer, cx, best_cx)
            best_cy = np.where(closer, cy, best_cy)
    return best_cx, best_cy, np.sqrt(best_d2)


def nearest_center(p, sampling: GridSampling, search_radius=None):
    """Nearest center to a single point. Returns ((cx, cy), distance)."""
    cx, cy, d = nearest_center_many(p[0], p[1], sampling, search_radius)
    return (float(cx[0]), float(cy[0])), float(d[0])
