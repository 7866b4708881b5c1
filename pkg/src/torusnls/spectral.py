"""Torus grids, spectral fields, and the frequency-side operators.

Conventions, fixed once and used by every module:

* Domain: the d-torus [0, 2*pi)^d sampled on N uniform points per axis,
  x_j = 2*pi*j/N.  N is a power of two; the mode lattice per axis is
  {-N/2, ..., N/2 - 1} (the unmatched -N/2 mode is a regular citizen).
* A ``SpectralField`` stores the amplitudes u_hat[k] of the plane waves
  e^{i<k,x>}, i.e. u(x) = sum_k u_hat[k] e^{i<k,x>}.  On the collocation
  grid this means u_hat = fftn(values) / N^d.
* Coefficients live in a flat, row-major (C-order) array over the
  per-axis FFT ordering 0, 1, ..., N/2-1, -N/2, ..., -1.
  ``TorusGrid.mode_to_index`` / ``TorusGrid.index_to_mode`` are the only
  sanctioned maps between flat positions and lattice points.
* Parseval is exact under this convention,

      ||u||_{L^2}^2 = (2*pi)^d * sum_k |u_hat[k]|^2,

  and every L^2 / H^s norm in the package routes through
  ``weighted_l2_norm``.

The low-pass projector keeps mode k iff |k_j| <= tau^{-1/2} on every
axis, ties kept.  The comparison is evaluated as k_j^2 * tau <= 1.0,
which is algebraically identical and decides boundary modes with a
single rounding of an exact-integer times double product (so e.g.
tau = 0.01 keeps exactly the modes with |k_j| <= 10).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

TWO_PI = 2.0 * math.pi

# Worker count handed to scipy.fft.  Multidimensional transforms are
# parallelized over independent 1-d lines, so results do not depend on it.
_fft_workers = 1


def set_fft_workers(n: int) -> None:
    """Set the worker count used by all transforms (>= 1)."""
    global _fft_workers
    n = int(n)
    if n < 1:
        raise ValueError(f"fft worker count must be >= 1, got {n}")
    _fft_workers = n


def get_fft_workers() -> int:
    return _fft_workers


def _workers_from_env() -> None:
    raw = os.environ.get("TORUSNLS_THREADS")
    if raw:
        try:
            set_fft_workers(int(raw))
        except ValueError:
            pass


_workers_from_env()


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TorusGrid:
    """Uniform collocation grid on [0, 2*pi)^dim with N points per axis."""

    dim: int
    n_per_axis: int

    def __post_init__(self):
        if not 1 <= self.dim <= 5:
            raise ValueError(f"dim must be in 1..5, got {self.dim}")
        n = self.n_per_axis
        if not (isinstance(n, (int, np.integer)) and n >= 2 and _is_power_of_two(int(n))):
            raise ValueError(f"n_per_axis must be a power of two >= 2, got {n!r}")
        total = int(n) ** self.dim
        if total > np.iinfo(np.intp).max:
            raise ValueError(
                f"grid with {n}^{self.dim} modes exceeds the addressable range"
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_axis,) * self.dim

    @property
    def n_modes(self) -> int:
        return self.n_per_axis ** self.dim

    def axis_frequencies(self) -> np.ndarray:
        """Integer modes of one axis in FFT order: 0..N/2-1, -N/2..-1."""
        n = self.n_per_axis
        return np.concatenate([np.arange(0, n // 2), np.arange(-(n // 2), 0)])

    def index_to_mode(self, i: int) -> tuple[int, ...]:
        """Lattice point k for the flat coefficient position i."""
        if not 0 <= i < self.n_modes:
            raise IndexError(f"flat index {i} out of range for {self.n_modes} modes")
        n = self.n_per_axis
        idx = np.unravel_index(int(i), self.shape)
        return tuple(int(j) if j < n // 2 else int(j) - n for j in idx)

    def mode_to_index(self, k) -> int:
        """Flat coefficient position of lattice point k (int or length-dim)."""
        if np.isscalar(k):
            k = (k,)
        k = tuple(int(kj) for kj in k)
        if len(k) != self.dim:
            raise ValueError(f"mode {k} has {len(k)} components, grid has dim {self.dim}")
        half = self.n_per_axis // 2
        for kj in k:
            if not -half <= kj <= half - 1:
                raise ValueError(f"mode {k} outside the lattice [-{half}, {half - 1}]^{self.dim}")
        idx = tuple(kj % self.n_per_axis for kj in k)
        return int(np.ravel_multi_index(idx, self.shape))

    def mode_k2(self) -> np.ndarray:
        """|k|^2 over the full lattice, flat float64 array of length n_modes."""
        f2 = (self.axis_frequencies() ** 2).astype(float)
        out = np.zeros(self.shape)
        for ax in range(self.dim):
            out += f2.reshape([-1 if j == ax else 1 for j in range(self.dim)])
        return out.ravel()

    @property
    def volume(self) -> float:
        return TWO_PI ** self.dim


def make_grid(dim: int, n_per_axis: int) -> TorusGrid:
    """Construct a grid; rejects dim outside 1..5 and non-power-of-two N."""
    if not isinstance(dim, (int, np.integer)):
        raise ValueError(f"dim must be an integer, got {dim!r}")
    if not isinstance(n_per_axis, (int, np.integer)):
        raise ValueError(f"n_per_axis must be an integer, got {n_per_axis!r}")
    return TorusGrid(int(dim), int(n_per_axis))


@dataclass
class SpectralField:
    """Complex mode amplitudes of a function on the torus (value type).

    ``coeffs`` is the flat row-major array described in the module
    docstring; the constructor always copies, so instances are safe to
    pass between threads and operations never alias their inputs.
    """

    grid: TorusGrid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).ravel()
        if c.size != self.grid.n_modes:
            raise ValueError(
                f"coefficient array has {c.size} entries, grid needs {self.grid.n_modes}"
            )
        object.__setattr__(self, "coeffs", c)

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs)

    def shaped(self) -> np.ndarray:
        """Row-major view of the coefficients with one axis per dimension."""
        return self.coeffs.reshape(self.grid.shape)

    def l2_norm(self) -> float:
        return weighted_l2_norm(self.grid, self.coeffs)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")


@dataclass(frozen=True)
class FilterSpec:
    """Low-pass cutoff induced by a time step: keep |k_j| <= tau^{-1/2}.

    The survival test is evaluated as k_j^2 * tau <= 1.0 (ties kept),
    which matches the closed-cube characteristic function on the real
    line while avoiding the double rounding of a literal tau**-0.5.
    """

    tau: float

    def __post_init__(self):
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be a positive finite real, got {self.tau!r}")
        object.__setattr__(self, "tau", float(self.tau))

    @property
    def cutoff(self) -> float:
        """The real cutoff K = tau^{-1/2}."""
        return self.tau ** -0.5

    def axis_keep_mask(self, grid: TorusGrid) -> np.ndarray:
        """Boolean per-axis survival mask in FFT order."""
        f = grid.axis_frequencies()
        return (f * f).astype(float) * self.tau <= 1.0


def band_mask(grid: TorusGrid, spec: FilterSpec) -> np.ndarray:
    """Full-lattice boolean survival mask, shaped like the grid."""
    m1 = spec.axis_keep_mask(grid)
    out = np.ones(grid.shape, dtype=bool)
    for ax in range(grid.dim):
        out &= m1.reshape([-1 if j == ax else 1 for j in range(grid.dim)])
    return out


def to_physical(f: SpectralField) -> np.ndarray:
    """Collocation values on the grid; inverse of ``to_spectral``."""
    return _fft.ifftn(f.shaped(), norm="forward", workers=_fft_workers)


def to_spectral(values: np.ndarray, grid: TorusGrid) -> SpectralField:
    """Mode amplitudes of collocation values (fftn / N^d)."""
    v = np.asarray(values)
    if v.shape != grid.shape:
        if v.size == grid.n_modes and v.ndim == 1:
            v = v.reshape(grid.shape)
        else:
            raise ValueError(f"value array shape {v.shape} does not match grid {grid.shape}")
    c = _fft.fftn(v.astype(np.complex128, copy=False), norm="forward", workers=_fft_workers)
    return SpectralField(grid, c.ravel())


def apply_projector(f: SpectralField, spec: FilterSpec) -> SpectralField:
    """Zero every coefficient with |k_j| > tau^{-1/2} on some axis.

    Idempotent bit-for-bit; never increases the L^2 norm.
    """
    a = f.shaped().copy()
    m1 = spec.axis_keep_mask(f.grid)
    for ax in range(f.grid.dim):
        sl = [slice(None)] * f.grid.dim
        sl[ax] = ~m1
        a[tuple(sl)] = 0.0
    return SpectralField(f.grid, a.ravel())


def free_flow(f: SpectralField, t: float) -> SpectralField:
    """Propagator of i u_t = -Laplace(u): multiply mode k by e^{-i t |k|^2}."""
    a = f.shaped().copy()
    f2 = (f.grid.axis_frequencies() ** 2).astype(float)
    # Separable phase: e^{-i t |k|^2} = prod_j e^{-i t k_j^2}; keeps memory at O(d N).
    for ax in range(f.grid.dim):
        ph = np.exp((-1j * t) * f2)
        a *= ph.reshape([-1 if j == ax else 1 for j in range(f.grid.dim)])
    return SpectralField(f.grid, a.ravel())


def weighted_l2_norm(grid: TorusGrid, coeffs: np.ndarray) -> float:
    """The one norm helper: (2*pi)^{d/2} * ||coeffs||_2 (any array shape)."""
    return (TWO_PI ** (grid.dim / 2.0)) * float(np.linalg.norm(coeffs.ravel()))


def l2_norm(f: SpectralField) -> float:
    return weighted_l2_norm(f.grid, f.coeffs)


def l2_distance(f: SpectralField, g: SpectralField) -> float:
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return weighted_l2_norm(f.grid, f.coeffs - g.coeffs)


def physical_l2_norm(values: np.ndarray, grid: TorusGrid) -> float:
    """L^2 norm computed from collocation values; equals ``l2_norm`` by Parseval."""
    h = TWO_PI / grid.n_per_axis
    return (h ** (grid.dim / 2.0)) * float(np.linalg.norm(np.asarray(values).ravel()))
