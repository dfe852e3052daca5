"""Periodized grids and sampled vector-valued functions.

Everything downstream (Littlewood-Paley blocks, norms, traces, extensions)
lives on a uniform grid over the torus [-L, L)^d.  Axis 0 plays the role of
the normal direction x1; its samples sit at cell midpoints so that the power
weight |x1|^gamma is finite at every node and x1 = 0 is always a cell edge.

Spectral convention: a grid function is identified with the trigonometric
polynomial f(x) = sum_k c_k exp(i xi_k . x) with xi_k = pi*k/L and k running
over the usual FFT index set [-N/2, N/2) per axis.  ``to_spectrum`` and
``from_spectrum`` convert between node values and the coefficients c_k.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "PeriodizedGrid",
    "GridFunction",
    "to_spectrum",
    "from_spectrum",
    "freq_axis",
    "freq_magnitude",
    "evaluate_at_x0",
    "spectral_tail_fraction",
    "write_gridfunction",
    "read_gridfunction",
]

_MAGIC = b"WTLB"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class PeriodizedGrid:
    """Uniform grid on the torus [-L, L)^d with optional midpoint offset on axis 0.

    shape        -- cells per axis; each entry must be a power of two
    half_period  -- L, the torus half-period
    offset_axis0 -- if True, axis-0 samples sit at x = (i + 1/2) h - L, so no
                    node ever hits x1 = 0
    """

    shape: tuple[int, ...]
    half_period: float = 16.0 * np.pi
    offset_axis0: bool = True

    def __post_init__(self):
        if len(self.shape) < 1:
            raise ValueError("grid needs at least one axis")
        for n in self.shape:
            if n < 2 or (n & (n - 1)) != 0:
                raise ValueError(f"cell count {n} is not a power of two >= 2")
        if not self.half_period > 0:
            raise ValueError("half_period must be positive")

    @property
    def dim(self) -> int:
        return len(self.shape)

    def spacing(self, axis: int = 0) -> float:
        return 2.0 * self.half_period / self.shape[axis]

    def axis_coordinates(self, axis: int = 0) -> np.ndarray:
        """Physical sample positions along one axis."""
        n = self.shape[axis]
        h = self.spacing(axis)
        off = 0.5 if (axis == 0 and self.offset_axis0) else 0.0
        return -self.half_period + (np.arange(n) + off) * h

    def cell_edges(self, axis: int = 0) -> np.ndarray:
        n = self.shape[axis]
        h = self.spacing(axis)
        off = 0.5 if (axis == 0 and self.offset_axis0) else 0.0
        return -self.half_period + (np.arange(n + 1) + off - 0.5) * h

    def max_frequency(self) -> float:
        """Largest |xi| representable along the coarsest axis."""
        return min(np.pi * (n // 2) / self.half_period for n in self.shape)

    def boundary_grid(self) -> "PeriodizedGrid":
        """The (d-1)-dimensional grid of the hyperplane x1 = 0 (no offset)."""
        if self.dim < 2:
            raise ValueError("a 1-D grid has no boundary grid")
        return PeriodizedGrid(self.shape[1:], self.half_period, offset_axis0=False)


def freq_axis(grid: PeriodizedGrid, axis: int) -> np.ndarray:
    """Frequencies xi_k = pi*k/L along one axis, FFT ordering."""
    n = grid.shape[axis]
    k = np.fft.fftfreq(n, d=1.0 / n)  # integer indices -N/2..N/2-1
    return np.pi * k / grid.half_period


_FREQ_MAG_CACHE: dict[PeriodizedGrid, np.ndarray] = {}


def freq_magnitude(grid: PeriodizedGrid) -> np.ndarray:
    """|xi| on the full frequency grid (cached per grid)."""
    cached = _FREQ_MAG_CACHE.get(grid)
    if cached is None:
        sq = np.zeros(grid.shape)
        for a in range(grid.dim):
            xi = freq_axis(grid, a)
            sh = [1] * grid.dim
            sh[a] = grid.shape[a]
            sq = sq + xi.reshape(sh) ** 2
        cached = np.sqrt(sq)
        cached.setflags(write=False)
        _FREQ_MAG_CACHE[grid] = cached
    return cached


def _axis_phase(grid: PeriodizedGrid, axis: int) -> np.ndarray:
    """Per-mode phase exp(i xi_k x_start) linking FFT output to coefficients."""
    n = grid.shape[axis]
    k = np.fft.fftfreq(n, d=1.0 / n)
    off = 0.5 if (axis == 0 and grid.offset_axis0) else 0.0
    return np.exp(-1j * np.pi * k) * np.exp(2j * np.pi * k * off / n)


def to_spectrum(grid: PeriodizedGrid, values: np.ndarray) -> np.ndarray:
    """Coefficients c_k of the trigonometric interpolant of node values.

    ``values`` may carry a trailing fiber axis; the transform acts on the
    leading ``grid.dim`` axes only.
    """
    axes = tuple(range(grid.dim))
    coeffs = np.fft.fftn(values, axes=axes)
    ntot = float(np.prod(grid.shape))
    for a in axes:
        ph = _axis_phase(grid, a)
        sh = [1] * values.ndim
        sh[a] = grid.shape[a]
        coeffs = coeffs / ph.reshape(sh)
    return coeffs / ntot


def from_spectrum(grid: PeriodizedGrid, coeffs: np.ndarray) -> np.ndarray:
    """Node values of sum_k c_k exp(i xi_k . x)."""
    axes = tuple(range(grid.dim))
    work = np.asarray(coeffs, dtype=complex)
    for a in axes:
        ph = _axis_phase(grid, a)
        sh = [1] * work.ndim
        sh[a] = grid.shape[a]
        work = work * ph.reshape(sh)
    ntot = float(np.prod(grid.shape))
    return np.fft.ifftn(work * ntot, axes=axes)


@dataclass
class GridFunction:
    """C^r-valued samples on a periodized grid.

    values shape is ``grid.shape + (r,)`` with r the fiber dimension.
    ``support_margin`` declares the fraction of the torus (from the seam
    inward) guaranteed free of essential support; norm routines require at
    least 0.25.  ``gamma`` is weight metadata carried through file I/O.
    """

    grid: PeriodizedGrid
    values: np.ndarray
    support_margin: float = 0.5
    gamma: float = 0.0
    _spectrum: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape[: self.grid.dim] != self.grid.shape:
            raise ValueError(
                f"value shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if self.values.ndim == self.grid.dim:
            self.values = self.values[..., np.newaxis]
        if self.values.ndim != self.grid.dim + 1:
            raise ValueError("values must have exactly one trailing fiber axis")
        if not np.all(np.isfinite(self.values.view(float))):
            raise ValueError("grid function contains non-finite values")

    @property
    def fiber_dim(self) -> int:
        return self.values.shape[-1]

    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            self._spectrum = to_spectrum(self.grid, self.values)
        return self._spectrum

    @classmethod
    def from_spectrum(
        cls,
        grid: PeriodizedGrid,
        coeffs: np.ndarray,
        support_margin: float = 0.5,
        gamma: float = 0.0,
    ) -> "GridFunction":
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim == grid.dim:
            coeffs = coeffs[..., np.newaxis]
        f = cls(grid, from_spectrum(grid, coeffs), support_margin, gamma)
        f._spectrum = coeffs
        return f

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values, self.support_margin, self.gamma)

    def l2(self) -> float:
        """Plain grid l2 magnitude (no weight), for residual bookkeeping."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * _cell_volume(self.grid)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self, other)
        return GridFunction(
            self.grid,
            self.values + other.values,
            min(self.support_margin, other.support_margin),
            self.gamma,
        )

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self, other)
        return GridFunction(
            self.grid,
            self.values - other.values,
            min(self.support_margin, other.support_margin),
            self.gamma,
        )

    def __mul__(self, c) -> "GridFunction":
        return GridFunction(self.grid, self.values * c, self.support_margin, self.gamma)

    __rmul__ = __mul__


def _cell_volume(grid: PeriodizedGrid) -> float:
    vol = 1.0
    for a in range(grid.dim):
        vol *= grid.spacing(a)
    return vol


def _check_same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.grid != g.grid:
        raise ValueError("grid mismatch")
    if f.fiber_dim != g.fiber_dim:
        raise ValueError("fiber dimension mismatch")


def evaluate_at_x0(f: GridFunction, x0: float) -> np.ndarray:
    """Values of f on the slice x1 = x0 (axis-0 partial synthesis).

    Returns an array over the remaining axes' nodes (plus fiber); exact for
    band-limited periodic f up to roundoff.  For d = 1 the result has shape
    (r,).
    """
    coeffs = f.spectrum()
    xi = freq_axis(f.grid, 0)
    sh = [1] * coeffs.ndim
    sh[0] = f.grid.shape[0]
    collapsed = np.sum(coeffs * np.exp(1j * xi * x0).reshape(sh), axis=0)
    if f.grid.dim == 1:
        return collapsed
    return from_spectrum(f.grid.boundary_grid(), collapsed)


def spectral_tail_fraction(f: GridFunction, radius: float) -> float:
    """Relative l2 spectral mass at frequencies |xi| > radius."""
    coeffs = f.spectrum()
    mag = freq_magnitude(f.grid)
    total = float(np.sum(np.abs(coeffs) ** 2))
    if total == 0.0:
        return 0.0
    tail = float(np.sum(np.abs(coeffs[mag > radius, :]) ** 2))
    return np.sqrt(tail / total)


# ---------------------------------------------------------------------------
# Binary file format (normative layout):
#   magic "WTLB" | version u32 | d u32 | r u32 | N_axis[d] u32 | L f64 |
#   offset u8 | gamma f64 | payload row-major interleaved (re, im) f64.
# All integers and floats little-endian.
# ---------------------------------------------------------------------------


def write_gridfunction(f: GridFunction, path) -> None:
    grid = f.grid
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", _FORMAT_VERSION, grid.dim, f.fiber_dim))
        fh.write(struct.pack(f"<{grid.dim}I", *grid.shape))
        fh.write(struct.pack("<d", grid.half_period))
        fh.write(struct.pack("<B", 1 if grid.offset_axis0 else 0))
        fh.write(struct.pack("<d", f.gamma))
        flat = np.ascontiguousarray(f.values).ravel()
        inter = np.empty(2 * flat.size, dtype="<f8")
        inter[0::2] = flat.real
        inter[1::2] = flat.imag
        fh.write(inter.tobytes())


def read_gridfunction(path) -> GridFunction:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        version, dim, fiber = struct.unpack("<III", fh.read(12))
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported format version {version}")
        shape = struct.unpack(f"<{dim}I", fh.read(4 * dim))
        (half_period,) = struct.unpack("<d", fh.read(8))
        (offset,) = struct.unpack("<B", fh.read(1))
        (gamma,) = struct.unpack("<d", fh.read(8))
        grid = PeriodizedGrid(tuple(shape), half_period, bool(offset))
        count = int(np.prod(shape)) * fiber
        inter = np.frombuffer(fh.read(16 * count), dtype="<f8")
        if inter.size != 2 * count:
            raise ValueError("truncated payload")
        values = (inter[0::2] + 1j * inter[1::2]).reshape(shape + (fiber,))
        return GridFunction(grid, values, gamma=gamma)
