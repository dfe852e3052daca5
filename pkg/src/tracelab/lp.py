"""Dyadic frequency decompositions and spectral multipliers.

A generator profile phi_hat is a smooth radial function equal to 1 on
|xi| <= 1 and 0 on |xi| >= 3/2.  The induced family

    phi_hat_0 = phi_hat,    phi_hat_n(xi) = phi_hat(2^-n xi) - phi_hat(2^-n+1 xi)

is a dyadic partition of frequency space; block n of a function is obtained
by multiplying its spectrum with phi_hat_n.  The ramp between plateau and
cutoff uses the C-infinity transition h(t) = B(1-t) / (B(t) + B(1-t)) with
B(t) = exp(-c/t), which takes the exact values 1 and 0 at the endpoints, so
multiplier arrays vanish identically outside their annuli.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    GridFunction,
    PeriodizedGrid,
    evaluate_at_x0,
    freq_axis,
    freq_magnitude,
    from_spectrum,
    spectral_tail_fraction,
)

__all__ = [
    "LpGenerator",
    "LpSystem",
    "SpectralMultiplier",
    "build_generator",
    "build_lp_system",
    "max_block_count",
    "lp_block",
    "apply_multiplier",
    "bessel_multiplier",
    "derivative_multiplier",
    "boundary_restrict",
]

PLATEAU_RADIUS = 1.0
CUTOFF_RADIUS = 1.5


def smooth_step(t: np.ndarray, sharpness: float = 1.0) -> np.ndarray:
    """C-infinity ramp from 1 at t<=0 to 0 at t>=1, exact at the endpoints."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    lo = t <= 0.0
    hi = t >= 1.0
    mid = ~(lo | hi)
    out[lo] = 1.0
    out[hi] = 0.0
    tm = t[mid]
    b = np.exp(-sharpness / tm)
    b1 = np.exp(-sharpness / (1.0 - tm))
    out[mid] = b1 / (b + b1)
    return out


def smooth_step_derivative(t: np.ndarray, sharpness: float = 1.0) -> np.ndarray:
    """Analytic derivative of ``smooth_step``; exactly zero outside (0, 1)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    b = np.exp(-sharpness / tm)
    b1 = np.exp(-sharpness / (1.0 - tm))
    db = sharpness / tm**2 * b
    db1 = -sharpness / (1.0 - tm) ** 2 * b1
    out[mid] = (db1 * (b + b1) - b1 * (db + db1)) / (b + b1) ** 2
    return out


@dataclass(frozen=True)
class LpGenerator:
    """Radial generator profile: plateau on |xi| <= 1, cutoff at |xi| >= 3/2.

    ``sharpness`` steers the transition B(t) = exp(-sharpness/t); two
    generators with different sharpness give equivalent-norm systems and are
    used in the norm-equivalence suite.
    """

    sharpness: float = 1.0

    def profile(self, magnitude: np.ndarray) -> np.ndarray:
        m = np.asarray(magnitude, dtype=float)
        t = (m - PLATEAU_RADIUS) / (CUTOFF_RADIUS - PLATEAU_RADIUS)
        return smooth_step(t, self.sharpness)

    def __call__(self, magnitude) -> np.ndarray:
        return self.profile(magnitude)


def build_generator(sharpness: float = 1.0, check_points: int = 4096) -> LpGenerator:
    """Construct a generator and verify its defining constraints pointwise."""
    if not sharpness > 0:
        raise ValueError("sharpness must be positive")
    gen = LpGenerator(sharpness)
    m = np.linspace(0.0, 2.5, check_points)
    vals = gen.profile(m)
    if np.any(vals[m <= PLATEAU_RADIUS] != 1.0):
        raise ValueError("generator violates the plateau constraint")
    if np.any(vals[m >= CUTOFF_RADIUS] != 0.0):
        raise ValueError("generator violates the cutoff constraint")
    if np.any(vals < 0.0) or np.any(vals > 1.0):
        raise ValueError("generator leaves the range [0, 1]")
    if np.any(np.diff(vals) > 1e-15):
        raise ValueError("generator ramp is not monotone")
    return gen


def max_block_count(grid: PeriodizedGrid) -> int:
    """Largest admissible top block index on this grid.

    Block n lives on the annulus 2^(n-1) <= |xi| <= 3*2^(n-1); we require the
    top block's inner plateau edge 2^(N-1) to be representable, beyond which
    additional blocks are identically zero on the grid.
    """
    return int(np.floor(np.log2(grid.max_frequency()))) + 1


@dataclass(frozen=True)
class LpSystem:
    """A realized dyadic decomposition: cached multipliers phi_hat_n on a grid."""

    generator: LpGenerator
    grid: PeriodizedGrid
    n_blocks: int
    multipliers: np.ndarray  # shape (n_blocks + 1,) + grid.shape, read-only

    def block_multiplier(self, n: int) -> np.ndarray:
        if not 0 <= n <= self.n_blocks:
            raise ValueError(f"block index {n} outside [0, {self.n_blocks}]")
        return self.multipliers[n]

    def telescoped(self) -> np.ndarray:
        """phi_hat(2^-N xi): the exact sum of all cached block multipliers."""
        mag = freq_magnitude(self.grid)
        return self.generator.profile(mag / 2.0**self.n_blocks)

    def telescoping_residual(self) -> float:
        """max |sum_n phi_hat_n - 1| over the on-grid plateau |xi| <= 2^N."""
        mag = freq_magnitude(self.grid)
        total = self.multipliers.sum(axis=0)
        inside = mag <= 2.0**self.n_blocks
        return float(np.max(np.abs(total[inside] - 1.0)))


def build_lp_system(gen: LpGenerator, n_blocks: int, grid: PeriodizedGrid) -> LpSystem:
    if n_blocks < 0:
        raise ValueError("block count must be nonnegative")
    n_max = max_block_count(grid)
    if n_blocks > n_max:
        raise ValueError(
            f"block count {n_blocks} too large for this grid; max admissible is {n_max}"
        )
    mag = freq_magnitude(grid)
    mult = np.empty((n_blocks + 1,) + grid.shape)
    prev = gen.profile(mag * 2.0)  # phi_hat(2^-(n-1) xi) at n = 0 is unused
    cur = gen.profile(mag)
    mult[0] = cur
    for n in range(1, n_blocks + 1):
        prev = cur
        cur = gen.profile(mag / 2.0**n)
        mult[n] = cur - prev
    mult.setflags(write=False)
    return LpSystem(gen, grid, n_blocks, mult)


def lp_block(f: GridFunction, sys: LpSystem, n: int) -> GridFunction:
    """Frequency block n of f; n = -1 is the zero function."""
    if f.grid != sys.grid:
        raise ValueError("function and system live on different grids")
    if n == -1:
        return f.with_values(np.zeros_like(f.values))
    if not 0 <= n <= sys.n_blocks:
        raise ValueError(f"block index {n} outside [-1, {sys.n_blocks}]")
    coeffs = f.spectrum() * sys.block_multiplier(n)[..., np.newaxis]
    return GridFunction.from_spectrum(f.grid, coeffs, f.support_margin, f.gamma)


@dataclass(frozen=True)
class SpectralMultiplier:
    """Fourier multiplier: scalar symbol on the frequency grid, or an
    r x r matrix per node (trailing axes)."""

    symbol: np.ndarray
    tag: str = ""

    @property
    def is_matrix(self) -> bool:
        return self.symbol.ndim >= 2 and self.symbol.shape[-1] == self.symbol.shape[-2]


def apply_multiplier(f: GridFunction, m: SpectralMultiplier) -> GridFunction:
    sym = m.symbol
    coeffs = f.spectrum()
    if sym.ndim == f.grid.dim:
        out = coeffs * sym[..., np.newaxis]
    elif sym.ndim == f.grid.dim + 2:
        r = f.fiber_dim
        if sym.shape[-2:] != (r, r):
            raise ValueError(
                f"matrix symbol fiber {sym.shape[-2:]} does not match function fiber {r}"
            )
        out = np.einsum("...ij,...j->...i", sym, coeffs)
    else:
        raise ValueError("symbol shape matches neither scalar nor matrix layout")
    return GridFunction.from_spectrum(f.grid, out, f.support_margin, f.gamma)


def bessel_multiplier(grid: PeriodizedGrid, s: float, tag: str | None = None) -> SpectralMultiplier:
    """Symbol (1 + |xi|^2)^(s/2) of the smoothing/roughening flow."""
    mag = freq_magnitude(grid)
    return SpectralMultiplier((1.0 + mag**2) ** (s / 2.0), tag or f"bessel[{s}]")


def derivative_multiplier(grid: PeriodizedGrid, alpha: tuple[int, ...]) -> SpectralMultiplier:
    """Symbol of the mixed partial derivative with multi-index alpha."""
    if len(alpha) != grid.dim:
        raise ValueError(f"multi-index length {len(alpha)} does not match dim {grid.dim}")
    sym = np.ones(grid.shape, dtype=complex)
    for a, power in enumerate(alpha):
        if power == 0:
            continue
        xi = freq_axis(grid, a)
        sh = [1] * grid.dim
        sh[a] = grid.shape[a]
        sym = sym * (1j * xi.reshape(sh)) ** power
    return SpectralMultiplier(sym, tag=f"d^{alpha}")


class SpectralTailError(ValueError):
    """Raised when an operation requires band-limited input; carries the mass."""

    def __init__(self, tail: float, tol: float):
        super().__init__(f"spectral tail {tail:.3e} exceeds tolerance {tol:.3e}")
        self.tail = tail
        self.tol = tol


def boundary_restrict(
    f: GridFunction, tail_tol: float = 1e-8, band_fraction: float = 0.75
) -> GridFunction:
    """Trigonometric evaluation of f on the hyperplane x1 = 0.

    The offset grid holds no node at x1 = 0, so the value is obtained from
    the spectrum; this is exact for band-limited periodic f.  Input whose
    relative spectral mass beyond ``band_fraction * xi_max`` exceeds
    ``tail_tol`` is rejected.
    """
    if f.grid.dim < 2:
        raise ValueError("restriction to the boundary needs d >= 2; use evaluate_at_x0")
    tail = spectral_tail_fraction(f, band_fraction * f.grid.max_frequency())
    if tail > tail_tol:
        raise SpectralTailError(tail, tail_tol)
    bgrid = f.grid.boundary_grid()
    bcoeffs = f.spectrum().sum(axis=0)  # exp(i xi_k * 0) = 1 for every mode
    return GridFunction.from_spectrum(bgrid, bcoeffs, f.support_margin, f.gamma)


def evaluate_at_zero(f: GridFunction) -> np.ndarray:
    """Value of (the interpolant of) f at x1 = 0, d = 1 convenience."""
    return evaluate_at_x0(f, 0.0)
