"""Boundary traces of normal derivatives and their right-inverse extensions.

The m-th trace of f is the boundary restriction of the m-th normal
derivative, realized as the sum of restricted frequency blocks.  Extensions
are built from a fixed two-kernel family:

* ``ext0`` uses an annular family rho_n on the normal axis, normalized so
  that rho_n(0) = 2^n, paired with the boundary blocks of the datum;
* ``ext_m`` uses profiles (x1^m / m!) * zeta(2^j x1), where zeta is the
  inverse transform of a bump supported in (1, 3/2) (a symmetric bump in
  (-1, 1) at the coarsest scale), so that the j-th term reproduces the
  datum's j-th boundary block under the m-th trace and annihilates all
  lower-order traces through the polynomial factor.

All x1-profiles are realized through their grid spectra and rescaled so the
defining point values at x1 = 0 hold exactly in floating point; a wide
Gaussian window (scale L/10) makes the polynomial-weighted profiles
periodic to machine precision without touching any trace identity, since
only the window's unit value at x1 = 0 enters them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .grid import (
    GridFunction,
    PeriodizedGrid,
    evaluate_at_x0,
    freq_axis,
    from_spectrum,
    spectral_tail_fraction,
)
from .lp import (
    LpSystem,
    SpectralTailError,
    apply_multiplier,
    boundary_restrict,
    derivative_multiplier,
    lp_block,
    smooth_step,
)

__all__ = [
    "EtaFamily",
    "build_eta_family",
    "trace",
    "trace_m",
    "ext0",
    "ext_m",
    "ext_vector",
    "boundary_preserving_mollify",
    "indicator_multiply",
]


def bump_window(u: np.ndarray) -> np.ndarray:
    """exp(-1/(u(1-u))) on (0, 1), exactly zero outside."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (ui * (1.0 - ui)))
    return out


def annulus_bump(xi: np.ndarray) -> np.ndarray:
    """Smooth bump supported in (1, 3/2)."""
    return bump_window(2.0 * (np.asarray(xi, dtype=float) - 1.0))


def symmetric_bump(xi: np.ndarray) -> np.ndarray:
    """Smooth even bump supported in (-1, 1)."""
    return bump_window(0.5 * (np.asarray(xi, dtype=float) + 1.0))


@dataclass(frozen=True)
class EtaFamily:
    """Precomputed x1-profiles shared by every extension operator.

    ``rho_values[n]`` are node values of the n-th annular kernel with
    rho_n(0) = 2^n exactly; ``kernel_values[j]`` are node values of the
    dilated zeta-kernels with value 1 at x1 = 0 exactly.  ``rho_factors``
    and ``kernel_factors`` record the applied rescalings for
    reproducibility.  Profiles for order m carry the extra factor
    x1^m / m! times the Gaussian window.
    """

    axis_grid: PeriodizedGrid
    n_blocks: int
    m_max: int
    window_scale: float
    rho_values: np.ndarray        # (n_blocks+1, N0) complex
    kernel_values: np.ndarray     # (n_blocks+1, N0) complex
    rho_factors: np.ndarray
    kernel_factors: np.ndarray
    window: np.ndarray            # (N0,) float

    def profile(self, j: int, m: int) -> np.ndarray:
        """Node values of the order-m extension profile at scale j
        (already including the 2^-j prefactor of the defining series)."""
        if not 0 <= j <= self.n_blocks:
            raise ValueError(f"scale {j} outside [0, {self.n_blocks}]")
        if not 0 <= m <= self.m_max:
            raise ValueError(f"order {m} outside [0, {self.m_max}]")
        x = self.axis_grid.axis_coordinates(0)
        poly = x**m / float(math.factorial(m)) if m > 0 else np.ones_like(x)
        return poly * self.window * self.kernel_values[j]


def build_eta_family(
    grid: PeriodizedGrid,
    n_blocks: int,
    m_max: int = 4,
    window_scale: float | None = None,
) -> EtaFamily:
    """Realize the kernel family on the normal axis of ``grid``.

    Requires the top annulus 3 * 2^(n_blocks - 1) to fit within 70% of the
    axis-0 frequency range, so that windowed profiles stay alias-free.
    """
    if grid.dim < 1:
        raise ValueError("grid required")
    axis_grid = PeriodizedGrid((grid.shape[0],), grid.half_period, grid.offset_axis0)
    xi_max = axis_grid.max_frequency()
    top_edge = 3.0 * 2.0 ** (n_blocks - 1)
    if top_edge > 0.7 * xi_max:
        raise ValueError(
            f"top annulus edge {top_edge} exceeds the 0.7 * xi_max = {0.7 * xi_max} "
            "budget of the normal axis; reduce the block count or refine axis 0"
        )
    xi = freq_axis(axis_grid, 0)
    n0 = axis_grid.shape[0]

    rho_values = np.empty((n_blocks + 1, n0), dtype=complex)
    rho_factors = np.empty(n_blocks + 1)
    kernel_values = np.empty((n_blocks + 1, n0), dtype=complex)
    kernel_factors = np.empty(n_blocks + 1)

    plateau = smooth_step((np.abs(xi) - 1.0) * 2.0)
    prev = smooth_step((np.abs(xi) * 2.0 - 1.0) * 2.0)
    for n in range(n_blocks + 1):
        if n == 0:
            raw = plateau.astype(complex)
        else:
            cur = smooth_step((np.abs(xi) / 2.0**n - 1.0) * 2.0)
            raw = (cur - prev).astype(complex)
            prev = cur
        total = np.sum(raw).real
        if total <= 0:
            raise ValueError(f"degenerate annular kernel at scale {n}")
        rho_factors[n] = 2.0**n / total
        rho_values[n] = from_spectrum(axis_grid, raw * rho_factors[n])

        sym = symmetric_bump(xi) if n == 0 else annulus_bump(xi / 2.0**n)
        total = np.sum(sym)
        if total <= 0:
            raise ValueError(f"degenerate zeta kernel at scale {n}")
        kernel_factors[n] = 1.0 / total
        kernel_values[n] = from_spectrum(axis_grid, sym.astype(complex) * kernel_factors[n])

    scale = window_scale if window_scale is not None else grid.half_period / 10.0
    x = axis_grid.axis_coordinates(0)
    window = np.exp(-0.5 * (x / scale) ** 2)

    fam = EtaFamily(
        axis_grid,
        n_blocks,
        m_max,
        scale,
        rho_values,
        kernel_values,
        rho_factors,
        kernel_factors,
        window,
    )
    # defining point normalizations, exact by construction
    for n in range(n_blocks + 1):
        if abs(_value_at_zero(axis_grid, rho_values[n]) - 2.0**n) > 1e-12 * 2.0**n:
            raise AssertionError("annular kernel normalization failed")
        if abs(_value_at_zero(axis_grid, kernel_values[n]) - 1.0) > 1e-13:
            raise AssertionError("zeta kernel normalization failed")
    return fam


def _value_at_zero(axis_grid: PeriodizedGrid, values: np.ndarray) -> complex:
    f = GridFunction(axis_grid, values)
    return complex(evaluate_at_x0(f, 0.0)[0])


def _block_sum_tail(f: GridFunction, sys: LpSystem) -> float:
    coeffs = f.spectrum()
    total = float(np.sum(np.abs(coeffs) ** 2))
    if total == 0.0:
        return 0.0
    mask = 1.0 - sys.telescoped()
    tail = float(np.sum(np.abs(coeffs * mask[..., np.newaxis]) ** 2))
    return np.sqrt(tail / total)


def trace(f: GridFunction, sys: LpSystem, tail_tol: float = 1e-9) -> GridFunction:
    """Boundary values as the sum of restricted frequency blocks.

    Requires the block sum to capture f: the spectral mass left outside the
    telescoped plateau must stay below ``tail_tol``.
    """
    tail = _block_sum_tail(f, sys)
    if tail > tail_tol:
        raise SpectralTailError(tail, tail_tol)
    acc = None
    for n in range(sys.n_blocks + 1):
        piece = boundary_restrict(lp_block(f, sys, n), tail_tol=np.inf)
        acc = piece if acc is None else acc + piece
    return acc


def trace_m(f: GridFunction, m: int, sys: LpSystem, tail_tol: float = 1e-9) -> GridFunction:
    """Trace of the m-th spectral normal derivative."""
    if m < 0:
        raise ValueError("trace order must be nonnegative")
    if m == 0:
        return trace(f, sys, tail_tol)
    alpha = (m,) + (0,) * (f.grid.dim - 1)
    return trace(apply_multiplier(f, derivative_multiplier(f.grid, alpha)), sys, tail_tol)


def _check_boundary_band(g: GridFunction, bsys: LpSystem, tail_tol: float) -> None:
    tail = _block_sum_tail(g, bsys)
    if tail > tail_tol:
        raise SpectralTailError(tail, tail_tol)


def _assemble(
    grid: PeriodizedGrid,
    profile: np.ndarray,
    boundary_values: np.ndarray,
    margin: float,
) -> GridFunction:
    vals = profile.reshape((grid.shape[0],) + (1,) * (len(grid.shape) - 1) + (1,)) * boundary_values[np.newaxis, ...]
    return GridFunction(grid, vals, margin)


def _full_grid_for(g: GridFunction, eta: EtaFamily) -> PeriodizedGrid:
    return PeriodizedGrid(
        (eta.axis_grid.shape[0],) + g.grid.shape, g.grid.half_period, eta.axis_grid.offset_axis0
    )


def ext0(
    g: GridFunction, eta: EtaFamily, bsys: LpSystem, tail_tol: float = 1e-10
) -> GridFunction:
    """Zeroth-order extension: sum_n 2^-n rho_n(x1) (block_n g)(x~)."""
    if g.grid != bsys.grid:
        raise ValueError("boundary datum and system live on different grids")
    if g.grid.half_period != eta.axis_grid.half_period:
        raise ValueError("kernel family and boundary grid have mismatched periods")
    _check_boundary_band(g, bsys, tail_tol)
    grid = _full_grid_for(g, eta)
    out = None
    for n in range(min(eta.n_blocks, bsys.n_blocks) + 1):
        tg = lp_block(g, bsys, n)
        term = _assemble(grid, 2.0 ** (-n) * eta.rho_values[n], tg.values, g.support_margin)
        out = term if out is None else out + term
    return out


def ext_m(
    g: GridFunction, m: int, eta: EtaFamily, bsys: LpSystem, tail_tol: float = 1e-10
) -> GridFunction:
    """Order-m extension with Tr_j(ext_m g) = delta_{jm} g for 0 <= j <= m."""
    if not 0 <= m <= eta.m_max:
        raise ValueError(f"order {m} outside [0, {eta.m_max}]")
    if g.grid != bsys.grid:
        raise ValueError("boundary datum and system live on different grids")
    _check_boundary_band(g, bsys, tail_tol)
    grid = _full_grid_for(g, eta)
    out = None
    for j in range(min(eta.n_blocks, bsys.n_blocks) + 1):
        tg = lp_block(g, bsys, j)
        term = _assemble(grid, eta.profile(j, m), tg.values, g.support_margin)
        out = term if out is None else out + term
    return out


def ext_vector(
    gs: list[GridFunction],
    eta: EtaFamily,
    bsys: LpSystem,
    fsys: LpSystem,
    tail_tol: float = 1e-10,
) -> GridFunction:
    """Simultaneous extension: the result's j-th trace is gs[j] for every j.

    Built by the correction recursion f_j = f_{j-1} + ext_j(g_j - Tr_j f_{j-1}),
    where every ext_j is the order-j member of the same kernel family.
    """
    if not gs:
        raise ValueError("need at least one boundary datum")
    f = ext_m(gs[0], 0, eta, bsys, tail_tol)
    for j in range(1, len(gs)):
        residual = gs[j] - trace_m(f, j, fsys)
        f = f + ext_m(residual, j, eta, bsys, tail_tol)
    return f


def _ramp_up(t: np.ndarray) -> np.ndarray:
    """0 on (-inf, 1/2], 1 on [1, inf), smooth in between."""
    return 1.0 - smooth_step(2.0 * (np.asarray(t, dtype=float) - 0.5))


def boundary_preserving_mollify(
    f: GridFunction,
    m: int,
    steepness: int,
    boundary_tol: float = 1e-7,
    quad_points: int = 48,
) -> GridFunction:
    """Flatten the m-th normal derivative near the boundary, keeping f elsewhere.

    With phi_n(x1) = phi(n x1) (phi a smooth 0-to-1 ramp over [1/2, 1]), the
    result g satisfies d1^m g = phi_n * d1^m f pointwise, g = f wherever
    x1 >= 1/n, and d1^m g = 0 for x1 < 1/(2n).  Requires the m-th trace of f
    to vanish (checked spectrally).  For m >= 1 the correction is the Taylor
    remainder integral of (1 - phi_n) d1^m f, evaluated by per-node
    Gauss-Legendre quadrature.
    """
    if m < 0 or steepness < 1:
        raise ValueError("need m >= 0 and steepness >= 1")
    n = steepness
    x = f.grid.axis_coordinates(0)
    alpha = (m,) + (0,) * (f.grid.dim - 1)
    dmf = f if m == 0 else apply_multiplier(f, derivative_multiplier(f.grid, alpha))
    bval = np.max(np.abs(evaluate_at_x0(dmf, 0.0)))
    scale = np.max(np.abs(dmf.values))
    if scale > 0 and bval > boundary_tol * scale:
        raise ValueError(
            f"m-th normal derivative does not vanish at the boundary: {bval:.3e}"
        )
    if m == 0:
        phi = _ramp_up(n * x)
        shape = (f.grid.shape[0],) + (1,) * (f.grid.dim - 1) + (1,)
        return f.with_values(f.values * phi.reshape(shape))

    nodes, weights = leggauss(quad_points)
    coeffs = dmf.spectrum()
    xi0 = freq_axis(f.grid, 0)
    rest_grid = f.grid.boundary_grid() if f.grid.dim >= 2 else None

    def dmf_at(t: np.ndarray) -> np.ndarray:
        phases = np.exp(1j * np.outer(t, xi0))              # (Q, N0)
        slices = np.tensordot(phases, coeffs, axes=(1, 0))  # (Q, rest..., r)
        if rest_grid is not None:
            slices = from_spectrum(rest_grid, np.moveaxis(slices, 0, -1))
            slices = np.moveaxis(slices, -1, 0)
        return slices

    out = f.values.copy()
    cut = 1.0 / n
    half_cut = 0.5 / n
    fact = float(math.factorial(m - 1))
    for i in np.nonzero((x > 0.0) & (x < cut))[0]:
        corr = None
        # panels split at the cutoff ramp's support edge: below 1/(2n) the
        # factor (1 - phi_n) is exactly one and the integrand is entire
        for a, b in ((x[i], min(half_cut, cut)), (max(x[i], half_cut), cut)):
            if not b > a:
                continue
            t = 0.5 * (b - a) * (nodes + 1.0) + a
            wq = 0.5 * (b - a) * weights
            kernel = (x[i] - t) ** (m - 1) * (1.0 - _ramp_up(n * t)) / fact
            piece = np.tensordot(wq * kernel, dmf_at(t), axes=(0, 0))
            corr = piece if corr is None else corr + piece
        out[i] = f.values[i] + corr
    return f.with_values(out)


def indicator_multiply(f: GridFunction) -> GridFunction:
    """Pointwise product with the half-space indicator 1_{x1 > 0}.

    The offset grid splits cells cleanly at x1 = 0, so the product is an
    exact node-wise mask.
    """
    x = f.grid.axis_coordinates(0)
    mask = (x > 0.0).astype(float)
    shape = (f.grid.shape[0],) + (1,) * (f.grid.dim - 1) + (1,)
    return f.with_values(f.values * mask.reshape(shape))
