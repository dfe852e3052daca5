"""Deterministic banks of band-limited test functions.

Members are constructed directly in frequency space and masked by a smooth
plateau profile, so their spectra are compactly supported inside a declared
band (tail mass is exactly zero beyond 3/2 times the band).  Seeded
substreams make re-runs bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .grid import GridFunction, PeriodizedGrid, freq_axis, freq_magnitude, write_gridfunction
from .lp import smooth_step

__all__ = [
    "BankConfig",
    "BankMember",
    "generate_bank",
    "dilate",
    "translate_axis0",
    "band_mask",
    "write_bank",
]


@dataclass(frozen=True)
class BankConfig:
    shape: tuple[int, ...]
    half_period: float = 2.0 * np.pi
    band: float = 8.0            # essential spectral radius; hard cutoff at 1.5x
    size: int = 10
    seed: int = 7
    kinds: tuple[str, ...] = ("block", "bump", "edge")
    fiber_dim: int = 1
    offset_axis0: bool = True
    edge_distances: tuple[float, ...] = tuple(2.0 ** (-j) for j in range(1, 7))

    def grid(self) -> PeriodizedGrid:
        return PeriodizedGrid(self.shape, self.half_period, self.offset_axis0)

    def validate(self) -> None:
        g = self.grid()
        if 1.5 * self.band > g.max_frequency():
            raise ValueError(
                f"band {self.band} needs cutoff {1.5 * self.band} <= grid maximum "
                f"{g.max_frequency()}"
            )


@dataclass(frozen=True)
class BankMember:
    member_id: str
    kind: str
    f: GridFunction


def band_mask(grid: PeriodizedGrid, band: float) -> np.ndarray:
    """Smooth radial mask: 1 inside |xi| <= band, exactly 0 beyond 1.5 band."""
    return smooth_step((freq_magnitude(grid) / band - 1.0) * 2.0)


def _normalized(grid, coeffs, margin) -> GridFunction:
    f = GridFunction.from_spectrum(grid, coeffs, support_margin=margin)
    scale = f.l2()
    if scale == 0.0:
        raise ValueError("degenerate bank member")
    return f * (1.0 / scale)


def _block_member(grid, band, rng, fiber) -> GridFunction:
    mag = freq_magnitude(grid)
    envelope = np.exp(-((mag / band) ** 2))[..., np.newaxis]
    c = rng.normal(size=grid.shape + (fiber,)) + 1j * rng.normal(size=grid.shape + (fiber,))
    c *= envelope * band_mask(grid, band)[..., np.newaxis]
    return _normalized(grid, c, 0.45)


def _bump_member(grid, band, rng, fiber) -> GridFunction:
    """Modulated Gaussian placed in the safe interior of the torus."""
    L = grid.half_period
    center = rng.uniform(-0.4 * L, 0.4 * L, size=grid.dim)
    xi0 = rng.uniform(0.3 * band, 0.6 * band, size=grid.dim) * rng.choice(
        [-1.0, 1.0], size=grid.dim
    )
    width = band / 5.0
    phase = np.zeros(grid.shape)
    gauss = np.ones(grid.shape)
    for a in range(grid.dim):
        xi = freq_axis(grid, a)
        sh = [1] * grid.dim
        sh[a] = grid.shape[a]
        phase = phase + (xi * center[a]).reshape(sh)
        gauss = gauss * np.exp(-(((xi - xi0[a]) / width) ** 2) / 2.0).reshape(sh)
    c = (gauss * np.exp(-1j * phase) * band_mask(grid, band))[..., np.newaxis]
    c = np.broadcast_to(c, grid.shape + (1,)).copy()
    if fiber > 1:
        direction = rng.normal(size=fiber) + 1j * rng.normal(size=fiber)
        c = c * direction
    return _normalized(grid, c, 0.45)


def _edge_member(grid, band, rng, fiber, distance) -> GridFunction:
    """Bump pushed to x1 = distance from the interface, scale tied to distance."""
    L = grid.half_period
    width_x = max(distance / 3.0, 3.0 / band)  # stay inside the band
    sigma_xi = 1.0 / width_x
    xi0 = freq_axis(grid, 0)
    prof = np.exp(-((xi0 / sigma_xi) ** 2) / 2.0) * np.exp(-1j * xi0 * distance)
    c = np.zeros(grid.shape, dtype=complex)
    sh = [1] * grid.dim
    sh[0] = grid.shape[0]
    c = prof.reshape(sh) * np.ones(grid.shape)
    for a in range(1, grid.dim):
        xi = freq_axis(grid, a)
        sha = [1] * grid.dim
        sha[a] = grid.shape[a]
        cen = rng.uniform(-0.3 * L, 0.3 * L)
        c = c * (np.exp(-((xi / (band / 3.0)) ** 2) / 2.0) * np.exp(-1j * xi * cen)).reshape(sha)
    c = (c * band_mask(grid, band))[..., np.newaxis]
    if fiber > 1:
        direction = rng.normal(size=fiber) + 1j * rng.normal(size=fiber)
        c = c * direction
    else:
        c = np.broadcast_to(c, grid.shape + (1,)).copy()
    return _normalized(grid, c, 0.45)


def generate_bank(cfg: BankConfig) -> list[BankMember]:
    """Deterministic bank: same config and seed give bit-identical members."""
    cfg.validate()
    grid = cfg.grid()
    members: list[BankMember] = []
    idx = 0
    while len(members) < cfg.size:
        kind = cfg.kinds[idx % len(cfg.kinds)]
        rng = np.random.default_rng([cfg.seed, idx])
        if kind == "block":
            f = _block_member(grid, cfg.band, rng, cfg.fiber_dim)
        elif kind == "bump":
            f = _bump_member(grid, cfg.band, rng, cfg.fiber_dim)
        elif kind == "edge":
            dist = cfg.edge_distances[idx % len(cfg.edge_distances)]
            f = _edge_member(grid, cfg.band, rng, cfg.fiber_dim, dist)
        else:
            raise ValueError(f"unknown bank kind {kind!r}")
        members.append(BankMember(f"{kind}-{idx:03d}", kind, f))
        idx += 1
    return members


def dilate(f: GridFunction, octaves: int) -> GridFunction:
    """x -> f(2^octaves x) as an exact spectral re-index.

    Positive octaves always work (indices multiply); negative octaves need
    the spectrum supported on the matching sublattice, else the dilate is
    not representable on this grid.
    """
    coeffs = f.spectrum()
    out = np.zeros_like(coeffs)
    if octaves == 0:
        return f
    grids = f.grid
    if octaves > 0:
        factor = 2**octaves
        idx_src, idx_dst = [], []
        for a in range(grids.dim):
            n = grids.shape[a]
            k = np.fft.fftfreq(n, d=1.0 / n).astype(int)
            keep = np.abs(k * factor) < n // 2
            src = np.nonzero(keep)[0]
            dst = (k[src] * factor) % n
            idx_src.append(src)
            idx_dst.append(dst)
        src_mesh = np.ix_(*idx_src)
        dst_mesh = np.ix_(*idx_dst)
        out[dst_mesh] = coeffs[src_mesh]
        total = float(np.sum(np.abs(coeffs) ** 2))
        kept = float(np.sum(np.abs(coeffs[src_mesh]) ** 2))
        if total > 0 and (total - kept) > 1e-13 * total:
            raise ValueError(
                f"dilate by 2^{octaves} would clip spectral mass "
                f"({np.sqrt((total - kept) / total):.2e} relative); widen the grid band"
            )
    else:
        factor = 2 ** (-octaves)
        for a in range(grids.dim):
            n = grids.shape[a]
            k = np.fft.fftfreq(n, d=1.0 / n).astype(int)
            offlattice = (k % factor != 0)
            sl = [slice(None)] * (grids.dim + 1)
            sl[a] = offlattice
            if np.max(np.abs(coeffs[tuple(sl)])) > 0:
                raise ValueError(
                    f"spectrum off the 2^{-octaves} sublattice; downward dilate not exact"
                )
        idx_src, idx_dst = [], []
        for a in range(grids.dim):
            n = grids.shape[a]
            k = np.fft.fftfreq(n, d=1.0 / n).astype(int)
            keep = k % factor == 0
            src = np.nonzero(keep)[0]
            dst = (k[src] // factor) % n
            idx_src.append(src)
            idx_dst.append(dst)
        out[np.ix_(*idx_dst)] = coeffs[np.ix_(*idx_src)]
    return GridFunction.from_spectrum(f.grid, out, f.support_margin, f.gamma)


def translate_axis0(f: GridFunction, delta: float) -> GridFunction:
    """Exact shift x1 -> x1 - delta through a spectral phase."""
    xi = freq_axis(f.grid, 0)
    sh = [1] * (f.grid.dim + 1)
    sh[0] = f.grid.shape[0]
    coeffs = f.spectrum() * np.exp(-1j * xi * delta).reshape(sh)
    return GridFunction.from_spectrum(f.grid, coeffs, f.support_margin, f.gamma)


def write_bank(members: list[BankMember], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for m in members:
        p = out / f"{m.member_id}.wtlb"
        write_gridfunction(m.f, p)
        paths.append(p)
    return paths
