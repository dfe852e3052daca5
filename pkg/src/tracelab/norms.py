"""Weighted norms: Lebesgue, Sobolev, dyadic-block (Besov / Triebel-Lizorkin),
Bessel potential, and the Hardy quotient.

The weight is the power of the distance to the hyperplane x1 = 0, i.e.
|x1|^gamma with gamma > -1.  Quadrature pairs midpoint values with the exact
weight mass of each cell, computed from the antiderivative |x|^(gamma+1) /
(gamma+1); the offset grid guarantees cells never straddle x1 = 0.

Half-space norms: Sobolev and Lebesgue norms are intrinsic (cells with
x1 > 0 only).  Dyadic-block and Bessel norms on the half-space are realized
as full-space norms of a higher-order reflection extension, which requires
gamma < p-1; outside that range only the intrinsic Sobolev norm is offered.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, PeriodizedGrid, evaluate_at_x0, from_spectrum
from .lp import LpSystem, apply_multiplier, bessel_multiplier, derivative_multiplier

__all__ = [
    "WeightSpec",
    "NormResult",
    "lp_norm",
    "sobolev_norm",
    "besov_norm",
    "triebel_norm",
    "bessel_norm",
    "hardy_ratio",
    "reflection_extend",
    "norm_rows_to_csv",
]


@dataclass(frozen=True)
class WeightSpec:
    """Power weight |x1|^gamma on the full space or the half-space x1 > 0."""

    gamma: float
    domain: str = "full"  # "full" | "half"

    def __post_init__(self):
        if not self.gamma > -1.0:
            raise ValueError(f"gamma must exceed -1, got {self.gamma}")
        if self.domain not in ("full", "half"):
            raise ValueError(f"unknown domain {self.domain!r}")

    def muckenhoupt(self, p: float) -> bool:
        return -1.0 < self.gamma < p - 1.0


@dataclass
class NormResult:
    value: float
    truncation_tail: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


def _axis0_masses(grid: PeriodizedGrid, gamma: float) -> np.ndarray:
    """Exact integrals of |x|^gamma over the axis-0 cells."""
    edges = grid.cell_edges(0)
    anti = np.sign(edges) * np.abs(edges) ** (gamma + 1.0) / (gamma + 1.0)
    masses = anti[1:] - anti[:-1]
    if np.any(masses <= 0.0):
        raise ValueError("cell mass must be strictly positive")
    return masses


def _cell_weights(grid: PeriodizedGrid, w: WeightSpec) -> np.ndarray:
    """Weighted cell masses, broadcastable over the grid (zero outside the domain)."""
    masses = _axis0_masses(grid, w.gamma)
    if w.domain == "half":
        centers = grid.axis_coordinates(0)
        masses = np.where(centers > 0.0, masses, 0.0)
    tang = 1.0
    for a in range(1, grid.dim):
        tang *= grid.spacing(a)
    sh = [1] * grid.dim
    sh[0] = grid.shape[0]
    return (masses * tang).reshape(sh)


def _check_margin(f: GridFunction) -> None:
    if f.support_margin < 0.25:
        raise ValueError(
            f"support margin {f.support_margin} below the 0.25 anti-aliasing contract"
        )


def _fiber_magnitude(values: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(values) ** 2, axis=-1))


def lp_norm(f: GridFunction, p: float, w: WeightSpec) -> NormResult:
    """Weighted L^p norm; fiber norm is Euclidean on C^r.

    Summation is numpy's pairwise reduction in a fixed order, so repeated
    runs on identical input are bit-identical.
    """
    if not 1.0 < p < np.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    _check_margin(f)
    mag = _fiber_magnitude(f.values)
    total = np.sum(mag**p * _cell_weights(f.grid, w))
    return NormResult(
        float(total ** (1.0 / p)),
        metadata={"p": p, "gamma": w.gamma, "domain": w.domain},
    )


def _multi_indices(dim: int, order: int):
    """All multi-indices with |alpha| <= order, lexicographic."""
    rng = range(order + 1)
    for alpha in itertools.product(rng, repeat=dim):
        if sum(alpha) <= order:
            yield alpha


def sobolev_norm(f: GridFunction, k: int, p: float, w: WeightSpec) -> NormResult:
    """sum over |alpha| <= k of the weighted L^p norms of the derivatives."""
    if k < 0:
        raise ValueError("smoothness order must be nonnegative")
    total = 0.0
    for alpha in sorted(_multi_indices(f.grid.dim, k)):
        if sum(alpha) == 0:
            total += lp_norm(f, p, w).value
        else:
            df = apply_multiplier(f, derivative_multiplier(f.grid, alpha))
            total += lp_norm(df, p, w).value
    return NormResult(total, metadata={"k": k, "p": p, "gamma": w.gamma, "domain": w.domain})


def _lq(seq: np.ndarray, q: float, axis=None) -> np.ndarray:
    if q == np.inf:
        return np.max(seq, axis=axis)
    return np.sum(seq**q, axis=axis) ** (1.0 / q)


def _resolve_block_input(f: GridFunction, p: float, w: WeightSpec, reflect_order: int):
    """Half-space block norms go through a reflection extension (A_p range only)."""
    if w.domain == "full":
        return f, w
    if not w.muckenhoupt(p):
        raise ValueError(
            "half-space dyadic-block norms need gamma in (-1, p-1); "
            "use the intrinsic Sobolev norm for larger gamma"
        )
    return reflection_extend(f, reflect_order), WeightSpec(w.gamma, "full")


def _block_tail(f: GridFunction, sys: LpSystem, p: float, w: WeightSpec) -> float:
    mask = 1.0 - sys.telescoped()
    tail = GridFunction.from_spectrum(
        f.grid, f.spectrum() * mask[..., np.newaxis], f.support_margin, f.gamma
    )
    return lp_norm(tail, p, w).value


def besov_norm(
    f: GridFunction,
    s: float,
    p: float,
    q: float,
    w: WeightSpec,
    sys: LpSystem,
    reflect_order: int = 4,
) -> NormResult:
    """l^q over blocks of 2^(n s) ||block_n f||_{L^p(w)}."""
    if not (1.0 <= q):
        raise ValueError(f"q must lie in [1, inf], got {q}")
    g, wfull = _resolve_block_input(f, p, w, reflect_order)
    if g.grid != sys.grid:
        raise ValueError("function and block system live on different grids")
    coeffs = g.spectrum()
    block_norms = np.empty(sys.n_blocks + 1)
    for n in range(sys.n_blocks + 1):
        gn = GridFunction.from_spectrum(
            g.grid, coeffs * sys.block_multiplier(n)[..., np.newaxis], g.support_margin
        )
        block_norms[n] = lp_norm(gn, p, wfull).value
    weights = 2.0 ** (s * np.arange(sys.n_blocks + 1))
    value = float(_lq(weights * block_norms, q))
    return NormResult(
        value,
        truncation_tail=_block_tail(g, sys, p, wfull),
        metadata={"s": s, "p": p, "q": q, "gamma": w.gamma, "domain": w.domain},
    )


def triebel_norm(
    f: GridFunction,
    s: float,
    p: float,
    q: float,
    w: WeightSpec,
    sys: LpSystem,
    reflect_order: int = 4,
) -> NormResult:
    """L^p(w) norm of the pointwise l^q over blocks of 2^(n s) |block_n f|."""
    if not (1.0 <= q):
        raise ValueError(f"q must lie in [1, inf], got {q}")
    g, wfull = _resolve_block_input(f, p, w, reflect_order)
    if g.grid != sys.grid:
        raise ValueError("function and block system live on different grids")
    coeffs = g.spectrum()
    stack = np.empty((sys.n_blocks + 1,) + g.grid.shape)
    for n in range(sys.n_blocks + 1):
        vals = from_spectrum(g.grid, coeffs * sys.block_multiplier(n)[..., np.newaxis])
        stack[n] = _fiber_magnitude(vals) * 2.0 ** (s * n)
    pointwise = _lq(stack, q, axis=0)
    total = np.sum(pointwise**p * _cell_weights(g.grid, wfull))
    return NormResult(
        float(total ** (1.0 / p)),
        truncation_tail=_block_tail(g, sys, p, wfull),
        metadata={"s": s, "p": p, "q": q, "gamma": w.gamma, "domain": w.domain},
    )


def bessel_norm(
    f: GridFunction, s: float, p: float, w: WeightSpec, reflect_order: int = 4
) -> NormResult:
    """Weighted L^p norm of the (1 - Laplace)^(s/2) flow of f; A_p weights only."""
    if not w.muckenhoupt(p):
        raise ValueError(
            f"Bessel-potential norm needs gamma in (-1, p-1); got gamma={w.gamma}, p={p}"
        )
    if w.domain == "half":
        g, wfull = reflection_extend(f, reflect_order), WeightSpec(w.gamma, "full")
    else:
        g, wfull = f, w
    smoothed = apply_multiplier(g, bessel_multiplier(g.grid, s))
    res = lp_norm(smoothed, p, wfull)
    res.metadata.update({"s": s, "domain": w.domain})
    return res


def reflection_extend(f: GridFunction, order: int = 4) -> GridFunction:
    """Fill x1 < 0 by the odd-multiple reflection sum_i c_i f(-lambda_i x1, .).

    lambda_i = 2i+1 keeps reflected sample points on the offset grid; the
    coefficients solve the Vandermonde system sum_i c_i (-lambda_i)^j = 1 for
    j = 0..order, matching derivatives up to ``order`` across the interface.
    Reflected positions outside the torus contribute zero (support margin).
    """
    grid = f.grid
    if not grid.offset_axis0:
        raise ValueError("reflection needs the offset axis-0 grid")
    lam = np.array([2 * i + 1 for i in range(order + 1)], dtype=float)
    vand = np.vander(-lam, order + 1, increasing=True).T  # rows j, cols i
    coef = np.linalg.solve(vand, np.ones(order + 1))
    n0 = grid.shape[0]
    half = n0 // 2
    out = f.values.copy()
    # negative-side nodes: x = -(m + 1/2) h for m = 0..half-1, node index half-1-m
    for m in range(half):
        acc = np.zeros_like(f.values[0])
        for lam_i, c_i in zip(lam.astype(int), coef):
            src = lam_i * m + (lam_i - 1) // 2  # position (lam_i (m+1/2)) h
            if src < half:
                acc = acc + c_i * f.values[half + src]
        out[half - 1 - m] = acc
    return GridFunction(grid, out, f.support_margin, f.gamma)


class HardyHypothesisError(ValueError):
    """The quotient's hypotheses exclude this input."""


def hardy_ratio(u: GridFunction, p: float, gamma: float, boundary_tol: float = 1e-8) -> float:
    """||u||_{L^p(w_{gamma-p})} / ||u'||_{L^p(w_gamma)} on the half-line.

    Admissible either for gamma > p-1, or for gamma < p-1 together with
    u(0) = 0 (checked spectrally); gamma = p-1 is excluded.  The numerator
    uses the exact identity |u(x)|^p x^(gamma-p) = |u(x)/x|^p x^gamma, which
    stays quadrature-friendly for every gamma > -1.
    """
    if u.grid.dim != 1:
        raise ValueError("the Hardy quotient is a half-line (d = 1) computation")
    if gamma == p - 1.0:
        raise HardyHypothesisError("gamma = p-1 is excluded")
    scale = float(np.max(np.abs(u.values)))
    if scale == 0.0:
        raise ValueError("zero input")
    if gamma < p - 1.0:
        u0 = float(np.max(np.abs(evaluate_at_x0(u, 0.0))))
        if u0 > boundary_tol * scale:
            raise HardyHypothesisError(
                f"gamma < p-1 requires a vanishing boundary value; |u(0)| = {u0:.3e}"
            )
    w = WeightSpec(gamma, "half")
    x = u.grid.axis_coordinates(0)
    over_x = GridFunction(
        u.grid, u.values / x[:, np.newaxis], u.support_margin, u.gamma
    )
    numer = lp_norm(over_x, p, w).value
    du = apply_multiplier(u, derivative_multiplier(u.grid, (1,)))
    denom = lp_norm(du, p, w).value
    if denom == 0.0:
        raise ValueError("derivative vanishes identically")
    return numer / denom


def norm_rows_to_csv(rows, path) -> None:
    """Write NormResult batches: one row per (function, norm) evaluation."""
    fieldnames = [
        "function_id",
        "family",
        "s_or_k",
        "p",
        "q",
        "gamma",
        "domain",
        "value",
        "tail",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})
