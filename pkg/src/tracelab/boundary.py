"""Normal boundary operators, their systems, and the system right inverse.

A boundary operator of order m acts as

    B f = sum_{|alpha| <= m} b_alpha d^{alpha~} (Tr_{alpha_1} f),

with matrix-valued tangential coefficient fields b_alpha.  It is *normal*
when the leading coefficient (the one multiplying Tr_m) admits a pointwise
right inverse (a coretraction); systems stack operators of strictly
increasing orders.  The right inverse ``ext_boundary`` reproduces the
prescribed data and annihilates all skipped traces; ``extended_system``
augments a system to a full ladder of operators whose joint kernel is
exactly the zero-trace class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import GridFunction, PeriodizedGrid, read_gridfunction, spectral_tail_fraction
from .lp import LpSystem, apply_multiplier, derivative_multiplier
from .traceext import EtaFamily, ext_m, trace_m

__all__ = [
    "BoundaryOperator",
    "NormalSystem",
    "ExtendedSystem",
    "build_normal_system",
    "apply_boundary_operator",
    "ext_boundary",
    "extended_system",
    "kernel_equiv_check",
    "load_system_json",
]


@dataclass
class BoundaryOperator:
    """Order-m operator with coefficient fields keyed by (alpha1, alpha_tilde).

    Each coefficient is an array of shape ``bgrid.shape + (target_dim,
    source_dim)``; constant matrices may be given as plain (r', r) arrays and
    are broadcast.  Coefficient fields must be band-limited on the boundary
    grid (standing in for smoothness of the tangential symbols).
    """

    order: int
    coefficients: dict[tuple[int, tuple[int, ...]], np.ndarray]
    source_dim: int
    target_dim: int
    grid: PeriodizedGrid
    band_tol: float = 1e-8

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("operator order must be nonnegative")
        leading = False
        norm_coeffs: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}
        for (a1, at), c in self.coefficients.items():
            at = tuple(at)
            if a1 + sum(at) > self.order:
                raise ValueError(f"coefficient index ({a1}, {at}) exceeds order {self.order}")
            if len(at) != self.grid.dim:
                raise ValueError("tangential multi-index length must match boundary dim")
            c = np.asarray(c, dtype=complex)
            if c.shape == (self.target_dim, self.source_dim):
                c = np.broadcast_to(c, self.grid.shape + c.shape).copy()
            if c.shape != self.grid.shape + (self.target_dim, self.source_dim):
                raise ValueError(f"coefficient ({a1}, {at}) has shape {c.shape}")
            if a1 + sum(at) == self.order and np.max(np.abs(c)) > 0:
                leading = True
            self._check_band(c)
            norm_coeffs[(a1, at)] = c
        if not leading:
            raise ValueError("some coefficient of top total order must be nonzero")
        self.coefficients = norm_coeffs

    def _check_band(self, c: np.ndarray) -> None:
        flat = c.reshape(self.grid.shape + (-1,))
        tail = spectral_tail_fraction(
            GridFunction(self.grid, flat), 0.75 * self.grid.max_frequency()
        )
        if tail > self.band_tol:
            raise ValueError(f"coefficient field is not band-limited (tail {tail:.2e})")

    def leading_coefficient(self) -> np.ndarray:
        key = (self.order, (0,) * self.grid.dim)
        if key not in self.coefficients:
            raise ValueError("leading coefficient (order-m trace term) is absent")
        return self.coefficients[key]


def _matvec(field: np.ndarray, g: GridFunction) -> GridFunction:
    vals = np.einsum("...ij,...j->...i", field, g.values)
    return GridFunction(g.grid, vals, g.support_margin, g.gamma)


def _apply_to_traces(op: BoundaryOperator, traces: dict[int, GridFunction]) -> GridFunction:
    out = None
    for (a1, at), c in sorted(op.coefficients.items()):
        piece = traces[a1]
        if sum(at) > 0:
            piece = apply_multiplier(piece, derivative_multiplier(piece.grid, at))
        term = _matvec(c, piece)
        out = term if out is None else out + term
    return out


def apply_boundary_operator(
    op: BoundaryOperator, f: GridFunction, fsys: LpSystem
) -> GridFunction:
    """B f as tangential-derivative combinations of the normal traces."""
    if f.fiber_dim != op.source_dim:
        raise ValueError(
            f"operator expects fiber {op.source_dim}, function has {f.fiber_dim}"
        )
    traces = {j: trace_m(f, j, fsys) for j in range(op.order + 1)}
    return _apply_to_traces(op, traces)


@dataclass
class NormalSystem:
    """Operators of strictly increasing order plus pointwise coretractions.

    ``coretractions[i]`` has shape bgrid.shape + (r, r'_i) and satisfies
    b_{i,m_i} b^c_i = id pointwise; ``projections[i] = b^c_i b_{i,m_i}`` is a
    pointwise idempotent acting on the source fiber.
    """

    operators: list[BoundaryOperator]
    coretractions: list[np.ndarray]
    projections: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        orders = [op.order for op in self.operators]
        if orders != sorted(set(orders)):
            raise ValueError("operator orders must be strictly increasing")
        if len(self.coretractions) != len(self.operators):
            raise ValueError("one coretraction per operator required")
        if not self.projections:
            self.projections = [
                np.einsum("...ij,...jk->...ik", c, op.leading_coefficient())
                for op, c in zip(self.operators, self.coretractions)
            ]
        for op, c, pi in zip(self.operators, self.coretractions, self.projections):
            b = op.leading_coefficient()
            ident = np.einsum("...ij,...jk->...ik", b, c)
            eye = np.eye(op.target_dim)
            if np.max(np.abs(ident - eye)) > 1e-12:
                raise ValueError("coretraction is not a pointwise right inverse")
            pi2 = np.einsum("...ij,...jk->...ik", pi, pi)
            if np.max(np.abs(pi2 - pi)) > 1e-11:
                raise ValueError("projection field is not idempotent")

    @property
    def orders(self) -> list[int]:
        return [op.order for op in self.operators]

    @property
    def top_order(self) -> int:
        return self.operators[-1].order

    @property
    def source_dim(self) -> int:
        return self.operators[0].source_dim

    @property
    def grid(self) -> PeriodizedGrid:
        return self.operators[0].grid


def pointwise_pseudoinverse(b: np.ndarray, rel_tol: float = 1e-8) -> np.ndarray:
    """Moore-Penrose coretraction for a full-row-rank leading coefficient."""
    scale = float(np.max(np.abs(b)))
    rp = b.shape[-2]
    pinv = np.linalg.pinv(b)
    resid = np.einsum("...ij,...jk->...ik", b, pinv) - np.eye(rp)
    if np.max(np.abs(resid)) > rel_tol * max(scale, 1.0):
        raise ValueError("leading coefficient is rank-deficient at some node")
    return pinv


def build_normal_system(
    operators: list[BoundaryOperator],
    coretractions: list[np.ndarray] | str = "auto",
) -> NormalSystem:
    if coretractions == "auto":
        coretractions = [pointwise_pseudoinverse(op.leading_coefficient()) for op in operators]
    return NormalSystem(list(operators), list(coretractions))


def _tilde_correction(
    sys: NormalSystem, i: int, traces: dict[int, GridFunction]
) -> GridFunction | None:
    """-sum_{j < m_i} b^c_i b_{i,j}(x~, grad) Tr_j, applied to cached traces."""
    op = sys.operators[i]
    out = None
    for (a1, at), c in sorted(op.coefficients.items()):
        if a1 >= op.order:
            continue
        piece = traces[a1]
        if sum(at) > 0:
            piece = apply_multiplier(piece, derivative_multiplier(piece.grid, at))
        term = _matvec(c, piece)
        out = term if out is None else out + term
    if out is None:
        return None
    return _matvec(sys.coretractions[i], out) * (-1.0)


def ext_boundary(
    sys: NormalSystem,
    data: list[GridFunction],
    eta: EtaFamily,
    bsys: LpSystem,
    fsys: LpSystem,
) -> GridFunction:
    """Right inverse of the system: B^{m_i}(result) = data[i], skipped traces zero.

    Correction recursion: with h_{m_i} = b^c_i data[i] (zero at skipped
    orders), take f_0 = ext_0 h_0 and

        f_j = f_{j-1} + ext_j(h_j + Ctilde^j f_{j-1} - Tr_j f_{j-1}),

    where Ctilde^{m_i} moves the lower-order part of B^{m_i} to the right
    hand side and vanishes at skipped orders.
    """
    if len(data) != len(sys.operators):
        raise ValueError("one boundary datum per operator required")
    orders = sys.orders
    r = sys.source_dim
    bgrid = sys.grid
    zero = GridFunction(bgrid, np.zeros(bgrid.shape + (r,), dtype=complex))

    def h(j: int) -> GridFunction:
        if j in orders:
            i = orders.index(j)
            g = data[i]
            if g.fiber_dim != sys.operators[i].target_dim:
                raise ValueError(f"datum {i} has fiber {g.fiber_dim}")
            return _matvec(sys.coretractions[i], g)
        return zero

    f = ext_m(h(0), 0, eta, bsys)
    for j in range(1, sys.top_order + 1):
        rhs = h(j)
        if j in orders:
            i = orders.index(j)
            traces = {l: trace_m(f, l, fsys) for l in range(j)}
            corr = _tilde_correction(sys, i, traces)
            if corr is not None:
                rhs = rhs + corr
            rhs = rhs - traces.get(j, trace_m(f, j, fsys))
        else:
            rhs = rhs - trace_m(f, j, fsys)
        f = f + ext_m(rhs, j, eta, bsys)
    return f


@dataclass
class ExtendedSystem:
    """Ladder C^0..C^a extending a normal system to all orders <= a.

    C^j is the plain j-th trace off the system's orders; at an order m_i it
    is (1 - pi_i) Tr_{m_i} + b^c_i B^{m_i}, whose joint kernel over
    j = 0..a coincides with the vanishing of all traces up to a.
    """

    base: NormalSystem
    max_order: int

    def __post_init__(self):
        if self.max_order < self.base.top_order:
            raise ValueError("extension order must reach the system's top order")

    def component(self, j: int, traces: dict[int, GridFunction]) -> GridFunction:
        orders = self.base.orders
        if j not in orders:
            return traces[j]
        i = orders.index(j)
        pi = self.base.projections[i]
        tr = traces[j]
        eye = np.eye(self.base.source_dim)
        part1 = _matvec(eye - pi if pi.ndim == 2 else np.broadcast_to(eye, pi.shape) - pi, tr)
        bop = _apply_to_traces(self.base.operators[i], traces)
        part2 = _matvec(self.base.coretractions[i], bop)
        return part1 + part2

    def apply(self, v: GridFunction, fsys: LpSystem) -> list[GridFunction]:
        traces = {j: trace_m(v, j, fsys) for j in range(self.max_order + 1)}
        return [self.component(j, traces) for j in range(self.max_order + 1)]


def extended_system(sys: NormalSystem, max_order: int) -> ExtendedSystem:
    return ExtendedSystem(sys, max_order)


def kernel_equiv_check(
    sys: NormalSystem,
    max_order: int,
    v: GridFunction,
    fsys: LpSystem,
    band: float,
    threshold: float = 1e-6,
) -> dict:
    """Compare 'extended system vanishes' against 'all traces vanish' on v.

    Residuals of order j are normalized by band^j (the natural growth of a
    j-th normal derivative of band-limited data), so the smallness predicate
    is scale-balanced across orders.
    """
    ext = extended_system(sys, max_order)
    traces = {j: trace_m(v, j, fsys) for j in range(max_order + 1)}
    c_res = [
        ext.component(j, traces).l2() / band**j for j in range(max_order + 1)
    ]
    t_res = [traces[j].l2() / band**j for j in range(max_order + 1)]
    c_small = max(c_res) <= threshold
    t_small = max(t_res) <= threshold
    return {
        "c_residuals": c_res,
        "trace_residuals": t_res,
        "c_small": c_small,
        "traces_small": t_small,
        "agree": c_small == t_small,
        "threshold": threshold,
    }


def load_system_json(path, coefficient_root=None) -> NormalSystem:
    """Build a system from a JSON descriptor.

    Layout::

        {"source_dim": r,
         "operators": [{"order": m, "target_dim": r',
                        "coefficients": [{"alpha1": j, "alpha_tilde": [..],
                                          "file": "coef.wtlb"}],
                        "coretraction": "auto" | {"file": "cor.wtlb"}}]}

    Matrix fields are stored as grid functions with fiber r' * r (row-major).
    """
    path = Path(path)
    root = Path(coefficient_root) if coefficient_root is not None else path.parent
    spec = json.loads(path.read_text())
    r = int(spec["source_dim"])
    operators = []
    coretractions: list[np.ndarray] | str = []
    auto = True
    for entry in spec["operators"]:
        rp = int(entry["target_dim"])
        coeffs = {}
        grid = None
        for cspec in entry["coefficients"]:
            gf = read_gridfunction(root / cspec["file"])
            grid = gf.grid
            mat = gf.values.reshape(gf.grid.shape + (rp, r))
            coeffs[(int(cspec["alpha1"]), tuple(cspec["alpha_tilde"]))] = mat
        operators.append(
            BoundaryOperator(int(entry["order"]), coeffs, r, rp, grid)
        )
        cor = entry.get("coretraction", "auto")
        if cor == "auto":
            coretractions.append(None)
        else:
            auto = False
            gf = read_gridfunction(root / cor["file"])
            coretractions.append(gf.values.reshape(gf.grid.shape + (r, rp)))
    if auto:
        return build_normal_system(operators, "auto")
    resolved = [
        c if c is not None else pointwise_pseudoinverse(op.leading_coefficient())
        for op, c in zip(operators, coretractions)
    ]
    return build_normal_system(operators, resolved)
