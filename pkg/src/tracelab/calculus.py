"""Symbolic calculus of power-weighted function spaces.

Total functions on space descriptors: parameter validation, trace-space and
vector-trace computation, complex-interpolation of the Sobolev/Bessel scales
with boundary-condition bookkeeping, sufficient-condition embedding search,
density classes, and the mixed-norm splitting identity.  Every answer cites
the rules it fired; rejections quote the violated condition.

All parameters are exact rationals; the q-index admits a genuine infinity
value (a distinct object, never a float sentinel).  Threshold comparisons
like s > m + (gamma+1)/p are therefore exact, which matters because the
excluded weights gamma = j*p - 1 form a measure-zero set a float comparison
would misclassify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "INF",
    "Family",
    "DomainKind",
    "ParamSet",
    "BCSignature",
    "SpaceDescriptor",
    "RuleCitation",
    "QueryResult",
    "DescriptorError",
    "validate_params",
    "validate_fields",
    "trace_space",
    "trace_vector_space",
    "interpolate",
    "embeds",
    "density_class",
    "fubini_split",
]


class _Infinity:
    """The extended index q = infinity; totally ordered above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("tracelab-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True


INF = _Infinity()
QIndex = Union[Fraction, _Infinity]


def qmin(a: QIndex, b: QIndex) -> QIndex:
    return a if a <= b else b


def qmax(a: QIndex, b: QIndex) -> QIndex:
    return a if a >= b else b


class Family(Enum):
    BESOV = "B"
    TRIEBEL_LIZORKIN = "F"
    BESSEL_POTENTIAL = "H"
    SOBOLEV = "W"
    LEBESGUE = "L"


class DomainKind(Enum):
    FULL_SPACE = "full"
    HALF_SPACE = "half"
    BOUNDARY = "boundary"


class DescriptorError(ValueError):
    """A descriptor violated a structural invariant at construction."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise DescriptorError(
            f"parameters must be exact rationals, got float {x!r}; pass a string or Fraction"
        )
    raise DescriptorError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class ParamSet:
    """Exact parameter tuple (p, q, smoothness, gamma, dim, fiber_dim)."""

    p: Fraction
    q: QIndex
    smoothness: Fraction
    gamma: Fraction
    dim: int
    fiber_dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", _frac(self.p))
        if not isinstance(self.q, _Infinity):
            object.__setattr__(self, "q", _frac(self.q))
        object.__setattr__(self, "smoothness", _frac(self.smoothness))
        object.__setattr__(self, "gamma", _frac(self.gamma))
        if not self.p > 1:
            raise DescriptorError(f"p must exceed 1, got {self.p}")
        if not self.q >= 1:
            raise DescriptorError(f"q must be at least 1, got {self.q}")
        if not self.gamma > -1:
            raise DescriptorError(f"gamma must exceed -1, got {self.gamma}")
        if self.dim < 1:
            raise DescriptorError(f"dimension must be positive, got {self.dim}")
        if self.fiber_dim < 1:
            raise DescriptorError(f"fiber dimension must be positive, got {self.fiber_dim}")

    def trace_shift(self) -> Fraction:
        return (self.gamma + 1) / self.p

    def excluded_gamma(self) -> Optional[int]:
        """j >= 1 with gamma = j*p - 1, if any."""
        j = (self.gamma + 1) / self.p
        if j.denominator == 1 and j >= 1:
            return int(j)
        return None

    def muckenhoupt(self) -> bool:
        return Fraction(-1) < self.gamma < self.p - 1


@dataclass(frozen=True)
class BCSignature:
    """Signature of a normal boundary-operator system: strictly increasing
    orders and target fiber dimensions; ``all_orders`` marks the full
    zero-trace ladder (every trace that exists vanishes)."""

    orders: tuple[int, ...] = ()
    target_dims: tuple[int, ...] = ()
    all_orders: bool = False

    def __post_init__(self):
        if self.all_orders:
            if self.orders:
                raise DescriptorError("all-orders signature carries no explicit orders")
            return
        if not self.orders:
            raise DescriptorError("boundary signature needs at least one order")
        if list(self.orders) != sorted(set(self.orders)) or self.orders[0] < 0:
            raise DescriptorError("orders must be strictly increasing and nonnegative")
        if self.target_dims and len(self.target_dims) != len(self.orders):
            raise DescriptorError("one target dimension per order required")

    def describe(self) -> str:
        if self.all_orders:
            return "all"
        return ",".join(f"tr{m}" for m in self.orders)


@dataclass(frozen=True)
class SpaceDescriptor:
    family: Family
    params: ParamSet
    domain: DomainKind = DomainKind.FULL_SPACE
    bc: Optional[BCSignature] = None

    def __post_init__(self):
        p = self.params
        if self.family is Family.LEBESGUE and p.smoothness != 0:
            raise DescriptorError("the Lebesgue family has smoothness 0")
        if self.family is Family.BESSEL_POTENTIAL and not p.muckenhoupt():
            raise DescriptorError(
                f"the Bessel-potential scale needs a Muckenhoupt weight: "
                f"gamma in (-1, p-1), got gamma={p.gamma}, p={p.p}"
            )
        if self.family is Family.SOBOLEV:
            if p.smoothness.denominator != 1 or p.smoothness < 0:
                raise DescriptorError("the Sobolev family needs integer smoothness k >= 0")
            if self.domain is DomainKind.FULL_SPACE and not p.gamma < p.p - 1:
                raise DescriptorError(
                    "full-space Sobolev spaces need gamma < p-1 "
                    "(larger weights lose local integrability across the interface)"
                )
        if self.bc is not None and self.domain is not DomainKind.HALF_SPACE:
            raise DescriptorError("boundary conditions require the half-space domain")
        if self.bc is not None and self.family in (Family.BESOV, Family.TRIEBEL_LIZORKIN):
            raise DescriptorError("boundary conditions are kept on the W/H/L scales only")
        if self.domain is DomainKind.BOUNDARY and self.bc is not None:
            raise DescriptorError("a boundary-hyperplane space carries no conditions")

    def short(self) -> str:
        p = self.params
        s = f"{p.smoothness}"
        head = {
            Family.BESOV: f"B^{s}_{{{p.p},{p.q}}}",
            Family.TRIEBEL_LIZORKIN: f"F^{s}_{{{p.p},{p.q}}}",
            Family.BESSEL_POTENTIAL: f"H^{{{s},{p.p}}}",
            Family.SOBOLEV: f"W^{{{s},{p.p}}}",
            Family.LEBESGUE: f"L^{p.p}",
        }[self.family]
        dom = {
            DomainKind.FULL_SPACE: f"R^{p.dim}",
            DomainKind.HALF_SPACE: f"R^{p.dim}_+",
            DomainKind.BOUNDARY: f"R^{p.dim}",
        }[self.domain]
        w = f", w_{p.gamma}" if p.gamma != 0 else ""
        bc = f"; bc={self.bc.describe()}" if self.bc else ""
        fib = f"; C^{p.fiber_dim}" if p.fiber_dim != 1 else ""
        return f"{head}({dom}{w}{bc}{fib})"


@dataclass(frozen=True)
class RuleCitation:
    rule_id: str
    statement: str
    assumptions_used: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "statement": self.statement,
            "assumptions_used": list(self.assumptions_used),
        }


_RULEBOOK = {
    "params.range": "admissible parameters: p in (1,inf), q in [1,inf], gamma > -1, d >= 1, r >= 1",
    "params.ap-class": "the weight |x1|^gamma lies in the Muckenhoupt class A_p iff gamma in (-1, p-1)",
    "params.sobolev-excluded": "the Sobolev-scale results exclude gamma in {j*p-1 : j >= 1}",
    "params.bessel-weight": "the Bessel-potential scale is defined for A_p weights only",
    "trace.threshold": "the m-th trace exists on smoothness s iff s > m + (gamma+1)/p",
    "trace.besov": "Tr_m : B^s_{p,q}(w_gamma) -> B^{s-m-(gamma+1)/p}_{p,q}(boundary) is onto with a right inverse",
    "trace.triebel": "Tr_m : F^s_{p,q}(w_gamma) -> B^{s-m-(gamma+1)/p}_{p,p}(boundary) is onto with a right inverse",
    "trace.bessel": "Tr_m : H^{s,p}(w_gamma) -> B^{s-m-(gamma+1)/p}_{p,p}(boundary), gamma in (-1,p-1), is onto with a right inverse",
    "trace.sobolev": "Tr_m : W^{k,p}(half-space, w_gamma) -> B^{k-m-(gamma+1)/p}_{p,p}(boundary), gamma outside {j*p-1}, is onto with a right inverse",
    "trace.vector": "(Tr_0,...,Tr_m) maps onto the product of the single-order trace spaces, with a joint right inverse",
    "interp.sobolev": "[W^{k0,p}, W^{k0+k1,p}]_{l/k1} = W^{k0+l,p} on the half-space, gamma outside {j*p-1}",
    "interp.sobolev-bc": "[W^{k0,p}, W_B^{k0+k1,p}]_{l/k1} = W_B^{k0+l,p} for a normal system B",
    "interp.sobolev-bc-both": "[W_B^{k0,p}, W_B^{k0+k1,p}]_{l/k1} = W_B^{k0+l,p} by reiteration",
    "interp.bessel": "the weighted Bessel scale interpolates: [H^{s0,p}, H^{s1,p}]_theta = H^{s_theta,p}, gamma in (-1,p-1)",
    "interp.bessel-bc": "[H^{s0,p}, H_B^{s1,p}]_theta = H_B^{s_theta,p} when s0, s_theta, s1 avoid {m_i+(gamma+1)/p}",
    "interp.bessel-bc-both": "[H_B^{s0,p}, H_B^{s1,p}]_theta = H_B^{s_theta,p} by reiteration",
    "interp.sobolev-equals-bessel": "for gamma in (-1, p-1) the integer Bessel and Sobolev spaces coincide: H^{k,p} = W^{k,p}",
    "interp.bc-resolution": "the interpolated space keeps condition B^{m_i} f = 0 exactly when m_i + (gamma+1)/p < resulting smoothness",
    "interp.open-fractional": "fractional-smoothness interpolation for gamma > p-1 is undecided; no rule fires",
    "embed.refl": "every space embeds into itself",
    "embed.q-monotone": "the q-index is monotone: A^s_{p,q0} -> A^s_{p,q1} for q0 <= q1 (A in {B, F})",
    "embed.sobolev-shift": "F^{s0}_{p0,q0}(w_g0) -> F^{s1}_{p1,q1}(w_g1) if p0<=p1, s0>s1, g1/p1 <= g0/p0 and s0-(d+g0)/p0 = s1-(d+g1)/p1",
    "embed.sobolev-shift-besov": "B^{s0}_{p0,q0}(w_g0) -> B^{s1}_{p1,q1}(w_g1) under the F-case conditions plus q0 <= q1",
    "embed.triebel-bessel": "F^s_{p,1} -> H^{s,p} -> F^s_{p,inf} for gamma in (-1, p-1)",
    "embed.triebel-sobolev": "F^k_{p,1} -> W^{k,p} -> F^k_{p,inf} for gamma in (-1, p-1), integer k",
    "embed.besov-triebel": "B^s_{p,min(p,q)} -> F^s_{p,q} -> B^s_{p,max(p,q)}",
    "embed.block-lebesgue": "F^0_{p,1} -> L^p for every admissible weight",
    "embed.hardy-drop": "W^{k,p}(half-space, w_gamma) -> W^{k-1,p}(half-space, w_{gamma-p}) for gamma > p-1",
    "embed.sufficient-only": "embeddings are derived from sufficient conditions only; absence of a chain decides nothing",
    "query.contract": "query arguments must satisfy the operation's stated preconditions",
    "density.no-conditions": "for smoothness <= (gamma+1)/p no trace exists and the constrained space equals the unconstrained one",
    "density.flat-boundary": "functions smooth up to the closed boundary with vanishing m-th normal derivative on it are dense in W^{k,p}_{Tr_m}",
    "density.compact-derivative": "functions whose m-th normal derivative is compactly supported in the open half-space are dense in W^{k,p}_{Tr_m} for (k-m-1)p-1 < gamma < (k-m)p-1",
    "density.fully-compact": "test functions compactly supported off the boundary are dense in the all-orders zero-trace space",
    "fubini.mixed-norm": "W^{k,p}(half-space, w_gamma) = L^p(boundary; W^{k,p}(line, w_gamma)) cap W^{k,p}(boundary; L^p(line, w_gamma))",
}


def _cite(rule_id: str, *assumptions: str) -> RuleCitation:
    return RuleCitation(rule_id, _RULEBOOK[rule_id], tuple(assumptions))


@dataclass(frozen=True)
class QueryResult:
    """Outcome of one calculus query plus the citations that produced it."""

    kind: str  # "space" | "spaces" | "bool" | "identity" | "rejected" | "class"
    payload: object
    citations: tuple[RuleCitation, ...]
    flags: tuple[tuple[str, object], ...] = ()

    @classmethod
    def space(cls, desc: SpaceDescriptor, cites, **flags) -> "QueryResult":
        return cls("space", desc, tuple(cites), tuple(sorted(flags.items())))

    @classmethod
    def spaces(cls, descs, cites) -> "QueryResult":
        return cls("spaces", tuple(descs), tuple(cites))

    @classmethod
    def boolean(cls, value, cites, **flags) -> "QueryResult":
        return cls("bool", value, tuple(cites), tuple(sorted(flags.items())))

    @classmethod
    def rejected(cls, reason: str, cites=()) -> "QueryResult":
        return cls("rejected", reason, tuple(cites))

    @classmethod
    def identity(cls, parts: dict, cites) -> "QueryResult":
        return cls("identity", tuple(sorted(parts.items())), tuple(cites))

    @classmethod
    def klass(cls, name: str, conditions: str, cites) -> "QueryResult":
        return cls("class", (name, conditions), tuple(cites))

    @property
    def is_rejected(self) -> bool:
        return self.kind == "rejected"

    def to_json(self) -> dict:
        if self.kind == "space":
            outcome = {"kind": "space", "space": self.payload.short()}
        elif self.kind == "spaces":
            outcome = {"kind": "spaces", "spaces": [d.short() for d in self.payload]}
        elif self.kind == "bool":
            outcome = {"kind": "bool", "value": self.payload}
        elif self.kind == "identity":
            outcome = {"kind": "identity", "parts": {k: v for k, v in self.payload}}
        elif self.kind == "class":
            outcome = {"kind": "class", "name": self.payload[0], "conditions": self.payload[1]}
        else:
            outcome = {"kind": "rejected", "reason": self.payload}
        if self.flags:
            outcome["flags"] = {k: v for k, v in self.flags}
        return {"outcome": outcome, "citations": [c.to_json() for c in self.citations]}


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_params(desc: SpaceDescriptor) -> QueryResult:
    """Admissibility plus the Muckenhoupt classification of the weight."""
    p = desc.params
    cites = [_cite("params.range")]
    ap = p.muckenhoupt()
    cites.append(
        _cite("params.ap-class", f"gamma={p.gamma}, p={p.p}: {'inside' if ap else 'outside'} (-1, p-1)")
    )
    if desc.family is Family.SOBOLEV:
        j = p.excluded_gamma()
        if j is not None:
            return QueryResult.rejected(
                f"gamma = {j}*p-1 excluded",
                [_cite("params.sobolev-excluded", f"gamma={p.gamma} equals {j}*{p.p}-1")],
            )
    if desc.family is Family.BESSEL_POTENTIAL and not ap:
        return QueryResult.rejected(
            "Bessel potential requires A_p weight", [_cite("params.bessel-weight")]
        )
    return QueryResult.boolean(True, cites, muckenhoupt=ap)


def validate_fields(
    family: Family,
    params: ParamSet,
    domain: DomainKind = DomainKind.FULL_SPACE,
    bc: Optional[BCSignature] = None,
) -> QueryResult:
    """Construction-level validation that reports rejection as a value.

    Used by the query layer so that inadmissible descriptors (for instance a
    Bessel-potential space with gamma >= p-1) surface as Rejected results
    rather than exceptions.
    """
    try:
        desc = SpaceDescriptor(family, params, domain, bc)
    except DescriptorError as exc:
        if family is Family.BESSEL_POTENTIAL and not params.muckenhoupt():
            return QueryResult.rejected(
                "Bessel potential requires A_p weight", [_cite("params.bessel-weight")]
            )
        return QueryResult.rejected(str(exc), [_cite("params.range")])
    return validate_params(desc)


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


def trace_space(desc: SpaceDescriptor, m: int) -> QueryResult:
    if m < 0:
        return QueryResult.rejected("trace order must be nonnegative", [_cite("query.contract")])
    v = validate_params(desc)
    if v.is_rejected:
        return v
    p = desc.params
    if p.dim < 2:
        return QueryResult.rejected("trace spaces live on the boundary: need d >= 2", [_cite("query.contract")])
    shift = p.trace_shift()
    threshold_note = f"s={p.smoothness} > m + (gamma+1)/p = {m + shift}"
    if not p.smoothness > m + shift:
        return QueryResult.rejected(
            f"below trace threshold: s = {p.smoothness} <= m + (gamma+1)/p = {m + shift}",
            [_cite("trace.threshold")],
        )
    fam = desc.family
    if fam is Family.LEBESGUE:
        return QueryResult.rejected(
            "below trace threshold: the Lebesgue scale has smoothness 0",
            [_cite("trace.threshold")],
        )
    if fam is Family.BESOV:
        rule, qt = "trace.besov", p.q
    elif fam is Family.TRIEBEL_LIZORKIN:
        rule, qt = "trace.triebel", p.p
    elif fam is Family.BESSEL_POTENTIAL:
        rule, qt = "trace.bessel", p.p
    else:
        rule, qt = "trace.sobolev", p.p
    if fam in (Family.BESOV, Family.TRIEBEL_LIZORKIN, Family.SOBOLEV):
        if desc.domain is DomainKind.HALF_SPACE and fam is not Family.SOBOLEV and not p.muckenhoupt():
            return QueryResult.rejected(
                "half-space Besov/Triebel-Lizorkin traces are stated for gamma in (-1, p-1)",
                [_cite("params.ap-class")],
            )
    target = SpaceDescriptor(
        Family.BESOV,
        ParamSet(p.p, qt, p.smoothness - m - shift, Fraction(0), p.dim - 1, p.fiber_dim),
        DomainKind.BOUNDARY,
    )
    return QueryResult.space(target, [_cite(rule, threshold_note), _cite("trace.threshold")])


def trace_vector_space(desc: SpaceDescriptor, m: int) -> QueryResult:
    components = []
    cites = [_cite("trace.vector")]
    for j in range(m + 1):
        res = trace_space(desc, j)
        if res.is_rejected:
            return QueryResult.rejected(
                f"component {j} rejected: {res.payload}", res.citations
            )
        components.append(res.payload)
    cites.extend(trace_space(desc, m).citations)
    return QueryResult.spaces(components, cites)


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------


def _mismatches(d0: SpaceDescriptor, d1: SpaceDescriptor) -> list[str]:
    p0, p1 = d0.params, d1.params
    out = []
    if p0.p != p1.p:
        out.append(f"p: {p0.p} vs {p1.p}")
    if p0.gamma != p1.gamma:
        out.append(f"gamma: {p0.gamma} vs {p1.gamma}")
    if d0.domain != d1.domain:
        out.append(f"domain: {d0.domain.value} vs {d1.domain.value}")
    if p0.dim != p1.dim:
        out.append(f"dim: {p0.dim} vs {p1.dim}")
    if p0.fiber_dim != p1.fiber_dim:
        out.append(f"fiber: {p0.fiber_dim} vs {p1.fiber_dim}")
    return out


def _resolve_bc(bc: BCSignature, shift: Fraction, smoothness: Fraction):
    """Conditions surviving at the target smoothness, with a citation note."""
    if bc.all_orders:
        return bc, "all orders below the threshold remain"
    kept = tuple(m for m in bc.orders if m + shift < smoothness)
    dims = tuple(
        d for m, d in zip(bc.orders, bc.target_dims or (1,) * len(bc.orders)) if m + shift < smoothness
    )
    note = (
        f"kept orders {list(kept)} (m + (gamma+1)/p < {smoothness}); "
        f"dropped {[m for m in bc.orders if m not in kept]}"
    )
    if not kept:
        return None, note
    return BCSignature(kept, dims if bc.target_dims else ()), note


def _scale_family(desc: SpaceDescriptor) -> Optional[Family]:
    if desc.family in (Family.SOBOLEV, Family.BESSEL_POTENTIAL):
        return desc.family
    if desc.family is Family.LEBESGUE:
        return None  # joins either scale
    return desc.family  # B/F: no rule


def interpolate(d0: SpaceDescriptor, d1: SpaceDescriptor, theta: Fraction) -> QueryResult:
    theta = _frac(theta)
    if not Fraction(0) < theta < 1:
        return QueryResult.rejected(f"theta must lie in (0,1), got {theta}", [_cite("query.contract")])
    bad = _mismatches(d0, d1)
    if bad:
        return QueryResult.rejected("incompatible pair: " + "; ".join(bad), [_cite("query.contract")])
    for d in (d0, d1):
        v = validate_params(d)
        if v.is_rejected:
            return v
    p0, p1 = d0.params, d1.params
    if not p0.smoothness < p1.smoothness:
        return QueryResult.rejected(
            f"need smoothness(d0) < smoothness(d1), got {p0.smoothness} and {p1.smoothness}",
            [_cite("query.contract")],
        )
    if d0.bc is not None and d0.bc != d1.bc:
        return QueryResult.rejected(
            "no rule: conditions on the lower endpoint must match the upper endpoint",
            [_cite("query.contract")],
        )
    f0, f1 = _scale_family(d0), _scale_family(d1)
    if f1 in (Family.BESOV, Family.TRIEBEL_LIZORKIN) or f0 in (
        Family.BESOV,
        Family.TRIEBEL_LIZORKIN,
    ):
        return QueryResult.rejected("no interpolation rule for the B/F families here", [_cite("query.contract")])
    if f0 is not None and f1 is not None and f0 != f1:
        return QueryResult.rejected(f"scale mismatch: {f0.value} vs {f1.value}", [_cite("query.contract")])
    scale = f1 or f0 or Family.SOBOLEV
    s_theta = (1 - theta) * p0.smoothness + theta * p1.smoothness
    shift = p0.trace_shift()
    both_bc = d0.bc is not None and d0.bc == d1.bc

    if scale is Family.SOBOLEV:
        if s_theta.denominator == 1:
            cites = []
            if both_bc:
                cites.append(_cite("interp.sobolev-bc-both", f"theta={theta}"))
            elif d1.bc is not None:
                cites.append(_cite("interp.sobolev-bc", f"theta={theta}"))
            else:
                cites.append(
                    _cite("interp.sobolev", f"theta={theta}, resulting order {s_theta}")
                )
            bc_out, note = (None, None)
            if d1.bc is not None:
                bc_out, note = _resolve_bc(d1.bc, shift, s_theta)
                cites.append(_cite("interp.bc-resolution", note))
            out = SpaceDescriptor(
                Family.SOBOLEV if s_theta > 0 else Family.LEBESGUE,
                ParamSet(p0.p, p0.q, s_theta, p0.gamma, p0.dim, p0.fiber_dim),
                d0.domain,
                bc_out,
            )
            return QueryResult.space(out, cites)
        # fractional target
        if p0.muckenhoupt():
            return _bessel_interp(d0, d1, theta, s_theta, via_sobolev=True)
        return QueryResult.rejected(
            "open per paper: fractional smoothness with gamma > p-1 has no rule "
            f"(resulting smoothness {s_theta})",
            [_cite("interp.open-fractional")],
        )
    return _bessel_interp(d0, d1, theta, s_theta, via_sobolev=False)


def _bessel_interp(
    d0: SpaceDescriptor,
    d1: SpaceDescriptor,
    theta: Fraction,
    s_theta: Fraction,
    via_sobolev: bool,
) -> QueryResult:
    p0 = d0.params
    shift = p0.trace_shift()
    if not p0.muckenhoupt():
        return QueryResult.rejected(
            "the Bessel scale needs gamma in (-1, p-1)", [_cite("params.bessel-weight")]
        )
    cites = []
    if via_sobolev:
        cites.append(_cite("interp.sobolev-equals-bessel", f"gamma={p0.gamma} in (-1,p-1)"))
    bc = d1.bc
    both_bc = d0.bc is not None and d0.bc == d1.bc
    if bc is not None:
        thresholds = (
            [] if bc.all_orders else [Fraction(m) + shift for m in bc.orders]
        )
        for name, s in (("s0", d0.params.smoothness), ("s_theta", s_theta), ("s1", d1.params.smoothness)):
            if s in thresholds:
                return QueryResult.rejected(
                    f"{name} = {s} hits a trace threshold m_i + (gamma+1)/p",
                    [_cite("interp.bessel-bc")],
                )
        if not d0.params.smoothness > -1 + shift:
            return QueryResult.rejected(
                f"lower smoothness {d0.params.smoothness} must exceed -1 + (gamma+1)/p = {-1 + shift}",
                [_cite("interp.bessel-bc")],
            )
        cites.append(
            _cite("interp.bessel-bc-both" if both_bc else "interp.bessel-bc", f"theta={theta}")
        )
        bc_out, note = _resolve_bc(bc, shift, s_theta)
        cites.append(_cite("interp.bc-resolution", note))
    else:
        cites.append(_cite("interp.bessel", f"theta={theta}"))
        bc_out = None
    if s_theta.denominator == 1 and s_theta >= 0 and bc_out is None and d0.domain is DomainKind.HALF_SPACE:
        # integer result identified with the Sobolev space on the A_p range
        cites.append(_cite("interp.sobolev-equals-bessel"))
    out = SpaceDescriptor(
        Family.BESSEL_POTENTIAL,
        ParamSet(p0.p, p0.q, s_theta, p0.gamma, p0.dim, p0.fiber_dim),
        d0.domain,
        bc_out,
    )
    return QueryResult.space(out, cites)


# ---------------------------------------------------------------------------
# embeddings (sufficient conditions; three-valued)
# ---------------------------------------------------------------------------


def _same_base(a: SpaceDescriptor, b: SpaceDescriptor) -> bool:
    return (
        a.params.dim == b.params.dim
        and a.params.fiber_dim == b.params.fiber_dim
        and a.domain == b.domain
        and a.bc is None
        and b.bc is None
    )


def _pair_rule(a: SpaceDescriptor, b: SpaceDescriptor) -> Optional[RuleCitation]:
    """One-step sufficient conditions for a -> b."""
    if a == b:
        return _cite("embed.refl")
    if not _same_base(a, b):
        return None
    pa, pb = a.params, b.params
    # q-monotonicity within one family
    if (
        a.family == b.family
        and a.family in (Family.BESOV, Family.TRIEBEL_LIZORKIN)
        and (pa.p, pa.smoothness, pa.gamma) == (pb.p, pb.smoothness, pb.gamma)
        and pa.q <= pb.q
    ):
        return _cite("embed.q-monotone", f"q0={pa.q} <= q1={pb.q}")
    # weighted Sobolev-type shift
    if a.family == b.family and a.family in (Family.BESOV, Family.TRIEBEL_LIZORKIN):
        d = Fraction(pa.dim)
        if (
            pa.p <= pb.p
            and pa.smoothness > pb.smoothness
            and pb.gamma / pb.p <= pa.gamma / pa.p
            and pa.smoothness - (d + pa.gamma) / pa.p == pb.smoothness - (d + pb.gamma) / pb.p
        ):
            note = f"s0-(d+g0)/p0 = {pa.smoothness - (d + pa.gamma) / pa.p} = s1-(d+g1)/p1"
            if a.family is Family.TRIEBEL_LIZORKIN:
                return _cite("embed.sobolev-shift", note)
            if pa.q <= pb.q:
                return _cite("embed.sobolev-shift-besov", note, f"q0={pa.q} <= q1={pb.q}")
    same_core = (pa.p, pa.smoothness, pa.gamma) == (pb.p, pb.smoothness, pb.gamma)
    # F endpoints of the Bessel / Sobolev scales
    if same_core and pa.muckenhoupt():
        if a.family is Family.TRIEBEL_LIZORKIN and pa.q == 1 and b.family is Family.BESSEL_POTENTIAL:
            return _cite("embed.triebel-bessel")
        if a.family is Family.BESSEL_POTENTIAL and b.family is Family.TRIEBEL_LIZORKIN and pb.q == INF:
            return _cite("embed.triebel-bessel")
        if (
            a.family is Family.TRIEBEL_LIZORKIN
            and pa.q == 1
            and b.family is Family.SOBOLEV
            and pa.smoothness.denominator == 1
        ):
            return _cite("embed.triebel-sobolev")
        if a.family is Family.SOBOLEV and b.family is Family.TRIEBEL_LIZORKIN and pb.q == INF:
            return _cite("embed.triebel-sobolev")
    # Besov/Triebel sandwich
    if same_core:
        if a.family is Family.BESOV and b.family is Family.TRIEBEL_LIZORKIN and pa.q <= qmin(pb.p, pb.q):
            return _cite("embed.besov-triebel", f"q0={pa.q} <= min(p,q)={qmin(pb.p, pb.q)}")
        if a.family is Family.TRIEBEL_LIZORKIN and b.family is Family.BESOV and qmax(pa.p, pa.q) <= pb.q:
            return _cite("embed.besov-triebel", f"max(p,q)={qmax(pa.p, pa.q)} <= q1={pb.q}")
    # block sum into Lebesgue
    if (
        a.family is Family.TRIEBEL_LIZORKIN
        and a.params.smoothness == 0
        and pa.q == 1
        and b.family is Family.LEBESGUE
        and (pa.p, pa.gamma) == (pb.p, pb.gamma)
    ):
        return _cite("embed.block-lebesgue")
    # Hardy drop on the half-space
    if (
        a.family is Family.SOBOLEV
        and b.family is Family.SOBOLEV
        and a.domain is DomainKind.HALF_SPACE
        and pa.gamma > pa.p - 1
        and pb.gamma == pa.gamma - pa.p
        and pb.smoothness == pa.smoothness - 1
        and pa.p == pb.p
        and pa.smoothness >= 1
    ):
        return _cite("embed.hardy-drop", f"gamma {pa.gamma} -> {pb.gamma}")
    return None


def _successors(a: SpaceDescriptor, q_pool) -> list[tuple[SpaceDescriptor, RuleCitation]]:
    out = []
    pa = a.params

    def mk(family, q=None, smoothness=None, gamma=None, p=None):
        try:
            return SpaceDescriptor(
                family,
                ParamSet(
                    p if p is not None else pa.p,
                    q if q is not None else pa.q,
                    smoothness if smoothness is not None else pa.smoothness,
                    gamma if gamma is not None else pa.gamma,
                    pa.dim,
                    pa.fiber_dim,
                ),
                a.domain,
            )
        except DescriptorError:
            return None

    if a.family in (Family.BESOV, Family.TRIEBEL_LIZORKIN):
        for q in q_pool:
            if q > pa.q:
                nxt = mk(a.family, q=q)
                if nxt:
                    out.append((nxt, _cite("embed.q-monotone", f"q0={pa.q} <= q1={q}")))
    if a.family is Family.BESOV:
        for q in q_pool:
            if qmin(pa.p, q) == pa.q:
                nxt = mk(Family.TRIEBEL_LIZORKIN, q=q)
                if nxt:
                    out.append((nxt, _cite("embed.besov-triebel")))
    if a.family is Family.TRIEBEL_LIZORKIN:
        nxt = mk(Family.BESOV, q=qmax(pa.p, pa.q))
        if nxt:
            out.append((nxt, _cite("embed.besov-triebel")))
        if pa.q == 1 and pa.muckenhoupt():
            nxt = mk(Family.BESSEL_POTENTIAL)
            if nxt:
                out.append((nxt, _cite("embed.triebel-bessel")))
            if pa.smoothness.denominator == 1 and pa.smoothness >= 0:
                nxt = mk(Family.SOBOLEV)
                if nxt:
                    out.append((nxt, _cite("embed.triebel-sobolev")))
        if pa.q == 1 and pa.smoothness == 0:
            nxt = mk(Family.LEBESGUE)
            if nxt:
                out.append((nxt, _cite("embed.block-lebesgue")))
    if a.family is Family.BESSEL_POTENTIAL:
        nxt = mk(Family.TRIEBEL_LIZORKIN, q=INF)
        if nxt:
            out.append((nxt, _cite("embed.triebel-bessel")))
    if a.family is Family.SOBOLEV:
        if pa.muckenhoupt():
            nxt = mk(Family.TRIEBEL_LIZORKIN, q=INF)
            if nxt:
                out.append((nxt, _cite("embed.triebel-sobolev")))
        if a.domain is DomainKind.HALF_SPACE and pa.gamma > pa.p - 1 and pa.smoothness >= 1:
            nxt = mk(Family.SOBOLEV, smoothness=pa.smoothness - 1, gamma=pa.gamma - pa.p)
            if nxt:
                out.append((nxt, _cite("embed.hardy-drop")))
    return out


def _predecessors(b: SpaceDescriptor, q_pool) -> list[tuple[SpaceDescriptor, RuleCitation]]:
    out = []
    pb = b.params

    def mk(family, q=None, smoothness=None):
        try:
            return SpaceDescriptor(
                family,
                ParamSet(
                    pb.p,
                    q if q is not None else pb.q,
                    smoothness if smoothness is not None else pb.smoothness,
                    pb.gamma,
                    pb.dim,
                    pb.fiber_dim,
                ),
                b.domain,
            )
        except DescriptorError:
            return None

    if b.family in (Family.BESOV, Family.TRIEBEL_LIZORKIN):
        for q in q_pool:
            if q < pb.q:
                prev = mk(b.family, q=q)
                if prev:
                    out.append((prev, _cite("embed.q-monotone", f"q0={q} <= q1={pb.q}")))
    if b.family is Family.TRIEBEL_LIZORKIN:
        prev = mk(Family.BESOV, q=qmin(pb.p, pb.q))
        if prev:
            out.append((prev, _cite("embed.besov-triebel")))
    if b.family is Family.BESOV:
        for q in q_pool:
            if qmax(pb.p, q) == pb.q:
                prev = mk(Family.TRIEBEL_LIZORKIN, q=q)
                if prev:
                    out.append((prev, _cite("embed.besov-triebel")))
    if b.family in (Family.BESSEL_POTENTIAL, Family.SOBOLEV) and pb.muckenhoupt():
        rule = "embed.triebel-bessel" if b.family is Family.BESSEL_POTENTIAL else "embed.triebel-sobolev"
        prev = mk(Family.TRIEBEL_LIZORKIN, q=Fraction(1))
        if prev:
            out.append((prev, _cite(rule)))
    if b.family is Family.LEBESGUE:
        prev = mk(Family.TRIEBEL_LIZORKIN, q=Fraction(1), smoothness=Fraction(0))
        if prev:
            out.append((prev, _cite("embed.block-lebesgue")))
    return out


def embeds(d0: SpaceDescriptor, d1: SpaceDescriptor, max_depth: int = 3) -> QueryResult:
    """Three-valued embedding check: True with a rule chain, or unknown.

    Searches chains of at most ``max_depth`` rule applications; never
    asserts a non-embedding.
    """
    for d in (d0, d1):
        v = validate_params(d)
        if v.is_rejected:
            return v
    if d0.bc is not None or d1.bc is not None:
        return QueryResult.boolean("unknown", [_cite("embed.sufficient-only")])
    q_pool = sorted(
        {Fraction(1), d0.params.p, d1.params.p, INF, d0.params.q, d1.params.q},
        key=lambda q: (isinstance(q, _Infinity), q if not isinstance(q, _Infinity) else 0),
    )

    # frontier from d0 (forward) and into d1 (backward), then one connector
    forward: dict[SpaceDescriptor, tuple[RuleCitation, ...]] = {d0: ()}
    frontier = [d0]
    for _ in range((max_depth - 1) // 2 + 1):
        nxt = []
        for a in frontier:
            if len(forward[a]) >= max_depth:
                continue
            for b, cite in _successors(a, q_pool):
                if b not in forward:
                    forward[b] = forward[a] + (cite,)
                    nxt.append(b)
        frontier = nxt
        if not frontier:
            break
    backward: dict[SpaceDescriptor, tuple[RuleCitation, ...]] = {d1: ()}
    frontier = [d1]
    for _ in range((max_depth - 1) // 2 + 1):
        nxt = []
        for b in frontier:
            if len(backward[b]) >= max_depth:
                continue
            for a, cite in _predecessors(b, q_pool):
                if a not in backward:
                    backward[a] = (cite,) + backward[b]
                    nxt.append(a)
        frontier = nxt
        if not frontier:
            break

    best: Optional[tuple[RuleCitation, ...]] = None
    for a, chain_a in forward.items():
        for b, chain_b in backward.items():
            if len(chain_a) + len(chain_b) >= max_depth + 1:
                continue
            link = _pair_rule(a, b)
            if link is None:
                continue
            if link.rule_id == "embed.refl" and (chain_a or chain_b):
                chain = chain_a + chain_b
            else:
                chain = chain_a + (link,) + chain_b
            steps = len(chain_a) + len(chain_b) + (0 if link.rule_id == "embed.refl" else 1)
            if steps > max_depth:
                continue
            if best is None or len(chain) < len(best):
                best = chain
    if best is not None:
        return QueryResult.boolean(True, best)
    return QueryResult.boolean("unknown", [_cite("embed.sufficient-only")])


# ---------------------------------------------------------------------------
# density classes
# ---------------------------------------------------------------------------


def density_class(desc: SpaceDescriptor) -> QueryResult:
    if desc.bc is None:
        return QueryResult.rejected("descriptor carries no zero-trace condition set", [_cite("query.contract")])
    v = validate_params(desc)
    if v.is_rejected:
        return v
    p = desc.params
    shift = p.trace_shift()
    s = p.smoothness
    if s <= shift:
        return QueryResult.klass(
            "unconstrained",
            f"s = {s} <= (gamma+1)/p = {shift}: no trace conditions; space equals the unrestricted space",
            [_cite("density.no-conditions")],
        )
    if desc.bc.all_orders:
        if desc.family is Family.BESSEL_POTENTIAL:
            if (s - shift).denominator == 1:
                return QueryResult.rejected(
                    f"s - (gamma+1)/p = {s - shift} is a nonnegative integer; the class is not stated there",
                    [_cite("density.fully-compact")],
                )
            name = (
                "C_c^inf(open half-space)"
                if desc.domain is DomainKind.HALF_SPACE
                else "C_c^inf(complement of the boundary)"
            )
            return QueryResult.klass(
                name,
                f"gamma in (-1,p-1), s = {s} avoids N0 + (gamma+1)/p",
                [_cite("density.fully-compact")],
            )
        if desc.family is Family.SOBOLEV:
            return QueryResult.klass(
                "C_c^inf(open half-space)",
                "all existing traces vanish",
                [_cite("density.fully-compact")],
            )
        return QueryResult.rejected("no density rule for this family", [_cite("query.contract")])
    if desc.family is not Family.SOBOLEV or len(desc.bc.orders) != 1:
        return QueryResult.rejected(
            "single-order density classes are stated for the Sobolev scale with one condition",
            [_cite("query.contract")],
        )
    m = desc.bc.orders[0]
    k = s  # integer by construction
    if not k > m + shift:
        return QueryResult.klass(
            "unconstrained",
            f"k = {k} <= m + (gamma+1)/p = {m + shift}: the condition is empty",
            [_cite("density.no-conditions")],
        )
    lo = (k - m - 1) * p.p - 1
    hi = (k - m) * p.p - 1
    for j in range(1, int(k - m) + 1):
        if p.gamma == j * p.p - 1:
            return QueryResult.rejected(
                f"gamma = {j}*p-1 excluded for this density statement",
                [_cite("params.sobolev-excluded")],
            )
    if lo < p.gamma < hi:
        return QueryResult.klass(
            "C_c_inf_flat_m",
            f"functions with the m-th normal derivative compactly supported in the open half-space; "
            f"gamma in ({lo}, {hi})",
            [_cite("density.compact-derivative", f"({lo}) < gamma={p.gamma} < ({hi})")],
        )
    return QueryResult.klass(
        "boundary_flat_order_m",
        f"smooth compactly supported functions on the closed half-space whose m-th normal "
        f"derivative vanishes on the boundary; m={m}",
        [_cite("density.flat-boundary")],
    )


# ---------------------------------------------------------------------------
# mixed-norm splitting
# ---------------------------------------------------------------------------


def fubini_split(k: int, p, gamma, dim: int = 2, fiber_dim: int = 1) -> QueryResult:
    p = _frac(p)
    gamma = _frac(gamma)
    if dim < 2:
        return QueryResult.rejected("the splitting needs d >= 2", [_cite("query.contract")])
    if k < 0:
        return QueryResult.rejected("k must be nonnegative", [_cite("query.contract")])
    params = ParamSet(p, p, Fraction(k), gamma, dim)
    j = params.excluded_gamma()
    if j is not None:
        return QueryResult.rejected(
            f"gamma = {j}*p-1 excluded",
            [_cite("params.sobolev-excluded", f"gamma={gamma} equals {j}*{p}-1")],
        )
    cite = _cite("fubini.mixed-norm", f"k={k}, p={p}, gamma={gamma}")
    parts = {
        "full": f"W^{{{k},{p}}}(R^{dim}_+, w_{gamma})",
        "normal_part": f"L^{p}(R^{dim-1}; W^{{{k},{p}}}(R_+, w_{gamma}))",
        "tangential_part": f"W^{{{k},{p}}}(R^{dim-1}; L^{p}(R_+, w_{gamma}))",
        "relation": "full = normal_part cap tangential_part",
        "trivial": "true" if k == 0 else "false",
    }
    return QueryResult.identity(parts, [cite])
