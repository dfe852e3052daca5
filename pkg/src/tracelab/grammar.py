"""Compact descriptor grammar for the query CLI.

    query   := validate DESC
             | trace m=INT DESC
             | vtrace m=INT DESC
             | interp theta=RAT DESC DESC
             | embeds DESC DESC
             | density DESC
             | fubini k=INT p=RAT gamma=RAT [d=INT]
    DESC    := FAMILY '[' kv (',' kv)* ']'
    FAMILY  := B | F | H | W | L
    kv      := (s|k|p|q|gamma|d|r|domain|bc) '=' value
    value   := rational ('3', '1/2', '-0.5'), 'inf' (q only),
               full|half|boundary (domain), 'all' or 'tr0:tr1:...' (bc)

Rationals are parsed exactly (decimals go through Fraction, never float).
Malformed input raises QueryParseError carrying the offending position.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .calculus import (
    INF,
    BCSignature,
    DescriptorError,
    DomainKind,
    Family,
    ParamSet,
    QueryResult,
    SpaceDescriptor,
    density_class,
    embeds,
    fubini_split,
    interpolate,
    trace_space,
    trace_vector_space,
    validate_fields,
    validate_params,
)

__all__ = ["QueryParseError", "parse_descriptor", "run_query"]

_FAMILIES = {f.value: f for f in Family}
_DOMAINS = {d.value: d for d in DomainKind}


class QueryParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        pointer = text + "\n" + " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n{pointer}")
        self.pos = pos


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def error(self, message: str):
        raise QueryParseError(message, self.text, self.pos)

    def take(self, pattern: str, what: str) -> str:
        self.skip_ws()
        m = re.compile(pattern).match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def peek_char(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect_char(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1


def _parse_rational(token: str, scanner: _Scanner, allow_inf: bool = False):
    if token == "inf":
        if not allow_inf:
            scanner.error("'inf' is only admissible for q")
        return INF
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        scanner.error(f"cannot read rational {token!r}")


def _parse_bc(token: str, scanner: _Scanner) -> BCSignature:
    if token == "all":
        return BCSignature(all_orders=True)
    orders = []
    for part in token.split(":"):
        m = re.fullmatch(r"tr(\d+)", part)
        if not m:
            scanner.error(f"bad boundary-condition item {part!r} (want trN or 'all')")
        orders.append(int(m.group(1)))
    try:
        return BCSignature(tuple(orders))
    except DescriptorError as exc:
        scanner.error(str(exc))


def parse_descriptor(scanner: _Scanner):
    """DESC -> (Family, ParamSet, DomainKind, BCSignature|None), unvalidated."""
    quoted = scanner.peek_char() == '"'
    if quoted:
        scanner.expect_char('"')
    fam_tok = scanner.take(r"[BFHWL]", "a family letter (B, F, H, W, L)")
    family = _FAMILIES[fam_tok]
    scanner.expect_char("[")
    fields: dict[str, object] = {}
    while True:
        key = scanner.take(r"[a-zA-Z]+", "a parameter key")
        if key not in ("s", "k", "p", "q", "gamma", "d", "r", "domain", "bc"):
            scanner.error(f"unknown key {key!r}")
        scanner.expect_char("=")
        raw = scanner.take(r"[A-Za-z0-9_./:+-]+", f"a value for {key}")
        if key in ("s", "k"):
            fields["smoothness"] = _parse_rational(raw, scanner)
        elif key == "p":
            fields["p"] = _parse_rational(raw, scanner)
        elif key == "q":
            fields["q"] = _parse_rational(raw, scanner, allow_inf=True)
        elif key == "gamma":
            fields["gamma"] = _parse_rational(raw, scanner)
        elif key == "d":
            fields["dim"] = int(raw)
        elif key == "r":
            fields["fiber_dim"] = int(raw)
        elif key == "domain":
            if raw not in _DOMAINS:
                scanner.error(f"unknown domain {raw!r} (full, half, boundary)")
            fields["domain"] = _DOMAINS[raw]
        elif key == "bc":
            fields["bc"] = _parse_bc(raw, scanner)
        ch = scanner.peek_char()
        if ch == ",":
            scanner.expect_char(",")
            continue
        scanner.expect_char("]")
        break
    if quoted:
        scanner.expect_char('"')
    if "p" not in fields:
        scanner.error("descriptor needs p")
    domain = fields.pop("domain", DomainKind.FULL_SPACE)
    bc = fields.pop("bc", None)
    p = fields.pop("p")
    try:
        params = ParamSet(
            p,
            fields.pop("q", p),
            fields.pop("smoothness", Fraction(0)),
            fields.pop("gamma", Fraction(0)),
            fields.pop("dim", 2),
            fields.pop("fiber_dim", 1),
        )
    except DescriptorError as exc:
        scanner.error(str(exc))
    if bc is not None and domain is DomainKind.FULL_SPACE:
        domain = DomainKind.HALF_SPACE
    return family, params, domain, bc


def _build(scanner: _Scanner):
    family, params, domain, bc = parse_descriptor(scanner)
    check = validate_fields(family, params, domain, bc)
    if check.is_rejected:
        return None, check
    return SpaceDescriptor(family, params, domain, bc), None


def _parse_keyed(scanner: _Scanner, key: str, allow_inf: bool = False):
    got = scanner.take(rf"{key}", f"'{key}='")
    scanner.expect_char("=")
    raw = scanner.take(r"[A-Za-z0-9_./+-]+", f"a value for {key}")
    return _parse_rational(raw, scanner, allow_inf)


def run_query(text: str) -> QueryResult:
    """Parse and evaluate one query string."""
    scanner = _Scanner(text)
    cmd = scanner.take(r"[a-z]+", "a command (validate, trace, vtrace, interp, embeds, density, fubini)")
    if cmd == "validate":
        desc, rej = _build(scanner)
        result = rej if rej is not None else validate_params(desc)
    elif cmd in ("trace", "vtrace"):
        m = _parse_keyed(scanner, "m")
        if m.denominator != 1 or m < 0:
            scanner.error("m must be a nonnegative integer")
        desc, rej = _build(scanner)
        if rej is not None:
            result = rej
        elif cmd == "trace":
            result = trace_space(desc, int(m))
        else:
            result = trace_vector_space(desc, int(m))
    elif cmd == "interp":
        theta = _parse_keyed(scanner, "theta")
        d0, rej0 = _build(scanner)
        if rej0 is not None:
            result = rej0
        else:
            d1, rej1 = _build(scanner)
            result = rej1 if rej1 is not None else interpolate(d0, d1, theta)
    elif cmd == "embeds":
        d0, rej0 = _build(scanner)
        if rej0 is not None:
            result = rej0
        else:
            d1, rej1 = _build(scanner)
            result = rej1 if rej1 is not None else embeds(d0, d1)
    elif cmd == "density":
        desc, rej = _build(scanner)
        result = rej if rej is not None else density_class(desc)
    elif cmd == "fubini":
        k = _parse_keyed(scanner, "k")
        p = _parse_keyed(scanner, "p")
        gamma = _parse_keyed(scanner, "gamma")
        dim = 2
        if not scanner.done():
            dim = int(_parse_keyed(scanner, "d"))
        if k.denominator != 1 or k < 0:
            scanner.error("k must be a nonnegative integer")
        result = fubini_split(int(k), p, gamma, dim)
    else:
        scanner.pos = 0
        scanner.error(f"unknown command {cmd!r}")
    if not scanner.done():
        scanner.error("trailing input")
    return result
