"""Connected-sum arithmetic and classification of glued SO(p,p+1) data."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GluingIncompatibility, InvalidParameter
from .parabolic import ParabolicLine

__all__ = [
    "GlueSpec",
    "ComponentClass",
    "ExhaustionReport",
    "connected_sum_genus",
    "glue_degree",
    "model_degree",
    "classify_component",
    "exhaust",
    "explain_gap",
    "toledo_bound",
    "is_maximal",
    "toledo_glue",
    "euler_range",
]

INVALID = "Invalid"
ZERO_OR_BOUNDARY = "ZeroOrBoundary"
EXCEPTIONAL = "Exceptional"
HITCHIN = "Hitchin"


def _int(name: str, v, lo: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidParameter(f"{name} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise InvalidParameter(f"{name} must be >= {lo}, got {v}")
    return v


@dataclass(frozen=True, order=True)
class GlueSpec:
    """Hitchin-type model on (g1, s) glued to a Psi-type model on (g2, s)."""

    p: int
    g1: int
    g2: int
    s: int
    k: int

    def __post_init__(self):
        _int("p", self.p, 1)
        _int("g1", self.g1, 0)
        _int("g2", self.g2, 0)
        _int("s", self.s, 1)
        _int("k", self.k)
        if not 1 <= self.k <= self.p:
            raise InvalidParameter(f"k must lie in 1..{self.p}, got {self.k}")
        for name, g in (("g1", self.g1), ("g2", self.g2)):
            if 2 * g - 2 + self.s <= 0:
                raise InvalidParameter(f"side {name}={g} with s={self.s} violates 2g-2+s > 0")

    @property
    def genus(self) -> int:
        return connected_sum_genus(self.g1, self.g2, self.s)

    @property
    def degree(self) -> int:
        return model_degree(self)

    def to_json(self) -> dict:
        return {"p": self.p, "g1": self.g1, "g2": self.g2, "s": self.s, "k": self.k}


@dataclass(frozen=True)
class ComponentClass:
    tag: str
    d: int

    def __str__(self):
        return f"{self.tag}({self.d})" if self.tag == EXCEPTIONAL else self.tag

    def to_json(self) -> dict:
        return {"tag": self.tag, "d": self.d}


def connected_sum_genus(g1: int, g2: int, s: int) -> int:
    _int("g1", g1, 0)
    _int("g2", g2, 0)
    _int("s", s, 1)
    return g1 + g2 + s - 1


def glue_degree(first: ParabolicLine, second: ParabolicLine) -> int:
    """Degree of the glued line: the sum of the two parabolic degrees."""
    if first.base.s != second.base.s:
        raise GluingIncompatibility(
            f"divisors differ in size: {first.base.s} vs {second.base.s}")
    total = first.pardeg + second.pardeg
    if total.denominator != 1:
        raise GluingIncompatibility(f"parabolic degrees sum to non-integer {total}")
    return int(total)


def model_degree(spec: GlueSpec) -> int:
    """d = 2p(g1 - 1) + (2k - 1)s."""
    return 2 * spec.p * (spec.g1 - 1) + (2 * spec.k - 1) * spec.s


def _top(p: int, g: int) -> int:
    return p * (2 * g - 2)


def classify_component(p: int, g: int, d: int) -> ComponentClass:
    _int("p", p, 1)
    _int("g", g, 2)
    _int("d", d)
    top = _top(p, g)
    if d == 0:
        return ComponentClass(ZERO_OR_BOUNDARY, d)
    if 0 < d <= top - 1:
        return ComponentClass(EXCEPTIONAL, d)
    if d == top:
        return ComponentClass(HITCHIN, d)
    return ComponentClass(INVALID, d)


@dataclass(frozen=True)
class ExhaustionReport:
    p: int
    g: int
    achieved: tuple[int, ...]
    missing: tuple[int, ...]
    witnesses: dict = field(compare=False)
    gap_reasons: dict = field(compare=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "g": self.g,
            "range": [1, _top(self.p, self.g) - 1],
            "achieved": list(self.achieved),
            "missing": list(self.missing),
            "witnesses": {str(d): w.to_json() for d, w in sorted(self.witnesses.items())},
            "gap_reasons": {str(d): r for d, r in sorted(self.gap_reasons.items())},
        }


def _specs_for_genus(p: int, g: int):
    for s in range(1, g + 2):
        for g1 in range(0, g + 2 - s):
            g2 = g + 1 - s - g1
            if 2 * g1 - 2 + s <= 0 or 2 * g2 - 2 + s <= 0:
                continue
            for k in range(1, p + 1):
                yield GlueSpec(p, g1, g2, s, k)


def exhaust(p: int, g: int) -> ExhaustionReport:
    """Enumerate all glue specs of total genus g and collect exceptional degrees.

    The first GlueSpec in (s, g1, k) order is kept as witness for each degree.
    Every missing degree gets an explanation from :func:`explain_gap`.
    """
    _int("p", p, 1)
    _int("g", g, 2)
    top = _top(p, g)
    witnesses: dict[int, GlueSpec] = {}
    for spec in _specs_for_genus(p, g):
        d = model_degree(spec)
        if 0 < d <= top - 1 and d not in witnesses:
            witnesses[d] = spec
    achieved = tuple(sorted(witnesses))
    missing = tuple(d for d in range(1, top) if d not in witnesses)
    reasons = {d: explain_gap(p, g, d) for d in missing}
    return ExhaustionReport(p, g, achieved, missing, witnesses, reasons)


def explain_gap(p: int, g: int, d: int) -> str:
    """Reason, via parity and solving for g1, why no glue spec has degree d.

    Since 2p(g1 - 1) is even, d and s must have the same parity.  For each
    admissible s and k the degree equation fixes g1 uniquely, so the only
    remaining question is whether that g1 and g2 = g + 1 - s - g1 satisfy
    the domain constraints.
    """
    notes = []
    for s in range(1, g + 2):
        if (d - s) % 2:
            notes.append(f"s={s}: parity d≢s (mod 2)")
            continue
        tried = []
        for k in range(1, p + 1):
            rest = d - (2 * k - 1) * s
            if rest % (2 * p):
                tried.append(f"k={k}: 2p∤{rest}")
                continue
            g1 = 1 + rest // (2 * p)
            g2 = g + 1 - s - g1
            if g1 < 0 or g2 < 0:
                tried.append(f"k={k}: g1={g1}, g2={g2} negative")
            elif 2 * g1 - 2 + s <= 0 or 2 * g2 - 2 + s <= 0:
                tried.append(f"k={k}: (g1,g2)=({g1},{g2}) violates 2g-2+s>0")
            else:
                return f"achievable with s={s}, k={k}, g1={g1}, g2={g2}"
        notes.append(f"s={s}: " + "; ".join(tried))
    return "no solution: " + " | ".join(notes)


def toledo_bound(g: int, rank: int, boundary: int = 0) -> int:
    """Milnor-Wood type bound rank * |chi| with chi = 2 - 2g - boundary."""
    _int("g", g, 0)
    _int("rank", rank, 1)
    _int("boundary", boundary, 0)
    if 2 * g - 2 + boundary <= 0:
        raise InvalidParameter("the surface must have negative Euler characteristic")
    return (2 * g - 2 + boundary) * rank


def is_maximal(t: int, g: int, rank: int, boundary: int = 0) -> bool:
    return abs(t) == toledo_bound(g, rank, boundary)


def toledo_glue(t1: int, t2: int) -> int:
    return t1 + t2


def euler_range(g: int) -> tuple[int, int]:
    _int("g", g, 2)
    return (2 - 2 * g, 2 * g - 2)

