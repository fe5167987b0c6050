"""Degree and weight calculus for parabolic line bundles.

A line is recorded symbolically as ``K^a ⊗ O(bD) ⊗ N`` over a surface with
a reduced divisor D of s marked points, where N is an auxiliary line of
degree ``extra_deg``.  Each line carries one parabolic weight, the same at
every marked point.  The exponent ``a`` may be a half-integer so that a
square root of K can be represented by degree alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import InvalidParameter, StabilityDomainError

__all__ = [
    "MarkedSurface",
    "ParabolicLine",
    "ParabolicBundle",
    "MetricExponents",
    "pardeg",
    "dual",
    "tensor",
    "tensor_power",
    "trivial_line",
    "sym_power",
    "metric_exponents",
    "direct_sum",
]


def _rational(x, name: str) -> Fraction:
    if isinstance(x, bool):
        raise InvalidParameter(f"{name} must be rational, got bool")
    if isinstance(x, float):
        raise InvalidParameter(f"{name} must be an exact rational, not float")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"{name} must be rational, got {x!r}") from exc


def _frac_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


@dataclass(frozen=True)
class MarkedSurface:
    genus: int
    s: int

    def __post_init__(self):
        if self.genus < 0 or self.s < 0:
            raise InvalidParameter(f"genus and s must be >= 0, got ({self.genus}, {self.s})")

    @property
    def canonical_degree(self) -> int:
        return 2 * self.genus - 2

    @property
    def log_canonical_degree(self) -> int:
        """deg K(D) = 2g - 2 + s."""
        return 2 * self.genus - 2 + self.s

    def require_stable(self) -> None:
        if self.log_canonical_degree <= 0:
            raise StabilityDomainError(
                f"need 2g-2+s > 0, got g={self.genus}, s={self.s}")


@dataclass(frozen=True)
class ParabolicLine:
    base: MarkedSurface
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    extra_deg: int = 0
    weight: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _rational(self.a, "a"))
        object.__setattr__(self, "b", _rational(self.b, "b"))
        object.__setattr__(self, "weight", _rational(self.weight, "weight"))
        if not 0 <= self.weight < 1:
            raise InvalidParameter(f"weight must lie in [0,1), got {self.weight}")
        deg = self.plain_degree
        if deg.denominator != 1:
            raise InvalidParameter(f"plain degree {deg} is not an integer")

    @property
    def plain_degree(self) -> Fraction:
        return self.a * self.base.canonical_degree + self.b * self.base.s + self.extra_deg

    @property
    def pardeg(self) -> Fraction:
        return self.plain_degree + self.weight * self.base.s

    def describe(self) -> str:
        parts = []
        if self.a:
            parts.append(f"K^{self.a}")
        if self.b:
            parts.append(f"O({self.b}D)")
        if self.extra_deg:
            parts.append(f"N[{self.extra_deg}]")
        text = " ⊗ ".join(parts) if parts else "O"
        if self.weight:
            text += f" (weight {self.weight})"
        return text

    def to_json(self) -> dict:
        a = int(self.a) if self.a.denominator == 1 else _frac_json(self.a)
        b = int(self.b) if self.b.denominator == 1 else _frac_json(self.b)
        return {"a": a, "b": b, "extra_deg": self.extra_deg, "weight": _frac_json(self.weight)}


@dataclass(frozen=True)
class ParabolicBundle:
    summands: tuple[ParabolicLine, ...] = field(default_factory=tuple)

    def __post_init__(self):
        lines = tuple(self.summands)
        object.__setattr__(self, "summands", lines)
        if not lines:
            raise InvalidParameter("a bundle needs at least one summand")
        base = lines[0].base
        if any(l.base != base for l in lines):
            raise InvalidParameter("all summands must share the same marked surface")

    @property
    def base(self) -> MarkedSurface:
        return self.summands[0].base

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def pardeg(self) -> Fraction:
        return sum((l.pardeg for l in self.summands), Fraction(0))

    @property
    def par_slope(self) -> Fraction:
        return self.pardeg / self.rank

    def truncate(self, length: int) -> "ParabolicBundle":
        """Direct sum of the first ``length`` summands."""
        if not 1 <= length <= self.rank:
            raise InvalidParameter(f"truncation length {length} outside 1..{self.rank}")
        return ParabolicBundle(self.summands[:length])

    def describe(self) -> str:
        return " ⊕ ".join(l.describe() for l in self.summands)

    def to_json(self) -> dict:
        return {
            "genus": self.base.genus,
            "s": self.base.s,
            "summands": [l.to_json() for l in self.summands],
        }

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return self.rank


def direct_sum(*parts: Union[ParabolicLine, ParabolicBundle]) -> ParabolicBundle:
    lines: list[ParabolicLine] = []
    for part in parts:
        if isinstance(part, ParabolicLine):
            lines.append(part)
        else:
            lines.extend(part.summands)
    return ParabolicBundle(tuple(lines))


def pardeg(x: Union[ParabolicLine, ParabolicBundle]) -> Fraction:
    """Parabolic degree: plain degree plus the weight at each marked point."""
    return x.pardeg


def trivial_line(base: MarkedSurface) -> ParabolicLine:
    return ParabolicLine(base)


def dual(line: ParabolicLine) -> ParabolicLine:
    # weight 0 stays 0: 1 - 0 would leave [0, 1)
    if line.weight == 0:
        return ParabolicLine(line.base, -line.a, -line.b, -line.extra_deg, Fraction(0))
    # negate everything including the weight, then renormalize -w into [0,1):
    # weight 1-w and one extra -D, so pardeg is exactly negated
    return ParabolicLine(line.base, -line.a, -line.b - 1, -line.extra_deg, 1 - line.weight)


def tensor(first: ParabolicLine, second: ParabolicLine) -> ParabolicLine:
    """Tensor product; a combined weight >= 1 is moved into the O(bD) twist."""
    if first.base != second.base:
        raise InvalidParameter("cannot tensor lines over different marked surfaces")
    w = first.weight + second.weight
    shift = math.floor(w)
    return ParabolicLine(
        first.base,
        first.a + second.a,
        first.b + second.b + shift,
        first.extra_deg + second.extra_deg,
        w - shift,
    )


def tensor_power(line: ParabolicLine, n: int) -> ParabolicLine:
    if n < 0:
        return tensor_power(dual(line), -n)
    out = trivial_line(line.base)
    for _ in range(n):
        out = tensor(out, line)
    return out


def sym_power(bundle: ParabolicBundle, n: int) -> ParabolicBundle:
    """S^n of a rank-2 split bundle: summands L1^(n-k) ⊗ L2^k for k = 0..n."""
    if bundle.rank != 2:
        raise InvalidParameter(f"symmetric powers need a rank-2 bundle, got rank {bundle.rank}")
    if n < 0:
        raise InvalidParameter("symmetric power degree must be >= 0")
    first, second = bundle.summands
    return ParabolicBundle(tuple(
        tensor(tensor_power(first, n - k), tensor_power(second, k)) for k in range(n + 1)))


class MetricExponents(NamedTuple):
    """Local growth ``r^power |log r|^log_power`` of a tame harmonic metric."""

    power: Fraction
    log_power: Fraction

    def __add__(self, other):
        return MetricExponents(self.power + other.power, self.log_power + other.log_power)

    def __neg__(self):
        return MetricExponents(-self.power, -self.log_power)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return MetricExponents(self.power * k, self.log_power * k)

    __rmul__ = __mul__

    @staticmethod
    def hom(source: "MetricExponents", target: "MetricExponents") -> "MetricExponents":
        """Exponents of the induced metric on Hom(source, target)."""
        return target - source


def metric_exponents(line: ParabolicLine, filtration_level: int) -> MetricExponents:
    """Exponent pair (weight, level/2) of the harmonic metric near a puncture."""
    return MetricExponents(line.weight, Fraction(filtration_level, 2))


def with_weight(line: ParabolicLine, weight) -> ParabolicLine:
    return replace(line, weight=_rational(weight, "weight"))

