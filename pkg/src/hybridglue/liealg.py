"""Type B_p root data and the principal sl(2) inside so(2p+1, C).

Matrices live in the split basis where the invariant quadratic form is

    Q = [[0, I_p, 0], [I_p, 0, 0], [0, 0, 1]]

so that X belongs to so(Q) iff ``X^T Q + Q X = 0``.  All indices in the
public API (roots, elementary matrices) are 1-based.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional

from .errors import InvalidParameter
from .exact import ComplexMatrix, GaussQ, bracket, solve

__all__ = [
    "Root",
    "Sl2Triple",
    "positive_roots",
    "simple_roots",
    "root_vector",
    "principal_sl2",
    "check_membership",
    "split_form",
    "cartan_basis",
    "so_basis",
    "adx_eigenvalues",
    "adx_decomposition",
    "lowering_display_entries",
    "lowering_display_mismatches",
    "bracket",
]

MINUS = "e_i-e_j"
PLUS = "e_i+e_j"
SHORT = "e_i"


def _check_p(p: int) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise InvalidParameter(f"rank p must be an integer >= 1, got {p!r}")


@dataclass(frozen=True, order=True)
class Root:
    """A positive root of B_p: e_i - e_j, e_i + e_j (i < j) or e_i."""

    kind: str
    i: int
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind in (MINUS, PLUS):
            if self.j is None or not (1 <= self.i < self.j):
                raise InvalidParameter(f"two-index root needs 1 <= i < j, got ({self.i}, {self.j})")
        elif self.kind == SHORT:
            if self.j is not None or self.i < 1:
                raise InvalidParameter(f"short root needs a single index >= 1, got {self.i}")
        else:
            raise InvalidParameter(f"unknown root kind {self.kind!r}")

    def validate(self, p: int) -> None:
        top = self.j if self.j is not None else self.i
        if top > p:
            raise InvalidParameter(f"root {self} has an index above p={p}")

    def is_simple(self, p: int) -> bool:
        if self.kind == MINUS:
            return self.j == self.i + 1
        return self.kind == SHORT and self.i == p

    def coefficients(self, p: int) -> list[int]:
        """Coordinates in the e_1..e_p basis."""
        c = [0] * p
        c[self.i - 1] = 1
        if self.kind == MINUS:
            c[self.j - 1] = -1
        elif self.kind == PLUS:
            c[self.j - 1] = 1
        return c

    def __str__(self):
        if self.kind == MINUS:
            return f"e{self.i}-e{self.j}"
        if self.kind == PLUS:
            return f"e{self.i}+e{self.j}"
        return f"e{self.i}"


@dataclass(frozen=True)
class Sl2Triple:
    """Principal triple with [x,e] = 2e, [x,etilde] = -2 etilde, [e,etilde] = x."""

    x: ComplexMatrix
    e: ComplexMatrix
    etilde: ComplexMatrix

    def defects(self) -> dict[str, ComplexMatrix]:
        """Each bracket relation rewritten as ``lhs - rhs``; all zero when exact."""
        return {
            "[x,e]-2e": bracket(self.x, self.e) - self.e.scale(2),
            "[x,etilde]+2etilde": bracket(self.x, self.etilde) + self.etilde.scale(2),
            "[e,etilde]-x": bracket(self.e, self.etilde) - self.x,
        }

    def holds(self) -> bool:
        return all(d.is_zero() for d in self.defects().values())


def positive_roots(p: int) -> list[Root]:
    """All p^2 positive roots, two-index kinds first, then the short roots."""
    _check_p(p)
    roots = [Root(MINUS, i, j) for i in range(1, p + 1) for j in range(i + 1, p + 1)]
    roots += [Root(PLUS, i, j) for i in range(1, p + 1) for j in range(i + 1, p + 1)]
    roots += [Root(SHORT, i) for i in range(1, p + 1)]
    return roots


def simple_roots(p: int) -> list[Root]:
    _check_p(p)
    return [Root(MINUS, i, i + 1) for i in range(1, p)] + [Root(SHORT, p)]


def root_vector(p: int, root: Root, sign: int = 1) -> ComplexMatrix:
    """Root vector X_{±root} in so(2p+1, C).

    Negative two-index root vectors are the transposes of the positive ones;
    so(Q) is closed under transposition because Q is a symmetric permutation
    matrix.  For short roots this agrees with X_{-e_i} = E_{p+i,2p+1} - E_{2p+1,i}
    up to an overall sign (that formula equals -X_{e_i}^T).
    """
    _check_p(p)
    if sign not in (1, -1):
        raise InvalidParameter("sign must be +1 or -1")
    root.validate(p)
    n = 2 * p + 1
    i, j = root.i, root.j
    if root.kind == SHORT:
        if sign == 1:
            ent = {(i - 1, n - 1): 1, (n - 1, p + i - 1): -1}
        else:
            ent = {(p + i - 1, n - 1): 1, (n - 1, i - 1): -1}
        return ComplexMatrix.from_entries(n, ent)
    if root.kind == MINUS:
        ent = {(i - 1, j - 1): 1, (p + j - 1, p + i - 1): -1}
    else:
        ent = {(i - 1, p + j - 1): 1, (j - 1, p + i - 1): -1}
    m = ComplexMatrix.from_entries(n, ent)
    return m if sign == 1 else m.transpose()


@lru_cache(maxsize=None)
def split_form(p: int) -> ComplexMatrix:
    _check_p(p)
    n = 2 * p + 1
    ent = {(i, p + i): 1 for i in range(p)}
    ent.update({(p + i, i): 1 for i in range(p)})
    ent[(n - 1, n - 1)] = 1
    return ComplexMatrix.from_entries(n, ent)


def check_membership(p: int, X: ComplexMatrix) -> bool:
    """True iff X^T Q + Q X = 0 for the split form Q."""
    _check_p(p)
    if X.n != 2 * p + 1:
        raise InvalidParameter(f"expected a {2 * p + 1}x{2 * p + 1} matrix, got n={X.n}")
    q = split_form(p)
    return (X.transpose() @ q + q @ X).is_zero()


def cartan_basis(p: int) -> list[ComplexMatrix]:
    """H_i = E_{i,i} - E_{p+i,p+i}."""
    _check_p(p)
    n = 2 * p + 1
    return [ComplexMatrix.from_entries(n, {(i, i): 1, (p + i, p + i): -1}) for i in range(p)]


def so_basis(p: int) -> list[tuple[str, ComplexMatrix]]:
    """Labelled basis of so(2p+1, C): Cartan part then ± root vectors."""
    basis = [(f"H{i + 1}", h) for i, h in enumerate(cartan_basis(p))]
    for r in positive_roots(p):
        basis.append((f"+{r}", root_vector(p, r, 1)))
        basis.append((f"-{r}", root_vector(p, r, -1)))
    return basis


def _semisimple(p: int) -> ComplexMatrix:
    n = 2 * p + 1
    ent = {}
    for i in range(1, p + 1):
        ent[(i - 1, i - 1)] = 2 * (p + 1 - i)
        ent[(p + i - 1, p + i - 1)] = -2 * (p + 1 - i)
    return ComplexMatrix.from_entries(n, ent)


def _solve_lowering(p: int, x: ComplexMatrix, e: ComplexMatrix) -> ComplexMatrix:
    # etilde lies in the -2 eigenspace of ad x, spanned by the E_{ij}
    # with x_i - x_j = -2; solve [e, etilde] = x there.
    n = 2 * p + 1
    diag = [d.re for d in x.diagonal()]
    slots = [(i, j) for i in range(n) for j in range(n) if diag[i] - diag[j] == -2]
    images = [bracket(e, ComplexMatrix.from_entries(n, {ij: 1})) for ij in slots]
    rows = [[img[a, b] for img in images] for a in range(n) for b in range(n)]
    rhs = [x[a, b] for a in range(n) for b in range(n)]
    sol = solve(rows, rhs)
    if sol is None:
        raise ArithmeticError(f"no lowering element exists for p={p}")
    return ComplexMatrix.from_entries(n, dict(zip(slots, sol)))


@lru_cache(maxsize=None)
def principal_sl2(p: int) -> Sl2Triple:
    """Principal sl(2) triple; etilde is solved from its defining relations."""
    _check_p(p)
    x = _semisimple(p)
    e = ComplexMatrix.zeros(2 * p + 1)
    for r in simple_roots(p):
        e = e + root_vector(p, r, 1)
    return Sl2Triple(x, e, _solve_lowering(p, x, e))


def lowering_display_entries(p: int) -> dict[tuple[int, int], int]:
    """Nonzero entries of the block-form lowering element, 1-based.

    Partial sums c_m = 2p + 2(p-1) + ... (m terms) fill the subdiagonal of the
    upper-left block, their negatives the superdiagonal of the middle block,
    and the corner entries carry the full sum p(p+1) with opposite signs.
    """
    _check_p(p)
    out = {}
    c = 0
    for m in range(1, p):
        c += 2 * (p + 1 - m)
        out[(m + 1, m)] = c
        out[(p + m, p + m + 1)] = -c
    full = p * (p + 1)
    out[(2 * p + 1, p)] = full
    out[(2 * p, 2 * p + 1)] = -full
    return out


def lowering_display_mismatches(p: int) -> list[dict]:
    """Entries where the solved etilde differs from the block display."""
    etilde = principal_sl2(p).etilde
    expected = lowering_display_entries(p)
    keys = set(expected) | {(i + 1, j + 1) for i, j, _ in etilde.nonzero()}
    out = []
    for (i, j) in sorted(keys):
        got = etilde[i - 1, j - 1]
        want = expected.get((i, j), 0)
        if got != want:
            out.append({"entry": [i, j], "solved": got, "display": want})
    return out


def adx_eigenvalues(p: int) -> list[tuple[str, int]]:
    """Eigenvalue of ad x on each basis vector, found by direct bracketing."""
    x = principal_sl2(p).x
    out = []
    for label, b in so_basis(p):
        img = bracket(x, b)
        i, j, v = next(b.nonzero())
        lam = img[i, j] / v
        if img != b.scale(lam):
            raise ArithmeticError(f"basis vector {label} is not an ad x eigenvector")
        if lam.im or lam.re.denominator != 1:
            raise ArithmeticError(f"non-integral eigenvalue {lam!r} on {label}")
        out.append((label, int(lam.re)))
    return out


def adx_decomposition(p: int) -> list[tuple[int, list[int]]]:
    """Split the ad x spectrum into sl(2) strings, smallest first.

    Repeatedly removes the top weight m together with m-2, ..., -m; each
    removed string is returned as ``(m + 1, [m, m-2, ..., -m])``.
    """
    pool = Counter(lam for _, lam in adx_eigenvalues(p))
    strings = []
    while pool:
        top = max(pool)
        weights = list(range(top, -top - 1, -2))
        for w in weights:
            if pool[w] <= 0:
                raise ArithmeticError(f"weight {w} missing from the string with top {top}")
            pool[w] -= 1
            if pool[w] == 0:
                del pool[w]
        strings.append((top + 1, weights))
    return sorted(strings)


def regular_nilpotent_order(p: int) -> int:
    """Smallest k with e^k = 0."""
    e = principal_sl2(p).e
    power = e
    k = 1
    while not power.is_zero():
        power = power @ e
        k += 1
    return k


def as_fraction(v: GaussQ) -> Fraction:
    if v.im:
        raise InvalidParameter("value is not real")
    return v.re
