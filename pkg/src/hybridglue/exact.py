"""Exact Gaussian-rational scalars and square matrices.

Everything here is pure Python on top of :class:`fractions.Fraction`.  The
Lie-algebra data used by the package is integral and very sparse, so the
matrix product skips zero entries instead of doing a dense triple loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class GaussQ:
    """A Gaussian rational ``re + i*im`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x, 0)

    def __add__(self, other):
        o = GaussQ.coerce(other)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussQ.coerce(other)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussQ.coerce(other) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussQ.coerce(other)
        if not o.im and not self.im:
            return GaussQ(self.re * o.re, 0)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussQ.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussQ(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussQ.coerce(other) / self

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return self.re._numerator != 0 or self.im._numerator != 0

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        try:
            o = GaussQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussQ({self.re})"
        return f"GaussQ({self.re}, {self.im})"

    def to_json(self) -> list[int]:
        return [self.re.numerator, self.re.denominator, self.im.numerator, self.im.denominator]

    @classmethod
    def from_json(cls, quad: Sequence[int]) -> "GaussQ":
        rn, rd, im_n, im_d = quad
        return cls(Fraction(rn, rd), Fraction(im_n, im_d))


ZERO = GaussQ(0)
ONE = GaussQ(1)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Square matrix over the Gaussian rationals (immutable)."""

    n: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise InvalidParameter("matrix must be square of declared size")

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "ComplexMatrix":
        data = tuple(tuple(GaussQ.coerce(v) for v in row) for row in rows)
        return cls(len(data), data)

    @classmethod
    def zeros(cls, n: int) -> "ComplexMatrix":
        return cls(n, tuple((ZERO,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls.from_entries(n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_entries(cls, n: int, entries: dict) -> "ComplexMatrix":
        """Build from a ``{(row, col): value}`` map with 0-based indices."""
        rows = [[ZERO] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidParameter(f"index ({i},{j}) out of range for n={n}")
            rows[i][j] = rows[i][j] + GaussQ.coerce(v)
        return cls(n, tuple(tuple(r) for r in rows))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "ComplexMatrix":
        """Elementary matrix E_{i,j} with 1-based indices, as in the literature."""
        return cls.from_entries(n, {(i - 1, j - 1): 1})

    # -- access -------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def nonzero(self):
        """Yield ``(i, j, value)`` for nonzero entries, 0-based."""
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v:
                    yield i, j, v

    def is_zero(self) -> bool:
        return not any(v for row in self.rows for v in row)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "ComplexMatrix"):
        if not isinstance(other, ComplexMatrix):
            raise TypeError("expected a ComplexMatrix")
        if other.n != self.n:
            raise InvalidParameter(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return ComplexMatrix(self.n, tuple(
            tuple(a + b if b else a for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return ComplexMatrix(self.n, tuple(
            tuple(a - b if b else a for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return ComplexMatrix(self.n, tuple(tuple(-a if a else a for a in r) for r in self.rows))

    def scale(self, c) -> "ComplexMatrix":
        c = GaussQ.coerce(c)
        return ComplexMatrix(self.n, tuple(tuple(c * a if a else ZERO for a in r) for r in self.rows))

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        self._check(other)
        n = self.n
        b_rows = [[(j, v) for j, v in enumerate(r) if v] for r in other.rows]
        out = []
        for row in self.rows:
            acc = {}
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in b_rows[k]:
                    acc[j] = acc.get(j, ZERO) + a * b
            out.append(tuple(acc.get(j, ZERO) for j in range(n)))
        return ComplexMatrix(n, tuple(out))

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidParameter("negative matrix powers are not supported")
        result = ComplexMatrix.identity(self.n)
        for _ in range(k):
            result = result @ self
        return result

    def transpose(self) -> "ComplexMatrix":
        return ComplexMatrix(self.n, tuple(zip(*self.rows)))

    def conjugate(self) -> "ComplexMatrix":
        return ComplexMatrix(self.n, tuple(tuple(a.conjugate() for a in r) for r in self.rows))

    def adjoint(self) -> "ComplexMatrix":
        return self.conjugate().transpose()

    def frobenius2(self) -> Fraction:
        """Exact squared Frobenius norm."""
        return sum((v.abs2() for _, _, v in self.nonzero()), Fraction(0))

    def diagonal(self) -> list:
        return [self.rows[i][i] for i in range(self.n)]

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        nz = ", ".join(f"({i+1},{j+1}):{v!r}" for i, j, v in self.nonzero())
        return f"ComplexMatrix(n={self.n}, {{{nz}}})"

    # -- views --------------------------------------------------------------
    def to_numpy(self) -> np.ndarray:
        """Float view (complex128); used by the numeric modules only."""
        out = np.zeros((self.n, self.n), dtype=complex)
        for i, j, v in self.nonzero():
            out[i, j] = complex(v)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [v.to_json() for row in self.rows for v in row]}

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexMatrix":
        n = int(obj["n"])
        flat = [GaussQ.from_json(q) for q in obj["entries"]]
        if len(flat) != n * n:
            raise InvalidParameter("entry count does not match n*n")
        return cls(n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def bracket(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Commutator ``AB - BA``."""
    a._check(b)
    return a @ b - b @ a


# -- exact linear algebra ----------------------------------------------------

def row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field.

    Returns the reduced rows (copied) and the pivot columns.  Entries must
    support ``+ - * /`` and truthiness for zero testing.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], GaussQ) else ONE / m[r][c]
        m[r] = [v * inv if v else v for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: list[list]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: list[list], zero=ZERO, one=ONE) -> list[list]:
    """Basis of ``{v : M v = 0}`` for the matrix given row-wise."""
    if not rows:
        return []
    n_cols = len(rows[0])
    red, pivots = row_reduce(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [zero] * n_cols
        v[fcol] = one
        for r, pcol in enumerate(pivots):
            v[pcol] = -red[r][fcol]
        basis.append(v)
    return basis


def solve(rows: list[list], rhs: list) -> list | None:
    """One solution of ``M v = rhs`` (free variables set to zero) or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug)
    n_cols = len(rows[0])
    if n_cols in pivots:
        return None
    sol = [ZERO] * n_cols
    for r, pcol in enumerate(pivots):
        sol[pcol] = red[r][-1]
    return sol
