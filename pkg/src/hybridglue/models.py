"""Model parabolic Higgs bundles and their stability bookkeeping.

Higgs fields are symbolic: a pattern is a tuple of rows whose entries are
strings such as ``"0"``, ``"1"``, ``"q4"``, ``"mu"``.  Entry (i, j) being
nonzero means the field maps summand j into summand i (twisted by K(D)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InvalidParameter
from .parabolic import (
    MarkedSurface,
    ParabolicBundle,
    ParabolicLine,
    direct_sum,
    dual,
    sym_power,
)

__all__ = [
    "BAG",
    "HITCHIN_E1",
    "PSI_E2",
    "PSI_GENERAL",
    "HiggsModel",
    "StabilityReport",
    "bag_model",
    "hitchin_model",
    "psi_model",
    "psi_map",
    "invariant_subbundles",
    "stability_report",
    "coordinate_invariant_sets",
    "listed_sets_are_invariant",
    "nonnegative_invariant_subbundles",
    "residue_nilpotency_order",
]

BAG = "BAG"
HITCHIN_E1 = "HitchinE1"
PSI_E2 = "PsiE2"
PSI_GENERAL = "PsiGeneral"
FAMILIES = (BAG, HITCHIN_E1, PSI_E2, PSI_GENERAL)

Pattern = tuple[tuple[str, ...], ...]


def _zero_pattern(rows: int, cols: int) -> list[list[str]]:
    return [["0"] * cols for _ in range(rows)]


def _freeze(pat: list[list[str]]) -> Pattern:
    return tuple(tuple(r) for r in pat)


def _shift_pattern(n: int, start: int = 0) -> list[list[str]]:
    """Superdiagonal 1s on the block [start, n)."""
    pat = _zero_pattern(n, n)
    for i in range(start, n - 1):
        pat[i][i + 1] = "1"
    return pat


def _check_int(name: str, value, lo: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}")
    if lo is not None and value < lo:
        raise InvalidParameter(f"{name} must be >= {lo}, got {value}")
    return value


@dataclass(frozen=True)
class HiggsModel:
    bundle: ParabolicBundle
    higgs_pattern: Pattern
    family: str
    params: dict = field(default_factory=dict, compare=False)
    constraints: tuple[str, ...] = ()
    # (V, W, eta) for the orthogonal description produced by psi_map
    blocks: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown family {self.family!r}")
        n = self.bundle.rank
        if len(self.higgs_pattern) != n or any(len(r) != n for r in self.higgs_pattern):
            raise InvalidParameter(f"Higgs pattern must be {n}x{n} to match the bundle rank")

    @property
    def rank(self) -> int:
        return self.bundle.rank


@dataclass(frozen=True)
class StabilityReport:
    family: str
    params: dict
    subbundles: tuple[tuple[str, Fraction], ...]
    total_pardeg: Fraction
    verdict: str
    scope: str = "stability relative to the enumerated family"

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "subbundles": [
                {"desc": d, "pardeg": [v.numerator, v.denominator]} for d, v in self.subbundles
            ],
            "total_pardeg": [self.total_pardeg.numerator, self.total_pardeg.denominator],
            "verdict": self.verdict,
            "scope": self.scope,
        }


# -- constructors -------------------------------------------------------------

def _half_canonical(base: MarkedSurface) -> ParabolicLine:
    """L with L^2 = K, weight 1/2 at every marked point."""
    return ParabolicLine(base, a=Fraction(1, 2), weight=Fraction(1, 2))


def _bag_bundle(base: MarkedSurface) -> ParabolicBundle:
    line = _half_canonical(base)
    # parabolic dual of L is (L ⊗ O(D))^* with weight 1/2
    return direct_sum(dual(line), line)


def bag_model(g: int, s: int) -> HiggsModel:
    """Rank-2 uniformizing model (L ⊗ O(D))^* ⊕ L with nilpotent field."""
    base = MarkedSurface(_check_int("g", g, 0), _check_int("s", s, 0))
    base.require_stable()
    pat = [["0", "1"], ["0", "0"]]
    return HiggsModel(_bag_bundle(base), _freeze(pat), BAG, {"g": g, "s": s})


def hitchin_model(p: int, g1: int, s: int) -> HiggsModel:
    """S^{2p} of the rank-2 model, with the regular nilpotent shift as field."""
    _check_int("p", p, 1)
    base = MarkedSurface(_check_int("g1", g1, 0), _check_int("s", s, 0))
    base.require_stable()
    bundle = sym_power(_bag_bundle(base), 2 * p)
    return HiggsModel(bundle, _freeze(_shift_pattern(2 * p + 1)), HITCHIN_E1,
                      {"p": p, "g1": g1, "s": s})


def _k_string(base: MarkedSurface, exponents: Sequence[int], twisted: bool = True) -> list[ParabolicLine]:
    return [ParabolicLine(base, a=j, b=j if twisted else 0) for j in exponents]


def psi_model(p: int, g2: int, s: int, k: int) -> HiggsModel:
    """M ⊕ M^∨ ⊕ K^{1-p}(1-p)D ⊕ ... ⊕ K^{p-1}(p-1)D with M = O((2k-1-p)D)."""
    _check_int("p", p, 1)
    _check_int("k", k)
    if not 1 <= k <= p:
        raise InvalidParameter(f"k must lie in 1..{p}, got {k}")
    base = MarkedSurface(_check_int("g2", g2, 0), _check_int("s", s, 0))
    base.require_stable()
    m_line = ParabolicLine(base, b=2 * k - 1 - p)
    lines = [m_line, dual(m_line)] + _k_string(base, range(1 - p, p))
    n = 2 * p + 1
    return HiggsModel(ParabolicBundle(tuple(lines)), _freeze(_shift_pattern(n, start=2)), PSI_E2,
                      {"p": p, "g2": g2, "s": s, "k": k})


def _eta_general(p: int, hat_eta_zero: bool, q: Sequence[bool]) -> list[list[str]]:
    # rows: V summands; cols: the two hat-W lines then the W string
    eta = _zero_pattern(p, p + 1)
    if not hat_eta_zero:
        eta[0][0] = eta[0][1] = "eta_hat"
    for j in range(1, p):
        for i in range(p):
            if i == 0:
                m = j
            elif j == i:
                eta[i][j + 1] = "1"
                continue
            elif j > i:
                m = j - i
            else:
                continue
            if q[m - 1]:
                eta[i][j + 1] = f"q{2 * m}"
    return eta


def _eta_exceptional(p: int, q: Sequence[bool]) -> list[list[str]]:
    # rows: W = M, string, M^{-1}; cols: V summands
    eta = _zero_pattern(p + 1, p)
    eta[0][p - 1] = "nu"
    eta[p][p - 1] = "mu"
    for i in range(1, p):
        for j in range(i - 1, p):
            if j == i - 1:
                eta[i][j] = "1"
            elif q[j - i]:
                eta[i][j] = f"q{2 * (j - i + 1)}"
    return eta


def _orthogonal_square(eta: list[list[str]], rows_first: bool) -> list[list[str]]:
    """Embed a rectangular block and its Q-transpose into V ⊕ W.

    With antidiagonal forms on V and W the adjoint block is the transpose
    read backwards in both indices; only presence of entries matters here.
    """
    r, c = len(eta), len(eta[0])
    n = r + c
    pat = _zero_pattern(n, n)
    # V occupies the first slots, W the rest
    n_v = r if rows_first else c
    for i in range(r):
        for j in range(c):
            sym = eta[i][j]
            if sym == "0":
                continue
            if rows_first:   # eta: W -> V, rows are V
                vi, wj = i, j
            else:            # eta: V -> W, rows are W
                vi, wj = j, i
            n_w = n - n_v
            pat[vi][n_v + wj] = sym
            pat[n_v + (n_w - 1 - wj)][n_v - 1 - vi] = sym
    return pat


def psi_map(
    p: int,
    hat_w: Union[tuple[int, int], tuple[ParabolicLine, ParabolicLine]],
    hat_eta_zero: bool,
    q_flags: Sequence[bool],
    *,
    exceptional: bool = False,
    genus: int = 2,
    s: int = 0,
) -> HiggsModel:
    """Symbolic (V, W, eta) in the image of the Psi map.

    ``hat_w`` is either a pair of plain degrees (d, -d) or two explicit
    lines.  The K-strings carry O(jD) twists when ``s > 0``.  With
    ``exceptional`` the eta pattern with the extra sections mu and nu is
    produced and W is ordered M, string, M^{-1}.
    """
    _check_int("p", p, 1)
    if len(q_flags) != p - 1:
        raise InvalidParameter(f"need {p - 1} q flags (q2..q{2 * p - 2}), got {len(q_flags)}")
    base = MarkedSurface(_check_int("genus", genus, 0), _check_int("s", s, 0))
    if isinstance(hat_w[0], ParabolicLine):
        m_line, m_dual = hat_w
        if m_line.base != base or m_dual.base != base:
            raise InvalidParameter("hat-W lines must live on the requested surface")
    else:
        d1, d2 = (int(x) for x in hat_w)
        m_line = ParabolicLine(base, extra_deg=d1)
        m_dual = ParabolicLine(base, extra_deg=d2)
    twisted = s > 0
    v_lines = _k_string(base, range(p - 1, -p, -2), twisted)
    string = _k_string(base, range(p - 2, 1 - p, -2), twisted)
    constraints: tuple[str, ...] = ()
    if exceptional:
        w_lines = [m_line] + string + [m_dual]
        eta = _eta_exceptional(p, q_flags)
        square = _orthogonal_square(eta, rows_first=False)
        constraints = ("0 != mu != lambda*nu",)
    else:
        w_lines = [m_line, m_dual] + string
        eta = _eta_general(p, hat_eta_zero, q_flags)
        square = _orthogonal_square(eta, rows_first=True)
    v = ParabolicBundle(tuple(v_lines))
    w = ParabolicBundle(tuple(w_lines))
    return HiggsModel(
        direct_sum(v, w),
        _freeze(square),
        PSI_GENERAL,
        {"p": p, "genus": genus, "s": s, "exceptional": exceptional,
         "hat_eta_zero": hat_eta_zero, "q_flags": list(q_flags)},
        constraints,
        {"V": v, "W": w, "eta": _freeze(eta)},
    )


# -- invariant subbundles and stability -------------------------------------

def _listed_index_sets(m: HiggsModel) -> list[tuple[str, tuple[int, ...]]]:
    n = m.rank
    if m.family == BAG:
        return [("(L⊗O(D))^*", (0,))]
    if m.family == HITCHIN_E1:
        return [(f"truncation m={j}", tuple(range(j + 1))) for j in range(n - 1)]
    if m.family == PSI_E2:
        p = (n - 1) // 2
        return [(f"M ⊕ M^∨ ⊕ string[:{l}]", (0, 1) + tuple(range(2, 2 + l)))
                for l in range(1, 2 * p - 1)]
    raise NotImplementedError(f"no enumerated invariant family for {m.family}")


def invariant_subbundles(m: HiggsModel) -> list[ParabolicBundle]:
    """The enumerated proper Higgs-invariant subbundles for the family."""
    return [ParabolicBundle(tuple(m.bundle.summands[i] for i in idx))
            for _, idx in _listed_index_sets(m)]


def stability_report(m: HiggsModel) -> StabilityReport:
    """Stable iff total pardeg is 0 and each listed subbundle has pardeg < 0."""
    listed = _listed_index_sets(m)
    subs = invariant_subbundles(m)
    rows = tuple((f"{label}: {b.describe()}", b.pardeg) for (label, _), b in zip(listed, subs))
    total = m.bundle.pardeg
    ok = total == 0 and all(v < 0 for _, v in rows)
    return StabilityReport(m.family, dict(m.params), rows, total, "stable" if ok else "unstable")


def _reach_masks(pattern: Pattern) -> list[int]:
    n = len(pattern)
    direct = [0] * n
    for i in range(n):
        for j in range(n):
            if pattern[i][j] != "0":
                direct[j] |= 1 << i
    reach = []
    for j in range(n):
        seen = 1 << j
        frontier = direct[j]
        while frontier & ~seen:
            seen |= frontier
            nxt = 0
            for i in range(n):
                if frontier >> i & 1:
                    nxt |= direct[i]
            frontier = nxt
        reach.append(seen)
    return reach


def coordinate_invariant_sets(m: HiggsModel) -> list[tuple[int, ...]]:
    """All proper nonempty sets of summands whose span the pattern preserves.

    These are exactly the sets closed under "j in S and entry (i, j) nonzero
    implies i in S"; they are generated as unions of reachability closures.
    """
    n = m.rank
    reach = _reach_masks(m.higgs_pattern)
    full = (1 << n) - 1
    found = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            for j in range(n):
                if not mask >> j & 1:
                    grown = mask | reach[j]
                    if grown not in found:
                        found.add(grown)
                        nxt.append(grown)
        frontier = nxt
    found.discard(0)
    found.discard(full)
    return sorted(tuple(i for i in range(n) if mask >> i & 1) for mask in found)


def listed_sets_are_invariant(m: HiggsModel) -> bool:
    """Consistency check: every enumerated subbundle is pattern-invariant."""
    closed = set(coordinate_invariant_sets(m))
    return all(idx in closed for _, idx in _listed_index_sets(m))


def nonnegative_invariant_subbundles(m: HiggsModel) -> list[dict]:
    """Coordinate-invariant subbundles (listed or not) with pardeg >= 0."""
    listed = {idx for _, idx in _listed_index_sets(m)}
    out = []
    for idx in coordinate_invariant_sets(m):
        sub = ParabolicBundle(tuple(m.bundle.summands[i] for i in idx))
        if sub.pardeg >= 0:
            out.append({"summands": list(idx), "desc": sub.describe(),
                        "pardeg": sub.pardeg, "listed": idx in listed})
    return out


def residue_nilpotency_order(m: HiggsModel) -> int:
    """Smallest k with pattern^k = 0, treating every nonzero symbol as generic.

    Works on the support graph: the order is one more than the longest path,
    and infinite (reported as -1) if the support has a cycle.
    """
    n = m.rank
    succ = [[i for i in range(n) if m.higgs_pattern[i][j] != "0"] for j in range(n)]
    longest: dict[int, int] = {}
    visiting: set[int] = set()

    def walk(j: int) -> int:
        if j in longest:
            return longest[j]
        if j in visiting:
            raise ValueError("cycle")
        visiting.add(j)
        best = 0
        for i in succ[j]:
            best = max(best, 1 + walk(i))
        visiting.discard(j)
        longest[j] = best
        return best

    try:
        return 1 + max(walk(j) for j in range(n))
    except ValueError:
        return -1
