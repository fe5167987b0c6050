"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line to the terminal,
so ``pytest -v`` output doubles as the acceptance report.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from hybridglue import dehn, gluing, hitchin_numeric as hn, liealg, models
from hybridglue.exact import ComplexMatrix, GaussQ
from hybridglue.parabolic import MarkedSurface, ParabolicLine


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, status=None):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {status or ('PASS' if ok else 'FAIL')}: {detail}")
        return ok
    return emit


def test_criterion_1_lie_identities(report):
    liealg.principal_sl2.cache_clear()
    start = time.perf_counter()
    failures = []
    for p in range(1, 13):
        triple = liealg.principal_sl2(p)
        dims = [d for d, _ in liealg.adx_decomposition(p)]
        if not triple.holds():
            failures.append((p, "bracket"))
        if dims != [4 * i - 1 for i in range(1, p + 1)] or sum(dims) != 2 * p * p + p:
            failures.append((p, "adx"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 5
    assert report(1, ok, f"p=1..12 exact brackets and ad x dims, {elapsed:.2f}s, failures={failures}")


def test_criterion_2_model_stability(report):
    checked, bad = 0, []
    for p in range(1, 7):
        for g in range(0, 5):
            for s in range(1, 7):
                if 2 * g - 2 + s <= 0:
                    continue
                ms = [models.hitchin_model(p, g, s)] + [models.psi_model(p, g, s, k) for k in range(1, p + 1)]
                for m in ms:
                    rep = models.stability_report(m)
                    checked += 1
                    if rep.total_pardeg != 0 or not all(v < 0 for _, v in rep.subbundles):
                        bad.append((m.family, m.params))
    assert report(2, not bad, f"{checked} models, total pardeg 0 and listed subbundles negative, bad={bad[:3]}")


def _brute_degrees(p, g):
    out = {}
    for s in range(1, g + 2):
        for g1 in range(0, g + 1):
            g2 = g + 1 - s - g1
            for k in range(1, p + 1):
                if g2 >= 0 and 2 * g1 - 2 + s > 0 and 2 * g2 - 2 + s > 0:
                    out.setdefault(2 * p * (g1 - 1) + (2 * k - 1) * s, (g1, g2, s, k))
    return out


def test_criterion_3_exhaustion(report):
    start = time.perf_counter()
    rep = gluing.exhaust(3, 4)
    full = rep.achieved == tuple(range(1, 18)) and rep.missing == ()
    oracle = {d for d in _brute_degrees(3, 4) if 0 < d < 18}
    witnesses_stable = all(
        models.stability_report(models.hitchin_model(w.p, w.g1, w.s)).stable
        and models.stability_report(models.psi_model(w.p, w.g2, w.s, w.k)).stable
        for w in rep.witnesses.values())
    gap = gluing.exhaust(2, 3)
    # independent parity argument: 2p(g1-1) is even, so d has the parity of s;
    # odd s can only give odd degrees, and the brute force finds no even s either
    odd_s_degrees = {2 * 2 * (g1 - 1) + (2 * k - 1) * s
                     for s in (1, 3) for g1 in range(0, 4) for k in (1, 2)}
    parity_ok = all(d % 2 == 1 for d in odd_s_degrees) and 4 not in _brute_degrees(2, 3)
    stated = gap.missing == (4,) and "parity d≢s (mod 2)" in gap.gap_reasons[4]
    elapsed = time.perf_counter() - start
    ok = full and oracle == set(rep.achieved) and witnesses_stable and parity_ok and stated and elapsed < 1
    assert report(3, ok, f"exhaust(3,4) achieves 1..17 with stable witnesses; exhaust(2,3) misses "
                         f"{list(gap.missing)} with parity reason; {elapsed:.3f}s")


def test_criterion_4_degree_additivity(report):
    bad = []
    for j in range(-5, 6):
        for g1 in range(0, 6):
            for g2 in range(0, 6):
                for s in range(1, 7):
                    first = ParabolicLine(MarkedSurface(g1, s), a=j, b=j)
                    second = ParabolicLine(MarkedSurface(g2, s), a=j, b=j)
                    g = gluing.connected_sum_genus(g1, g2, s)
                    if gluing.glue_degree(first, second) != 2 * j * (g - 1):
                        bad.append((j, g1, g2, s))
    assert report(4, not bad, f"glue_degree = 2j(g-1) on {11 * 36 * 6} cases, bad={bad[:3]}")


def test_criterion_5_dehn(report):
    rng = random.Random(5)
    worst = 0.0
    for _ in range(1000):
        u = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        tau = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        worst = max(worst, dehn.commutator_defect(u, dehn.v_of_u(u, tau), tau))
    round_trip = 0.0
    for n in range(4, 21):
        c = dehn.filling_coefficients(dehn.u_for_slope(n, 1, 1j), 1j)
        round_trip = max(round_trip, math.hypot(c.p - n, c.q - 1))
    infinite = dehn.filling_coefficients(0, 1j).is_infinite
    slopes = dehn.figure_eight_exceptional_slopes()
    expected = {(1, 0), (0, 1)} | {(n, 1) for n in range(-4, 5) if n}
    ok = worst < 1e-12 and round_trip < 1e-9 and infinite and len(slopes) == 10 and set(slopes) == expected
    assert report(5, ok, f"max defect {worst:.2e}, max round trip {round_trip:.2e}, "
                         f"u=0 -> infinity {infinite}, {len(slopes)} slopes")


def test_criterion_6_hitchin_numerics(report):
    start = time.perf_counter()
    grid = hn.PolarGrid.aligned(128, 64)
    model = max(hn.residual(*hn.model_solution(p, 1.0, grid, fam)).sup_norm
                for p in (1, 2, 3, 4) for fam in (1, 2))

    base = hn.model_solution(2, 1.0, grid)
    x = np.diag(hn.model_diagonal(2))
    gamma = hn.PolarField.constant(grid, x / np.linalg.norm(x))
    outside = 0.0
    for R in (0.4, 0.2, 0.1):
        chi = hn.cutoff(R)
        norms = hn.residual(*hn.approximate_glue(base, gamma, chi)).field.pointwise_norm()
        outside = max(outside, float(norms[~hn.annulus_mask(chi, grid)].max()))

    ks = [hn.growth_constant(hn.cutoff(R), grid) for R in (0.8, 0.4, 0.2, 0.1)]
    spread = max(ks) / min(ks) - 1

    # quadratic form: zero exactly on a commuting constant, positive on a root vector
    A, Phi = base
    grad, brk = hn.quadratic_form_terms(A, Phi, gamma)
    zero_kernel = grad == 0 and brk == 0
    root = liealg.positive_roots(2)[0]
    X = liealg.root_vector(2, root, 1).to_numpy()
    positive = hn.quadratic_form(A, Phi, hn.PolarField.constant(grid, X)) > 0

    commutant = all(hn.commutant_in_h(p, hn.scaled_semisimple(p, c)) == 0
                    for p in range(1, 5) for c in (1, Fraction(-3, 2)))

    rng = random.Random(6)
    triple = liealg.principal_sl2(1)
    unitary_hits = 0
    for _ in range(20):
        z = GaussQ(Fraction(rng.randint(-99, 99), rng.randint(1, 9)),
                   Fraction(rng.randint(-99, 99), rng.randint(1, 9)))
        unitary_hits += hn.is_unitary(triple.etilde + triple.e.scale(z), Fraction(1, 10 ** 9))
    elapsed = time.perf_counter() - start
    ok = (model < 1e-12 and outside < 1e-10 and spread < 0.05 and zero_kernel and positive
          and commutant and unitary_hits == 0 and elapsed < 30)
    assert report(6, ok, f"model {model:.1e}, outside annulus {outside:.1e}, k spread {spread:.1e}, "
                         f"kernel {zero_kernel and positive}, commutant {commutant}, "
                         f"unitary hits {unitary_hits}, {elapsed:.2f}s")


def test_criterion_7_scope_note(report):
    report(7, True, status="NOTE", detail="existence of exact corrected solutions and discreteness/faithfulness of the "
                    "glued representations are out of scope at desk scale (not run)")
