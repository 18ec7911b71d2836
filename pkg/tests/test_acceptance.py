"""End-to-end acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints, then
asserts.  Pass rates below 100% are allowed only where the criterion is
statistical; every individual failure is listed in the recorded detail.
"""

import time

import pytest

import oracles
from helpers import algebra, betti_K, betti_R, oracle_betti_R, record, seed_seconds
from gorenstein_rate.corpus import (
    catalecticant_symmetry_ok,
    euler_characteristic_ok,
    gorenstein_duality_ok,
    hilbert_invariance_ok,
    lemma1_cases,
    lemma1_check,
)
from gorenstein_rate.groebner import ci_lgt_certificate
from gorenstein_rate.inverse_system import (
    ArtinAlgebra,
    GradedIdeal,
    is_compressed,
    monomial_algebra,
    socle_quotient_ideal,
)
from gorenstein_rate.monomial import lemma1_even, lemma1_odd
from gorenstein_rate.poincare import (
    betti_recursion,
    betti_series,
    compressed_shape,
    golod_inequality_check,
    poincare_formula_PS,
    rate_bound_check,
    rate_report,
    rate_truncated,
    theorem_main_verdict,
)
from gorenstein_rate.resolution import (
    betti_K_over_A,
    betti_over_R,
    check_minimality,
    check_exactness,
    cone_comparison,
    resolve_K,
    resolve_over_R,
    socle_quotient_betti,
    t_vector,
)
from gorenstein_rate.rings import parse_form

pytestmark = pytest.mark.acceptance

SEEDS_20 = range(1, 21)
SEEDS_100 = range(1, 101)
# seeds that passed criteria 2 and 3; filled in by those tests, read by criterion 4
PASSING = {}


def _ideal_algebra(texts, n):
    forms = [parse_form(t, 32003, n, side="x") for t in texts]
    return ArtinAlgebra(GradedIdeal.from_generators(n, 32003, forms))


def _failures(rows):
    return [seed for seed, ok in rows if not ok]


def test_criterion_01_koszul_socle_degree_three():
    rows, slow = [], []
    for seed in SEEDS_20:
        tv = t_vector(betti_K(4, 3, seed, 5), 5)
        elapsed = seed_seconds(4, 3, seed)
        rows.append((seed, all(tv[i] == i for i in range(2, 6))))
        if elapsed >= 60:
            slow.append(seed)
    rate = sum(ok for _, ok in rows) / len(rows)
    ok = rate >= 0.95 and not slow
    record(1, "Koszul at s=3, (4,3), t_i = i for 2 <= i <= 5", ok,
           f"pass rate {rate:.2f}, failures {_failures(rows)}, slow seeds {slow}")
    assert ok


def test_criterion_01_matches_koszul_duality_totals():
    # Koszul algebras satisfy P^A_K(t) = 1 / HS_A(-t); an independent check of the totals
    A = algebra(4, 3, 1)
    table = betti_K(4, 3, 1, 5)
    want = oracles.koszul_dual_totals(list(A.hf_vector), 5)
    assert [table.total(i) for i in range(6)] == want == [1, 4, 12, 33, 88, 232]


def test_criterion_02_even_socle_degree():
    rows, slow = [], []
    for seed in SEEDS_20:
        t0 = time.perf_counter()
        A = algebra(4, 4, seed)
        row1 = betti_R(4, 4, seed).row(1)
        tv = t_vector(betti_K(4, 4, seed, 4), 4)
        r = rate_truncated(tv, 4)
        ok = (
            row1 == {3: 16}
            and r.value == 2
            and r.witness == 2
            and rate_bound_check(tv, A.ideal.max_gen_degree())
        )
        rows.append((seed, ok))
        if time.perf_counter() - t0 >= 120:
            slow.append(seed)
    PASSING[(4, 4)] = [s for s, ok in rows if ok]
    ok = all(ok for _, ok in rows) and not slow
    record(2, "even socle degree, (4,4): beta_1 = 16 in degree 3, rate 2 at i = 2, bound", ok,
           f"failures {_failures(rows)}, slow seeds {slow}")
    assert ok


@pytest.mark.slow
def test_criterion_03_odd_socle_degree():
    rows, slow = [], []
    for seed in SEEDS_100:
        t0 = time.perf_counter()
        A = algebra(4, 5, seed)
        betti_K(4, 5, seed, 4)
        v = theorem_main_verdict(A, 4)
        degs = A.ideal.generator_degrees()
        ok = (
            v.passed
            and v.m_I == 3
            and degs == {3: 10}
            and 10 == 20 - A.hf(3)
            and v.rate == 2
            and v.bound_ok
        )
        rows.append((seed, ok))
        if time.perf_counter() - t0 >= 300:
            slow.append(seed)
    PASSING[(4, 5)] = [s for s, ok in rows if ok]
    rate = sum(ok for _, ok in rows) / len(rows)
    ok = rate >= 0.95 and not slow
    record(3, "odd socle degree, (4,5): m(I) = 3 with 10 cubic generators, rate 2, bound", ok,
           f"pass rate {rate:.2f} over {len(rows)} seeds, failures {_failures(rows)}")
    assert ok


@pytest.mark.slow
def test_criterion_04_poincare_series_three_ways():
    if set(PASSING) != {(4, 4), (4, 5)}:
        # criterion tests were deselected; compute the passing seeds here
        PASSING.setdefault((4, 4), list(SEEDS_20))
        PASSING.setdefault((4, 5), list(SEEDS_100))
    bad, count = [], 0
    for (n, s), seeds in sorted(PASSING.items()):
        for seed in seeds:
            bR = betti_R(n, s, seed)
            a, b = compressed_shape(bR, n, s)
            formula = poincare_formula_PS(bR, n, s, 4)
            recursion = betti_recursion(a, b, n, s, 4)
            engine = betti_series(betti_K(n, s, seed, 4), 4)
            count += 1
            if not (formula.coeffs == recursion.coeffs == engine.coeffs):
                bad.append((n, s, seed))
    ok = not bad and count > 0
    record(4, "closed formula, recursion and engine agree for i <= 4", ok,
           f"{count} seeds compared, disagreements {bad}")
    assert ok


def test_criterion_05_socle_quotient_identities():
    bad = []
    instances = [(4, 4, 1), (4, 4, 2), (4, 5, 1), (4, 5, 2)]
    for n, s, seed in instances:
        r = socle_quotient_betti(algebra(n, s, seed))
        if not r["ok"]:
            bad.append(((n, s, seed), r["mismatches"]))
    ok = not bad
    record(5, "Betti numbers of A/soc(A) from those of A, (4,4) and (4,5)", ok,
           f"{len(instances)} instances, mismatches {bad}")
    assert ok


def test_criterion_05_socle_quotient_against_koszul_oracle():
    # T's table from the engine agrees with Koszul homology computed independently
    A = algebra(4, 4, 1)
    T = ArtinAlgebra(socle_quotient_ideal(A))
    assert betti_over_R(T).entries == oracle_betti_R(T, 4 + 4 + 1)


def test_criterion_06_level_monomial_ideals():
    t0 = time.perf_counter()
    bad, count = [], 0
    for case in lemma1_cases((3, 4, 5), (1, 2)):
        ok, detail = lemma1_check(*case)
        count += 1
        if not ok:
            bad.append(case)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10
    record(6, "level monomial ideals, all m in {3,4,5}, u in {1,2}, all splits", ok,
           f"{count} cases in {elapsed:.2f}s, failures {bad}")
    assert ok


def test_criterion_06_generators_match_parity_description():
    for parity, m, u, splits in lemma1_cases((3, 4, 5), (1, 2)):
        if parity == "even":
            J, want = lemma1_even(m, u, *splits), oracles.lemma1_even_generators(m, u, *splits)
        else:
            J, want = lemma1_odd(m, u, *splits), oracles.lemma1_odd_generators(m, u, *splits)
        assert set(J.gens) == want
        soc = oracles.brute_socle(J.gens, m, 2 * u + 2)
        assert soc and {sum(w) for w in soc} == {sum(next(iter(want)))}


def test_criterion_07_three_variables_parity():
    summary = {}
    for s, want_m, want_degs in ((5, 4, {3, 4}), (7, 4, None)):
        rows = []
        for seed in SEEDS_20:
            A = algebra(3, s, seed)
            v = theorem_main_verdict(A, 4)
            degs = A.ideal.generator_degrees()
            ok = (
                v.passed
                and v.m_I == want_m
                and sum(degs.values()) % 2 == 1
                and (want_degs is None or set(degs) == want_degs)
            )
            rows.append((seed, ok))
        summary[s] = (sum(ok for _, ok in rows) / len(rows), _failures(rows))
    ok = all(rate >= 0.95 for rate, _ in summary.values())
    record(7, "three variables: (3,5) m = 4 in degrees 3, 4; (3,7) m = 4; odd counts", ok,
           "; ".join(f"s={s} pass rate {r:.2f} failures {f}" for s, (r, f) in summary.items()))
    assert ok


def test_criterion_08_complete_intersections():
    cubic = [parse_form(t, 32003, 2, side="x") for t in ("x1^3", "x2^3")]
    cert = ci_lgt_certificate(cubic)
    leads_ok = cert["leading_terms"] == ["y1^3", "y2^3"]
    rep3 = rate_report(_ideal_algebra(["x1^3", "x2^3"], 2), 4)
    rep2 = rate_report(_ideal_algebra(["x1^2", "x2^2"], 2), 4)
    ok = cert["pass"] and leads_ok and rep3.rate_truncated == 2 and rep2.rate_truncated == 1
    record(8, "complete intersections: cubics certified with rate 2, quadrics rate 1", ok,
           f"certificate {cert['pass']}, leads {cert['leading_terms']}, "
           f"rates {rep3.rate_truncated}, {rep2.rate_truncated}")
    assert ok


def test_criterion_08_complete_intersection_tables_match_tate():
    for degs, texts in (([3, 3], ["x1^3", "x2^3"]), ([2, 2], ["x1^2", "x2^2"])):
        table = betti_K_over_A(_ideal_algebra(texts, 2), 4, None)
        assert table.entries == oracles.complete_intersection_poincare(2, degs, 4)


def _golod_instances():
    for n, s in ((4, 3), (4, 4), (4, 5)):
        for seed in (1, 2, 3):
            yield f"A({n},{s},{seed})", algebra(n, s, seed), False
    for n, s in ((4, 4), (4, 5)):
        for seed in (1, 2):
            yield f"T({n},{s},{seed})", ArtinAlgebra(socle_quotient_ideal(algebra(n, s, seed))), True
    for s in (5, 7):
        yield f"A(3,{s},1)", algebra(3, s, 1), False
    yield "x^2", _ideal_algebra(["x1^2"], 1), False
    yield "quadric CI", _ideal_algebra(["x1^2", "x2^2"], 2), False
    yield "cubic CI", _ideal_algebra(["x1^3", "x2^3"], 2), False
    yield "level m=3 u=1", monomial_algebra(lemma1_odd(3, 1, 1, 2)), False
    yield "level m=4 u=1", monomial_algebra(lemma1_even(4, 1, 2)), False


def test_criterion_09_golod_bound():
    negative, not_equal, count = [], [], 0
    for label, A, must_be_equal in _golod_instances():
        bR = betti_over_R(A)
        rep = golod_inequality_check(betti_K_over_A(A, 4), A.n, bR, 4)
        count += 1
        if not rep.nonnegative:
            negative.append(label)
        if must_be_equal and not rep.equality:
            not_equal.append(label)
    ok = not negative and not not_equal
    record(9, "Golod bound: no negative slack up to i = 4, equality for A/soc(A)", ok,
           f"{count} instances, negative slack {negative}, equality missing {not_equal}")
    assert ok


def test_criterion_10_adjoining_a_variable():
    cases = {"x^2": _ideal_algebra(["x1^2"], 1), "quadric CI": _ideal_algebra(["x1^2", "x2^2"], 2)}
    bad = []
    for label, A in cases.items():
        ok, detail = cone_comparison(A, 3)
        if not ok:
            bad.append((label, detail["mismatches"]))
    ok = not bad
    record(10, "adjoining a variable multiplies P_K by (1+uv), i <= 3", ok, f"mismatches {bad}")
    assert ok


def _structure_instances():
    for n, s in ((4, 3), (4, 4), (4, 5), (3, 5), (3, 7)):
        yield f"A({n},{s},1)", algebra(n, s, 1)
    yield f"A(4,5,2)", algebra(4, 5, 2)
    yield "T(4,4,1)", ArtinAlgebra(socle_quotient_ideal(algebra(4, 4, 1)))
    yield "x^2", _ideal_algebra(["x1^2"], 1)
    yield "quadric CI", _ideal_algebra(["x1^2", "x2^2"], 2)
    yield "cubic CI", _ideal_algebra(["x1^3", "x2^3"], 2)
    yield "level m=4 u=2", monomial_algebra(lemma1_odd(4, 2, 1, 3))


@pytest.mark.structural
def test_criterion_11_structural_suites():
    failures, count = [], 0
    for label, A in _structure_instances():
        resR = resolve_over_R(A)
        resK = resolve_K(A, 3)
        checks = {
            "minimality": check_minimality(resR) and check_minimality(resK),
            "exactness": check_exactness(resR) and check_exactness(resK),
            "euler": euler_characteristic_ok(A, resR.betti),
            "hilbert_invariance": hilbert_invariance_ok(A),
        }
        if getattr(A, "form", None) is not None:
            checks["duality"] = gorenstein_duality_ok(A, resR.betti)
            checks["catalecticant"] = catalecticant_symmetry_ok(A.form)
        count += 1
        failures.extend((label, k) for k, v in checks.items() if not v)
    ok = not failures
    record(11, "structural suites: minimality, Euler characteristic, duality, "
               "initial-ideal Hilbert functions, catalecticant ranks", ok,
           f"{count} algebras, failures {failures}")
    assert ok


@pytest.mark.structural
def test_compressed_for_most_seeds():
    # compressed Hilbert function for the vast majority of seeds
    for n, s in ((4, 3), (4, 4), (4, 5), (5, 3)):
        good = sum(is_compressed(algebra(n, s, seed)) for seed in SEEDS_100)
        assert good >= 95, (n, s, good)
