import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from helpers import algebra, betti_K, betti_R, oracle_betti_R
from gorenstein_rate.inverse_system import (
    ArtinAlgebra,
    GradedIdeal,
    monomial_algebra,
    socle_quotient_ideal,
)
from gorenstein_rate.monomial import MonomialIdeal
from gorenstein_rate.poincare import rate_bound_check
from gorenstein_rate.resolution import (
    BettiTable,
    TruncationUnsoundError,
    betti_K_over_A,
    betti_over_R,
    check_exactness,
    check_minimality,
    cone_comparison,
    format_betti,
    is_gorenstein,
    resolve_K,
    resolve_over_R,
    socle_dimension,
    socle_quotient_betti,
    t_vector,
)
from gorenstein_rate.rings import parse_form

P = 32003


def ideal_algebra(texts, n):
    forms = [parse_form(t, P, n, side="x") for t in texts]
    return ArtinAlgebra(GradedIdeal.from_generators(n, P, forms))


def power_of_max(n, d):
    return monomial_algebra(MonomialIdeal(n, oracles.monomials(n, d)))


# ---------------------------------------------------------------- over R


def test_square_of_maximal_ideal():
    assert betti_over_R(power_of_max(2, 2)).entries == {(0, 0): 1, (1, 2): 3, (2, 3): 2}


def test_quadratic_complete_intersection_over_R():
    assert betti_over_R(ideal_algebra(["x1^2", "x2^2"], 2)).entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}


def test_compressed_even_socle_over_R():
    table = betti_R(4, 4, 1)
    assert table.row(1) == {3: 16} and table.row(4) == {8: 1}
    assert table.complete


@pytest.mark.parametrize("n,s,seed", [(3, 4, 1), (4, 4, 1), (4, 5, 1), (3, 5, 2), (4, 3, 3)])
def test_betti_R_matches_koszul_homology(n, s, seed):
    A = algebra(n, s, seed)
    assert betti_R(n, s, seed).entries == oracle_betti_R(A, n + s + 1)


@pytest.mark.parametrize("texts,n", [(["x1^2", "x1*x2^2", "x2^4"], 2), (["x1^2 - x2*x3", "x2^2", "x3^3", "x1*x3^2"], 3)])
def test_betti_R_of_ideals_matches_koszul_homology(texts, n):
    A = ideal_algebra(texts, n)
    assert betti_over_R(A).entries == oracle_betti_R(A, A.s + n + 1)


def test_betti_R_needs_artinian_input():
    forms = [parse_form("x1^2", P, 2, side="x")]
    with pytest.raises(ValueError):
        betti_over_R(GradedIdeal.from_generators(2, P, forms))


# ------------------------------------------------------------------ over A


def test_residue_field_over_dual_numbers():
    table = betti_K_over_A(ideal_algebra(["x1^2"], 1), 6)
    assert table.entries == {(i, i): 1 for i in range(7)}
    assert t_vector(table) == list(range(7))


def test_quadratic_complete_intersection_is_koszul():
    A = ideal_algebra(["x1^2", "x2^2"], 2)
    assert t_vector(A, 5) == [0, 1, 2, 3, 4, 5]


def test_compressed_even_socle_over_A():
    A = algebra(4, 4, 1)
    tv = t_vector(betti_K(4, 4, 1, 4), 4)
    assert tv[1] == 1 and tv[2] == 3 and tv[3] <= 5
    assert rate_bound_check(tv, A.ideal.max_gen_degree())


@pytest.mark.parametrize("n,s", [(4, 3), (4, 4), (4, 5), (3, 5), (3, 7)])
def test_t2_is_max_generator_degree(n, s):
    A = algebra(n, s, 2)
    assert t_vector(betti_K(n, s, 2, 4), 4)[2] == A.ideal.max_gen_degree()


def test_koszul_totals_match_inverse_hilbert_series():
    A = algebra(4, 3, 2)
    table = betti_K(4, 3, 2, 5)
    assert [table.total(i) for i in range(6)] == oracles.koszul_dual_totals(list(A.hf_vector), 5)


@pytest.mark.parametrize("texts,degs", [(["x1^3", "x2^3"], [3, 3]), (["x1^2", "x2^3"], [2, 3]), (["x1^2", "x2^2", "x3^2"], [2, 2, 2])])
def test_complete_intersections_match_tate(texts, degs):
    A = ideal_algebra(texts, len(degs))
    table = betti_K_over_A(A, 4, None)
    assert table.entries == oracles.complete_intersection_poincare(len(degs), degs, 4)


def test_default_truncation_agrees_with_full_computation():
    A = algebra(4, 5, 1)
    full = betti_K_over_A(A, 3, None)
    assert full.j_max is None and not full.complete
    assert betti_K(4, 5, 1, 4).row(3) == full.row(3)


def test_truncation_too_low_is_reported():
    A = algebra(4, 4, 1)
    with pytest.raises(TruncationUnsoundError):
        betti_K_over_A(A, 3, 3)
    with pytest.raises(TruncationUnsoundError):
        betti_K_over_A(A, 4, 1)


def test_i_max_must_be_positive():
    with pytest.raises(ValueError):
        betti_K_over_A(algebra(4, 3, 1), 0)


# --------------------------------------------------------------- structure


@pytest.mark.structural
@pytest.mark.parametrize("n,s,seed", [(4, 3, 1), (4, 4, 1), (4, 5, 1), (3, 5, 1)])
def test_resolutions_are_minimal_and_exact(n, s, seed):
    A = algebra(n, s, seed)
    for res in (resolve_over_R(A), resolve_K(A, 3)):
        assert check_minimality(res)
        assert check_exactness(res)


@pytest.mark.structural
@pytest.mark.parametrize("n,s,seed", [(4, 4, 1), (4, 5, 2), (3, 5, 1), (3, 6, 1), (2, 4, 1)])
def test_gorenstein_betti_duality(n, s, seed):
    table = betti_R(n, s, seed)
    for (i, j), c in table.entries.items():
        assert table[(n - i, n + s - j)] == c


@pytest.mark.structural
@pytest.mark.parametrize("n,s,seed", [(4, 4, 1), (4, 5, 1), (3, 5, 1)])
def test_euler_characteristic(n, s, seed):
    A = algebra(n, s, seed)
    table = betti_R(n, s, seed)
    lhs = {}
    for (i, j), c in table.entries.items():
        lhs[j] = lhs.get(j, 0) + (-1) ** i * c
    rhs = {}
    for d, h in enumerate(A.hf_vector):
        for k in range(n + 1):
            rhs[d + k] = rhs.get(d + k, 0) + h * (-1) ** k * comb(n, k)
    assert {j: c for j, c in lhs.items() if c} == {j: c for j, c in rhs.items() if c}


def test_cone_comparison_examples():
    ok, detail = cone_comparison(ideal_algebra(["x1^2"], 1), 3)
    assert ok
    S = detail["S"]
    assert S.row(1) == {1: 2} and S.row(2) == {2: 2} and S.row(3) == {3: 2}
    ok, detail = cone_comparison(ideal_algebra(["x1^2", "x2^2"], 2), 3)
    assert ok and detail["S"][(1, 1)] == 3


def test_cone_first_row_counts_variables():
    A = algebra(3, 4, 1)
    ok, detail = cone_comparison(A, 2)
    assert ok and detail["S"][(1, 1)] == A.n + 1


# ----------------------------------------------------------------- socle


def test_socle_dimension():
    assert is_gorenstein(algebra(4, 4, 1))
    assert socle_dimension(power_of_max(2, 3)) == 3
    assert not is_gorenstein(power_of_max(2, 3))


def test_socle_quotient_identities():
    r = socle_quotient_betti(algebra(4, 4, 1))
    assert r["ok"] and not r["mismatches"]
    # the socle generator becomes a new minimal generator of degree s
    assert r["T"][(1, 4)] == r["A"][(1, 4)] + 1


def test_socle_quotient_rejects_non_gorenstein():
    with pytest.raises(ValueError):
        socle_quotient_betti(power_of_max(2, 3))


def test_socle_quotient_ideal_hilbert_function():
    A = algebra(4, 5, 1)
    T = ArtinAlgebra(socle_quotient_ideal(A))
    assert T.hf_vector == A.hf_vector[:-1]


# ------------------------------------------------------------------ tables


def test_betti_table_round_trip_and_format():
    table = betti_R(4, 4, 1)
    again = BettiTable.from_dict(json.loads(json.dumps(table.to_dict())))
    assert again == table
    text = format_betti(table)
    assert "total:" in text and text.splitlines()[2].split()[1] == "1"


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5))
def test_monomial_quotients_resolve_consistently(gens):
    # add pure powers so the quotient is Artinian
    J = MonomialIdeal(2, list(gens) + [(4, 0), (0, 4)])
    if J.is_unit():
        return
    A = monomial_algebra(J)
    table = betti_over_R(A)
    assert table.entries == oracle_betti_R(A, A.s + 3)
    assert table.row(1) == {d: sum(1 for g in J.gens if sum(g) == d) for d in {sum(g) for g in J.gens}}
