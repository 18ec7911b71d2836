"""Cached computations shared by the test modules and the acceptance recorder."""

import time
from functools import lru_cache

from gorenstein_rate.inverse_system import generic_algebra
from gorenstein_rate.linalg import DEFAULT_PRIME
from gorenstein_rate.resolution import betti_K_over_A, resolve_over_R

ACCEPTANCE = {}
TIMINGS = {}


def record(number, title, ok, detail=""):
    ACCEPTANCE[number] = (title, bool(ok), detail)


@lru_cache(maxsize=None)
def algebra(n, s, seed, p=DEFAULT_PRIME):
    t = time.perf_counter()
    A = generic_algebra(n, s, seed, p)
    TIMINGS[("algebra", n, s, seed)] = time.perf_counter() - t
    return A


@lru_cache(maxsize=None)
def betti_R(n, s, seed):
    t = time.perf_counter()
    table = resolve_over_R(algebra(n, s, seed)).betti
    TIMINGS[("betti_R", n, s, seed)] = time.perf_counter() - t
    return table


@lru_cache(maxsize=None)
def betti_K(n, s, seed, i_max):
    t = time.perf_counter()
    table = betti_K_over_A(algebra(n, s, seed), i_max)
    TIMINGS[("betti_K", n, s, seed, i_max)] = time.perf_counter() - t
    return table


def seed_seconds(n, s, seed):
    """Wall time spent on one seed across every cached stage."""
    return sum(v for k, v in TIMINGS.items() if k[1:4] == (n, s, seed))


def ideal_pieces(I):
    """``d -> [dict polynomial]`` spanning ``I_d``, for the independent oracles."""
    from gorenstein_rate.rings import monomial_basis

    def piece(d):
        basis = monomial_basis(I.n, d)
        return [{basis[k]: int(c) for k, c in enumerate(row) if c} for row in I.piece(d)]

    return piece


def oracle_betti_R(A, j_max):
    import oracles

    return oracles.koszul_betti(A.n, A.p, ideal_pieces(A.ideal), j_max)
