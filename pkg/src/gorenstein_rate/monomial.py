"""Monomial ideals: minimal generators, colon by the maximal ideal, socle,
Hilbert function and the two level-algebra constructions built from blocks of
variables.
"""

from dataclasses import dataclass
from itertools import product as cartesian

import numpy as np

from .rings import exponent_array, format_monomial, monomial_basis, parse_monomial


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def minimalize(gens):
    """Drop every generator divisible by another one."""
    gens = sorted(set(gens), key=lambda g: (sum(g), tuple(-x for x in g)))
    kept = []
    for g in gens:
        if not any(divides(h, g) for h in kept):
            kept.append(g)
    return frozenset(kept)


def _sort_key(m):
    return (sum(m), tuple(-x for x in m))


@dataclass(frozen=True)
class MonomialIdeal:
    n: int
    gens: frozenset

    def __post_init__(self):
        gens = frozenset(tuple(int(a) for a in g) for g in self.gens)
        for g in gens:
            if len(g) != self.n or min(g, default=0) < 0:
                raise ValueError(f"bad exponent vector {g} for n={self.n}")
        object.__setattr__(self, "gens", minimalize(gens))

    @classmethod
    def unit(cls, n):
        return cls(n, [(0,) * n])

    @classmethod
    def zero(cls, n):
        return cls(n, [])

    @classmethod
    def variables(cls, n, indices):
        """The ideal generated by the variables ``x_i`` for 0-based ``indices``."""
        return cls(n, [tuple(int(k == i) for k in range(n)) for i in indices])

    def sorted_gens(self):
        return sorted(self.gens, key=_sort_key)

    def is_unit(self):
        return (0,) * self.n in self.gens

    def is_zero(self):
        return not self.gens

    def contains(self, m):
        return any(divides(g, m) for g in self.gens)

    def __add__(self, other):
        return MonomialIdeal(self.n, self.gens | other.gens)

    def __mul__(self, other):
        return MonomialIdeal(self.n, [tuple(a + b for a, b in zip(g, h)) for g in self.gens for h in other.gens])

    def __pow__(self, k):
        out = MonomialIdeal.unit(self.n)
        for _ in range(k):
            out = out * self
        return out

    def intersect(self, other):
        return MonomialIdeal(self.n, [tuple(max(a, b) for a, b in zip(g, h)) for g in self.gens for h in other.gens])

    def colon_monomial(self, m):
        return MonomialIdeal(self.n, [tuple(max(a - b, 0) for a, b in zip(g, m)) for g in self.gens])

    def in_degree(self, d):
        """Boolean mask over ``monomial_basis(n, d)``: which monomials lie in the ideal."""
        B = exponent_array(self.n, d)
        if not self.gens:
            return np.zeros(len(B), dtype=bool)
        G = np.array(sorted(self.gens), dtype=np.int64)
        return (B[:, None, :] >= G[None, :, :]).all(axis=2).any(axis=1)

    def is_artinian(self):
        pure = {i for g in self.gens for i in range(self.n) if sum(g) == g[i] and g[i] > 0}
        return self.is_unit() or len(pure) == self.n

    def __str__(self):
        return "(" + ", ".join(format_monomial(g) for g in self.sorted_gens()) + ")"


@dataclass(frozen=True)
class LevelCertificate:
    socle_degree: int
    is_level: bool
    m_J: int
    socle_monomials: tuple

    def to_dict(self):
        return {
            "socle_degree": self.socle_degree,
            "is_level": self.is_level,
            "m_J": self.m_J,
            "socle_monomials": [format_monomial(m) for m in self.socle_monomials],
        }


def _block_ideal(n, lo, hi):
    return MonomialIdeal.variables(n, range(lo, hi))


def lemma1_even(m, u, j):
    """``(X^2 + Y^2)^u`` with ``X = (x_1..x_j)``, ``Y = (x_{j+1}..x_m)``."""
    if m < 3 or u < 1 or not 1 <= j < m:
        raise ValueError(f"need m >= 3, u >= 1, 1 <= j < m; got m={m}, u={u}, j={j}")
    X, Y = _block_ideal(m, 0, j), _block_ideal(m, j, m)
    return (X**2 + Y**2) ** u


def lemma1_odd(m, u, j, k):
    """``X(X^2+Y^2)^u + Y(Y^2+Z^2)^u + Z(Z^2+X^2)^u + XYZ((X+Y)^2+Z^2)^(u-1)``.

    Blocks are ``X = (x_1..x_j)``, ``Y = (x_{j+1}..x_k)``, ``Z = (x_{k+1}..x_m)``;
    Z must be nonempty, so ``k < m``.
    """
    if m < 3 or u < 1 or not 1 <= j < k < m:
        raise ValueError(f"need m >= 3, u >= 1, 1 <= j < k < m; got m={m}, u={u}, j={j}, k={k}")
    X, Y, Z = _block_ideal(m, 0, j), _block_ideal(m, j, k), _block_ideal(m, k, m)
    return (
        X * (X**2 + Y**2) ** u
        + Y * (Y**2 + Z**2) ** u
        + Z * (Z**2 + X**2) ** u
        + X * Y * Z * ((X + Y) ** 2 + Z**2) ** (u - 1)
    )


def default_splits(m, odd):
    if odd:
        return max(m // 3, 1), max((2 * m) // 3, 2)
    return (max(m // 2, 1),)


def colon_with_max_ideal(J):
    """``J : m`` computed as the intersection of ``J : x_i`` over all variables."""
    if J.is_unit():
        return J
    out = None
    for i in range(J.n):
        q = J.colon_monomial(tuple(int(k == i) for k in range(J.n)))
        out = q if out is None else out.intersect(q)
    return out


def max_gen_degree(J):
    if J.is_zero():
        raise ValueError("the zero ideal has no generators")
    return max(sum(g) for g in J.gens)


def socle_report(J):
    if not J.is_artinian():
        raise ValueError(f"R/J is not Artinian for J = {J}")
    if J.is_unit():
        raise ValueError("R/J is the zero ring")
    colon = colon_with_max_ideal(J)
    socle = sorted((g for g in colon.gens if not J.contains(g)), key=_sort_key)
    top = max(sum(g) for g in socle)
    return LevelCertificate(
        socle_degree=top,
        is_level=all(sum(g) == top for g in socle),
        m_J=max_gen_degree(J),
        socle_monomials=tuple(socle),
    )


def hilbert_function(J, up_to):
    return [int((~J.in_degree(d)).sum()) for d in range(up_to + 1)]


def contains_power_of_max(J, d):
    """True when every monomial of degree ``d`` lies in ``J``."""
    return bool(J.in_degree(d).all())


def monomials_of_blocks(sizes, degrees):
    """All monomials whose block degrees (on consecutive variable blocks) equal ``degrees``."""
    pieces = [monomial_basis(s, d) for s, d in zip(sizes, degrees)]
    return [sum(parts, ()) for parts in cartesian(*pieces)]


def parse_monomial_ideal(text, n=None):
    """One monomial per line in ``x1^a1*...*xn^an`` syntax; blank lines and ``#`` comments ignored."""
    exps = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            exps.append(parse_monomial(line)[1])
    if not exps:
        raise ValueError("no monomials given")
    width = max(len(e) for e in exps)
    n = width if n is None else n
    if width > n:
        raise ValueError(f"monomial uses {width} variables but n={n}")
    return MonomialIdeal(n, [e + (0,) * (n - len(e)) for e in exps])


def format_monomial_ideal(J):
    return "\n".join(format_monomial(g) for g in J.sorted_gens()) + "\n"
