"""Homogeneous ideals, their quotient algebras, and Macaulay inverse systems.

A :class:`GradedIdeal` knows its graded pieces ``I_d`` as echelonized row
bases in the monomial basis of ``R_d``.  A :class:`QuotientAlgebra` picks the
standard monomials (non-pivot columns) as a basis of each ``A_d`` and builds
multiplication tables once, so later computations never need normal forms.
"""

import logging
from math import comb

import numpy as np

from .linalg import DEFAULT_PRIME, complete_basis, kernel_basis, row_basis
from .monomial import MonomialIdeal
from .rings import (
    B_SIDE,
    R_SIDE,
    Form,
    basis_size,
    catalecticant_matrix,
    exponent_array,
    monomial_index,
    product_index,
    product_rows,
)

log = logging.getLogger(__name__)

PRNG_NAME = "numpy.PCG64/integers/v1"


class ConfigurationError(ValueError):
    """The prime is too small for the requested computation."""


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class GradedIdeal:
    """Homogeneous ideal of ``K[x_1..x_n]`` with lazily computed graded pieces.

    Use :meth:`from_generators` or :func:`annihilator_ideal` rather than the
    constructor.  ``full_from`` is a degree from which ``I_d = R_d`` is known to
    hold; ``gen_bound`` is a degree past which no minimal generator can appear.
    """

    def __init__(self, n, p, piece_source, gen_bound, full_from=None):
        self.n = n
        self.p = p
        self._source = piece_source
        self.gen_bound = gen_bound
        self.full_from = full_from
        self._pieces = {}
        self._min_gens = None

    @classmethod
    def from_generators(cls, n, p, generators):
        """Ideal generated by forms, given as Form objects or a ``{degree: rows}`` dict."""
        by_deg = {}
        if isinstance(generators, dict):
            for d, rows in generators.items():
                rows = np.asarray(rows, dtype=np.int64).reshape(-1, basis_size(n, d)) % p
                if rows.shape[0]:
                    by_deg.setdefault(int(d), []).append(rows)
        else:
            for f in generators:
                if f.n != n or f.p != p:
                    raise ValueError("generator lives in a different ring")
                if not f.is_zero():
                    by_deg.setdefault(f.degree, []).append(f.coeffs.reshape(1, -1))
        gens = {d: np.vstack(v) for d, v in by_deg.items()}
        bound = max(gens, default=0)
        ideal = cls(n, p, None, bound)

        def source(d):
            parts = []
            if d >= 1:
                prev = ideal.piece(d - 1)
                if prev.shape[0]:
                    parts.append(product_rows(prev, n, d - 1, 1, p))
            if d in gens:
                parts.append(gens[d])
            if not parts:
                return np.zeros((0, basis_size(n, d)), dtype=np.int64)
            return np.vstack(parts)

        ideal._source = source
        return ideal

    def piece(self, d):
        """Reduced echelon basis of ``I_d`` (rows)."""
        if d < 0:
            return np.zeros((0, 0), dtype=np.int64)
        if d not in self._pieces:
            N = basis_size(self.n, d)
            if self.full_from is not None and d >= self.full_from:
                B, piv = np.eye(N, dtype=np.int64), list(range(N))
            else:
                # pieces of ideals built from generators depend on lower pieces
                for k in range(d):
                    if k not in self._pieces:
                        self.piece(k)
                B, piv = row_basis(self._source(d), self.p)
                if len(piv) == N and self.full_from is None:
                    self.full_from = d
            self._pieces[d] = (_frozen(B), tuple(piv))
        return self._pieces[d][0]

    def pivots(self, d):
        self.piece(d)
        return self._pieces[d][1]

    def dim(self, d):
        return self.piece(d).shape[0]

    def is_unit(self):
        return self.dim(0) == 1

    def minimal_generators(self):
        """``{degree: rows}`` of minimal generators, chosen deterministically.

        In each degree the rows of the echelon basis of ``I_d`` are scanned in
        order and kept when they are independent of ``R_1 * I_{d-1}``.
        """
        if self._min_gens is None:
            out = {}
            top = self.gen_bound if self.full_from is None else min(self.gen_bound, self.full_from)
            for d in range(0, top + 1):
                cand = self.piece(d)
                if cand.shape[0] == 0:
                    continue
                span = product_rows(self.piece(d - 1), self.n, d - 1, 1, self.p) if d >= 1 else None
                if span is not None and span.shape[0] and row_basis(span, self.p)[0].shape[0] == cand.shape[0]:
                    continue
                idx = complete_basis(span, cand, self.p)
                if idx:
                    out[d] = _frozen(cand[idx])
                if d == 0:
                    break
            self._min_gens = out
        return self._min_gens

    def generator_forms(self):
        return [
            Form(self.n, d, row, self.p, R_SIDE)
            for d, rows in sorted(self.minimal_generators().items())
            for row in rows
        ]

    def generator_degrees(self):
        return {d: int(rows.shape[0]) for d, rows in sorted(self.minimal_generators().items())}

    def max_gen_degree(self):
        degs = self.generator_degrees()
        if not degs:
            raise ValueError("the zero ideal has no generators")
        return max(degs)

    def num_generators(self):
        return sum(self.generator_degrees().values())


def max_gen_degree_graded(I):
    """Largest degree of a minimal homogeneous generator, m(I)."""
    return I.max_gen_degree()


def ideal_from_monomials(J, p=DEFAULT_PRIME):
    """The ideal of a :class:`MonomialIdeal` as a :class:`GradedIdeal`."""
    gens = []
    for g in J.sorted_gens():
        gens.append(Form.monomial(g, p))
    return GradedIdeal.from_generators(J.n, p, gens)


def extend_ideal(I, extra=1):
    """Extension of ``I`` to the ring with ``extra`` new variables appended last."""
    n2 = I.n + extra
    gens = {}
    for d, rows in I.minimal_generators().items():
        idx = monomial_index(n2, d)
        targets = [idx[m + (0,) * extra] for m in map(tuple, exponent_array(I.n, d).tolist())]
        out = np.zeros((rows.shape[0], basis_size(n2, d)), dtype=np.int64)
        out[:, targets] = rows
        gens[d] = out
    return GradedIdeal.from_generators(n2, I.p, gens)


class QuotientAlgebra:
    """``A = R/I`` with standard-monomial bases of each graded piece."""

    def __init__(self, ideal):
        if ideal.is_unit():
            raise ValueError("the quotient by the unit ideal is the zero ring")
        self.ideal = ideal
        self.n = ideal.n
        self.p = ideal.p
        self._std = {}
        self._nf = {}
        self._mult = {}

    def _build(self, d):
        if d in self._std:
            return
        if d < 0:
            self._std[d] = np.zeros(0, dtype=np.int64)
            self._nf[d] = np.zeros((0, 0), dtype=np.int64)
            return
        N = basis_size(self.n, d)
        B = self.ideal.piece(d)
        piv = list(self.ideal.pivots(d))
        pset = set(piv)
        std = np.array([c for c in range(N) if c not in pset], dtype=np.int64)
        nf = np.zeros((N, len(std)), dtype=np.int64)
        if len(std):
            nf[std, np.arange(len(std))] = 1
            if piv:
                nf[piv, :] = (-B[:, std]) % self.p
        self._std[d] = _frozen(std)
        self._nf[d] = _frozen(nf)

    @property
    def minimal_presentation(self):
        """True when the ideal has no linear forms (so ``edim(A) = n``)."""
        return self.ideal.dim(1) == 0

    def hf(self, d):
        self._build(d)
        return len(self._std[d])

    def standard_monomials(self, d):
        """Indices (into ``monomial_basis(n, d)``) of the standard monomials of degree d."""
        self._build(d)
        return self._std[d]

    def normal_form(self, d):
        """``N_d x hf(d)`` matrix sending monomial coordinates to A-basis coordinates."""
        self._build(d)
        return self._nf[d]

    def mult(self, e, a):
        """``T[b, q, r]``: coordinate r of (basis_e[b] * basis_a[q]) in ``A_{e+a}``."""
        key = (e, a)
        if key not in self._mult:
            se, sa = self.standard_monomials(e), self.standard_monomials(a)
            nf = self.normal_form(e + a)
            if len(se) == 0 or len(sa) == 0 or nf.shape[1] == 0:
                T = np.zeros((len(se), len(sa), nf.shape[1]), dtype=np.int64)
            else:
                idx = product_index(self.n, e, a)[np.ix_(se, sa)]
                T = nf[idx]
            self._mult[key] = _frozen(T)
        return self._mult[key]

    @property
    def top_degree(self):
        """Socle degree for Artinian algebras, ``None`` otherwise."""
        full = self.ideal.full_from
        if full is None:
            degs = self.ideal.generator_degrees()
            if not degs:
                return None
            # an m-primary ideal generated in degrees <= D contains a regular
            # sequence of n forms of degree D, so A vanishes past n(D-1)
            limit = self.n * (max(degs) - 1) + 1
            for d in range(limit + 1):
                if self.hf(d) == 0:
                    full = d
                    break
            else:
                return None
        d = full
        while d > 0 and self.hf(d) == 0:
            d -= 1
        return d

    def is_artinian(self):
        return self.top_degree is not None

    def hilbert_function(self, up_to=None):
        if up_to is None:
            up_to = self.top_degree
            if up_to is None:
                raise ValueError("algebra is not Artinian; pass up_to")
        return [self.hf(d) for d in range(up_to + 1)]


class ArtinAlgebra(QuotientAlgebra):
    """Artinian graded quotient with socle degree ``s`` and Hilbert function ``hf_vector``."""

    def __init__(self, ideal, form=None, seed=None):
        super().__init__(ideal)
        s = self.top_degree
        if s is None:
            raise ValueError("R/I is not Artinian")
        self.s = s
        self.hf_vector = tuple(self.hf(d) for d in range(s + 1))
        self.form = form
        self.seed = seed

    @property
    def is_gorenstein_shaped(self):
        h = self.hf_vector
        return h[-1] == 1 and all(h[i] == h[self.s - i] for i in range(self.s + 1))

    def socle_degree(self):
        return self.s

    def report(self):
        out = {
            "n": self.n,
            "s": self.s,
            "p": self.p,
            "hf": list(self.hf_vector),
            "compressed": is_compressed(self) if self.hf_vector[-1] == 1 else False,
            "min_gens": {str(d): c for d, c in self.ideal.generator_degrees().items()},
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def socle_degree(A):
    return A.s


def compressed_hf(n, s):
    return [min(comb(n + i - 1, i), comb(n + s - i - 1, s - i)) for i in range(s + 1)]


def is_compressed(A):
    if A.hf_vector[-1] != 1:
        raise ValueError("compressedness is defined for Gorenstein algebras (hf(s) = 1)")
    return list(A.hf_vector) == compressed_hf(A.n, A.s)


def check_prime(p, s):
    if p <= s:
        raise ConfigurationError(f"the prime {p} must exceed the socle degree {s}")


def annihilator_ideal(F, degree_bound=None):
    """``I_F = {G : G o F = 0}`` for a nonzero B-side form ``F`` of degree s."""
    if F.is_zero():
        raise ValueError("the zero form has no inverse-system algebra")
    s = F.degree
    check_prime(F.p, s)
    if degree_bound is not None and degree_bound < s + 1:
        raise ValueError(f"degree bound must be at least s+1 = {s + 1}")

    def source(d):
        if d > s:
            return np.eye(basis_size(F.n, d), dtype=np.int64)
        return kernel_basis(catalecticant_matrix(F, d).matrix, F.p)

    ideal = GradedIdeal(F.n, F.p, source, gen_bound=s + 1, full_from=s + 1)
    for d in range((degree_bound or s + 1) + 1):
        ideal.piece(d)
    return ideal


def inverse_system_algebra(F, seed=None):
    """``A_F = R/I_F``."""
    return ArtinAlgebra(annihilator_ideal(F), form=F, seed=seed)


def random_form(n, s, seed, p=DEFAULT_PRIME):
    """Seeded form with i.i.d. uniform coefficients in F_p.

    Coefficients come from ``numpy.random.Generator(PCG64(seed)).integers(0, p)``
    drawn in monomial-basis order; an all-zero draw is discarded and the same
    stream continues.  The recipe is fixed (``PRNG_NAME``) so forms are
    bit-reproducible across platforms.
    """
    check_prime(p, s)
    rng = np.random.Generator(np.random.PCG64(seed))
    N = basis_size(n, s)
    while True:
        c = rng.integers(0, p, size=N, dtype=np.int64)
        if c.any():
            return Form(n, s, c, p, B_SIDE)


def generic_algebra(n, s, seed, p=DEFAULT_PRIME):
    return inverse_system_algebra(random_form(n, s, seed, p), seed=seed)


def socle_quotient_ideal(A):
    """Ideal of ``T = A/soc(A)`` for a Gorenstein ``A``: ``I + R_s``."""
    if not A.is_gorenstein_shaped:
        raise ValueError(f"algebra with Hilbert function {A.hf_vector} is not Gorenstein")
    gens = dict(A.ideal.minimal_generators())
    N = basis_size(A.n, A.s)
    top = np.eye(N, dtype=np.int64)
    gens[A.s] = np.vstack([gens[A.s], top]) if A.s in gens else top
    return GradedIdeal.from_generators(A.n, A.p, gens)


def polynomial_ring(n, p=DEFAULT_PRIME):
    """``R`` itself, as the quotient by the zero ideal."""
    return QuotientAlgebra(GradedIdeal.from_generators(n, p, {}))


def monomial_algebra(J, p=DEFAULT_PRIME):
    if not isinstance(J, MonomialIdeal):
        raise TypeError("expected a MonomialIdeal")
    return ArtinAlgebra(ideal_from_monomials(J, p))
