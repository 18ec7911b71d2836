"""Minimal graded free resolutions by degree-wise linear algebra.

The engine resolves a cyclic module ``M = base/J`` over a graded quotient
``base`` (the polynomial ring itself, an Artinian algebra, or a one-dimensional
extension of one).  A free module is described by its generator degrees; its
degree-j piece is ``sum_g A_{j-g}`` laid out generator by generator.  At
homological step i the kernel of the previous differential is computed in
each degree, and new generators are chosen as an echelon completion of the
part already generated by lower-degree generators.
"""

import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .inverse_system import (
    ArtinAlgebra,
    QuotientAlgebra,
    extend_ideal,
    polynomial_ring,
    socle_quotient_ideal,
)
from .linalg import independent_rows, kernel_basis, matmul_mod, reduce_modulo, row_basis

log = logging.getLogger(__name__)


class TruncationUnsoundError(RuntimeError):
    """A generator showed up at the truncation degree, so higher ones may be missed."""


@dataclass
class BettiTable:
    """Graded Betti numbers ``beta_{i,j}`` stored sparsely."""

    base: str
    entries: dict
    complete: bool
    i_max: int = None
    j_max: int = None

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def row(self, i):
        return {j: c for (k, j), c in sorted(self.entries.items()) if k == i and c}

    def total(self, i):
        return sum(self.row(i).values())

    def t(self, i):
        """Largest internal degree in homological degree i, or ``None`` when the row is empty."""
        r = self.row(i)
        return max(r) if r else None

    @property
    def max_i(self):
        return max((i for (i, _), c in self.entries.items() if c), default=0)

    def to_dict(self):
        out = {"base": self.base, "complete": self.complete}
        if self.i_max is not None:
            out["i_max"] = self.i_max
        if self.j_max is not None:
            out["j_max"] = self.j_max
        out["entries"] = [[i, j, c] for (i, j), c in sorted(self.entries.items()) if c]
        return out

    @classmethod
    def from_dict(cls, d):
        return cls(
            base=d["base"],
            entries={(i, j): c for i, j, c in d["entries"]},
            complete=d["complete"],
            i_max=d.get("i_max"),
            j_max=d.get("j_max"),
        )

    def __str__(self):
        return format_betti(self)


def format_betti(table):
    """Macaulay-style triangle: column i, row j - i."""
    cols = range(0, table.max_i + 1)
    if not table.entries:
        return "(empty)"
    shifts = sorted({j - i for (i, j), c in table.entries.items() if c})
    width = max(len(str(c)) for c in list(table.entries.values()) + [table.total(i) for i in cols]) + 1
    width = max(width, len(str(table.max_i)) + 1)
    label = max(len(str(s)) for s in shifts + [0]) + 2
    label = max(label, 7)
    lines = [" " * label + "".join(f"{i:>{width}}" for i in cols)]
    lines.append(f"{'total:':>{label}}" + "".join(f"{table.total(i):>{width}}" for i in cols))
    for s in range(shifts[0], shifts[-1] + 1):
        cells = []
        for i in cols:
            c = table[(i, i + s)]
            cells.append(f"{c if c else '.':>{width}}")
        lines.append(f"{str(s) + ':':>{label}}" + "".join(cells))
    return "\n".join(lines)


# ------------------------------------------------------------- free modules


def _hf(base, d):
    return base.hf(d) if d >= 0 else 0


def module_layout(base, groups, j):
    """Offsets and total dimension of the degree-j piece of a free module.

    ``groups`` is a list of ``(degree, count)`` with increasing degrees.
    """
    offsets, total = [], 0
    for g, c in groups:
        offsets.append(total)
        total += c * _hf(base, j - g)
    return offsets, total


def shift_multiply(base, groups, V, g, e):
    """Multiply degree-g elements of a free module by every basis monomial of ``A_e``.

    ``V`` holds one element per row; the result has ``len(V) * hf(e)`` rows
    (element-major) in the coordinates of the degree ``g + e`` piece.
    """
    p = base.p
    he = _hf(base, e)
    off_g, _ = module_layout(base, groups, g)
    off_t, dim_t = module_layout(base, groups, g + e)
    k = V.shape[0]
    out = np.zeros((k * he, dim_t), dtype=np.int64)
    if k == 0 or he == 0:
        return out
    for (h, c), o1, o2 in zip(groups, off_g, off_t):
        a = g - h
        ha, ht = _hf(base, a), _hf(base, a + e)
        if ha == 0 or ht == 0:
            continue
        M = base.mult(e, a)
        M2 = np.ascontiguousarray(M.transpose(1, 0, 2)).reshape(ha, he * ht)
        Vh = np.ascontiguousarray(V[:, o1 : o1 + c * ha]).reshape(k * c, ha)
        P = matmul_mod(Vh, M2, p).reshape(k, c, he, ht).transpose(0, 2, 1, 3).reshape(k * he, c * ht)
        out[:, o2 : o2 + c * ht] = P
    return out


@dataclass
class ResolutionStep:
    """Generators of ``F_i`` and their images in ``F_{i-1}``.

    ``images[g]`` has one row per generator of degree g, in the coordinates of
    the degree-g piece of ``F_{i-1}``.
    """

    source_groups: list
    target_groups: list
    images: dict = field(repr=False)

    def degrees(self):
        return [g for g, c in self.source_groups for _ in range(c)]


def image_matrix(base, step, j):
    """Rows: images of the basis of ``(F_i)_j`` in ``(F_{i-1})_j``."""
    parts = [
        shift_multiply(base, step.target_groups, rows, g, j - g)
        for g, rows in sorted(step.images.items())
        if g <= j
    ]
    _, dim_t = module_layout(base, step.target_groups, j)
    if not parts:
        return np.zeros((0, dim_t), dtype=np.int64)
    return np.vstack(parts)


@dataclass
class Resolution:
    base: QuotientAlgebra
    steps: list
    betti: BettiTable


def resolve(base, first_syzygies, i_max, j_max=None, cap=None, top=None, base_label="A"):
    """Minimal graded free resolution of ``base/J`` through homological degree ``i_max``.

    ``first_syzygies(j)`` returns rows spanning ``J_j``.  Degrees are bounded
    by ``j_max`` (truncation), by ``cap(i)`` (a known vanishing bound, e.g.
    from regularity) and, when ``top`` (the socle degree of an Artinian base)
    is given, by the largest degree a syzygy can live in.
    """
    p = base.p
    prev_groups = [(0, 1)]
    kernel_at = first_syzygies
    steps = []
    betti = {(0, 0): 1}
    finished = False
    truncated = False
    for i in range(1, i_max + 1):
        lo = prev_groups[0][0] + 1
        hi_possible = prev_groups[-1][0] + top if top is not None else None
        hi = [x for x in (j_max, hi_possible, cap(i) if cap else None) if x is not None]
        if not hi:
            raise ValueError("unbounded computation: give j_max, cap or an Artinian base")
        hi = min(hi)
        if j_max is not None and (hi_possible is None or hi_possible > j_max) and (cap is None or cap(i) > j_max):
            truncated = True
        if truncated and lo > j_max:
            raise TruncationUnsoundError(
                f"homological degree {i} starts at internal degree {lo} > j_max={j_max}; raise j_max"
            )
        new = {}
        for j in range(lo, hi + 1):
            Z = kernel_at(j)
            if Z.shape[0] == 0:
                continue
            span = [
                shift_multiply(base, prev_groups, rows, g, j - g) for g, rows in new.items()
            ]
            span = np.vstack(span) if span else np.zeros((0, Z.shape[1]), dtype=np.int64)
            B, piv = row_basis(span, p) if span.shape[0] else (span, [])
            if len(piv) == Z.shape[0]:
                continue
            idx = independent_rows(reduce_modulo(Z, B, piv, p), p)
            if not idx:
                continue
            gens = Z[idx]
            _assert_minimal(base, prev_groups, gens, j)
            new[j] = gens
            betti[(i, j)] = len(idx)
            if j == j_max and truncated:
                raise TruncationUnsoundError(
                    f"{len(idx)} generator(s) of homological degree {i} at the truncation "
                    f"degree j_max={j_max}; raise j_max"
                )
        if not new:
            finished = True
            break
        groups = [(g, rows.shape[0]) for g, rows in sorted(new.items())]
        step = ResolutionStep(groups, prev_groups, new)
        steps.append(step)
        log.debug("step %d: generators %s", i, groups)

        def kernel_at(j, step=step):
            M = image_matrix(base, step, j)
            if M.shape[0] == 0:
                return M
            return kernel_basis(np.ascontiguousarray(M.T), p)

        prev_groups = groups
    table = BettiTable(
        base=base_label,
        entries=betti,
        complete=finished or (cap is not None and not truncated),
        i_max=i_max,
        j_max=j_max if truncated else None,
    )
    return Resolution(base, steps, table)


def _assert_minimal(base, groups, gens, j):
    # a generator of degree j must have no component on degree-j generators (unit entries)
    offsets, _ = module_layout(base, groups, j)
    for (g, c), o in zip(groups, offsets):
        if g == j and gens[:, o : o + c].any():
            raise AssertionError("differential has a unit entry; resolution is not minimal")


# ----------------------------------------------------------------- structure


def check_minimality(res):
    """True when no differential has a degree-0 component."""
    for step in res.steps:
        offsets_cache = {}
        for g, rows in step.images.items():
            offsets, _ = offsets_cache.setdefault(g, module_layout(res.base, step.target_groups, g))
            for (h, c), o in zip(step.target_groups, offsets):
                if h == g and rows[:, o : o + c].any():
                    return False
    return True


def check_exactness(res):
    """True when ``d_{i-1} o d_i = 0`` on every generator of every computed step."""
    for prev, step in zip(res.steps, res.steps[1:]):
        for g, rows in step.images.items():
            M = image_matrix(res.base, prev, g)
            if M.shape[0] and matmul_mod(rows, M, res.base.p).any():
                return False
    return True


# ------------------------------------------------------------------ entry points


def _require_artinian(A):
    if not isinstance(A, ArtinAlgebra):
        if not A.is_artinian():
            raise ValueError("input algebra is not Artinian")
        A = ArtinAlgebra(A.ideal)
    return A


def resolve_over_R(ideal):
    """Finite minimal resolution of ``A = R/I`` over ``R``."""
    A = ArtinAlgebra(ideal) if not isinstance(ideal, QuotientAlgebra) else _require_artinian(ideal)
    I = A.ideal
    R = polynomial_ring(I.n, I.p)
    s = A.s
    # an Artinian module of socle degree s has regularity s: beta_{i,j} = 0 for j > i + s
    return resolve(R, I.piece, I.n, cap=lambda i: i + s, base_label="R")


def betti_over_R(ideal):
    """Complete graded Betti table of ``R/I`` over ``R``."""
    return resolve_over_R(ideal).betti


def default_j_max(m_I, i_max, slack=2):
    return (m_I - 1) * (i_max - 1) + 1 + slack


def _residue_field(base):
    def maximal_ideal(j):
        return np.eye(base.hf(j), dtype=np.int64) if j >= 1 else np.zeros((0, base.hf(j)), dtype=np.int64)

    return maximal_ideal


def resolve_K(A, i_max, j_max="default"):
    """Minimal resolution of the residue field over an Artinian ``A``.

    ``j_max="default"`` uses ``(m(I)-1)(i_max-1)+1`` plus 2; ``None`` computes
    every degree (always finite over an Artinian base).
    """
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    A = _require_artinian(A)
    if j_max == "default":
        j_max = default_j_max(A.ideal.max_gen_degree(), max(i_max, 2))
    return resolve(A, _residue_field(A), i_max, j_max=j_max, top=A.s, base_label="A")


def betti_K_over_A(A, i_max, j_max="default"):
    return resolve_K(A, i_max, j_max).betti


def t_vector(A_or_table, i_max=None, j_max="default"):
    """``[t_0, ..., t_{i_max}]`` with ``None`` for vanishing rows."""
    if isinstance(A_or_table, BettiTable):
        table = A_or_table
        i_max = table.i_max if i_max is None else i_max
    else:
        table = betti_K_over_A(A_or_table, i_max, j_max)
    return [table.t(i) for i in range(i_max + 1)]


def cone_comparison(A, i_max, j_max="default"):
    """Compare ``beta^S(K)`` with ``beta^A(K) + beta^A(K)`` shifted, for ``S = A[z]``.

    Returns ``(ok, detail)`` where detail lists both tables and any mismatch.
    """
    A = _require_artinian(A)
    if j_max == "default":
        j_max = default_j_max(A.ideal.max_gen_degree(), max(i_max, 2))
    S = QuotientAlgebra(extend_ideal(A.ideal))
    bS = resolve(S, _residue_field(S), i_max, j_max=j_max, base_label="S").betti
    bA = resolve(A, _residue_field(A), i_max, j_max=j_max, top=A.s, base_label="A").betti
    mismatches = []
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            expected = bA[(i, j)] + (bA[(i - 1, j - 1)] if i >= 1 else 0)
            if bS[(i, j)] != expected:
                mismatches.append((i, j, bS[(i, j)], expected))
    return not mismatches, {"S": bS, "A": bA, "mismatches": mismatches, "j_max": j_max}


def socle_dimension(A):
    """Total dimension of ``0 :_A m``."""
    A = _require_artinian(A)
    total = 0
    for d in range(A.s + 1):
        h = A.hf(d)
        if h == 0:
            continue
        M = np.hstack([A.mult(1, d)[k] for k in range(A.hf(1))]) if A.hf(d + 1) and A.hf(1) else None
        if M is None or M.size == 0:
            total += h
        else:
            total += kernel_basis(np.ascontiguousarray(M.T), A.p).shape[0]
    return total


def is_gorenstein(A):
    return socle_dimension(A) == 1


def socle_quotient_betti(A):
    """Check ``beta^R(T)`` against ``beta^R(A)`` for ``T = A/soc(A)``.

    For ``0 < i < n``: ``beta_{i,j}(T) = beta_{i,j}(A) + beta_{i-1,j-s}(K)``; for
    ``i = n`` the term ``beta_{n,j-s}(K)`` is subtracted as well.  Returns a
    report dict with both tables and the list of mismatching entries.
    """
    A = _require_artinian(A)
    if A.s < 2:
        raise ValueError("socle degree must be at least 2")
    if not is_gorenstein(A):
        raise ValueError(f"algebra with Hilbert function {A.hf_vector} is not Gorenstein")
    n, s = A.n, A.s
    T = ArtinAlgebra(socle_quotient_ideal(A))
    bA = betti_over_R(A)
    bT = betti_over_R(T)

    def koszul(i, j):
        return comb(n, i) if 0 <= i <= n and j == i else 0

    mismatches = []
    js = {j for (_, j) in list(bA.entries) + list(bT.entries)}
    for i in range(1, n + 1):
        for j in sorted(js | {i - 1 + s, i + s}):
            rhs = bA[(i, j)] + koszul(i - 1, j - s)
            if i == n:
                rhs -= koszul(n, j - s)
            if bT[(i, j)] != rhs:
                mismatches.append((i, j, bT[(i, j)], rhs))
    return {"ok": not mismatches, "A": bA, "T": bT, "mismatches": mismatches, "T_algebra": T}
