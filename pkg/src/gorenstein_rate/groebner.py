"""Buchberger's algorithm over F_p, initial ideals and rate bounds from them.

Polynomials are dicts ``{exponent tuple: coefficient}`` with coefficients in
``[1, p)``.  Only the coprime-leading-term criterion is used to skip pairs;
the inputs this module is meant for are small.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .inverse_system import GradedIdeal, QuotientAlgebra
from .linalg import rref
from .monomial import MonomialIdeal, divides, max_gen_degree
from .rings import Form, format_monomial, monomial_basis


@dataclass(frozen=True)
class TermOrder:
    """``lex`` or ``degrevlex`` with an optional variable ranking.

    ``perm[k]`` is the 0-based index of the k-th largest variable, so
    ``perm=(1, 0)`` means ``x2 > x1``.
    """

    kind: str = "degrevlex"
    perm: tuple = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.perm is not None:
            perm = tuple(int(i) for i in self.perm)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{self.perm} is not a permutation of 0..{len(perm) - 1}")
            object.__setattr__(self, "perm", perm)

    def key(self, e):
        q = e if self.perm is None else tuple(e[i] for i in self.perm)
        if self.kind == "lex":
            return q
        return (sum(q), tuple(-x for x in reversed(q)))

    @property
    def name(self):
        if self.perm is None:
            return self.kind
        return self.kind + ":" + ",".join(str(i + 1) for i in self.perm)

    @classmethod
    def parse(cls, kind, perm=None):
        """``perm`` is a comma-separated 1-based ranking such as ``"2,1,3"``."""
        if perm:
            perm = tuple(int(x) - 1 for x in perm.split(","))
        return cls(kind, perm or None)


# ------------------------------------------------------------- polynomial ops


def poly_from_form(F):
    return {e: c for c, e in F.terms()}


def form_from_poly(f, n, p):
    degs = {sum(e) for e in f}
    if len(degs) != 1:
        raise ValueError("polynomial is not homogeneous")
    F = Form.zero(n, degs.pop(), p)
    out = F.coeffs.copy()
    basis = monomial_basis(n, F.degree)
    idx = {m: i for i, m in enumerate(basis)}
    for e, c in f.items():
        out[idx[e]] = c
    return Form(n, F.degree, out, p)


def _monic(f, lead, p):
    inv = pow(f[lead], -1, p)
    return {e: c * inv % p for e, c in f.items()}


def _lead(f, order):
    return max(f, key=order.key)


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_multiple(f, g, shift, c, p):
    """``f -= c * x^shift * g`` in place."""
    for e, cg in g.items():
        m = tuple(a + b for a, b in zip(e, shift))
        v = (f.get(m, 0) - c * cg) % p
        if v:
            f[m] = v
        else:
            f.pop(m, None)


def reduce_full(f, G, leads, order, p):
    """Remainder of ``f`` on division by the monic polynomials ``G``."""
    f = dict(f)
    r = {}
    key = order.key
    while f:
        m = max(f, key=key)
        c = f[m]
        for g, lm in zip(G, leads):
            if divides(lm, m):
                _sub_multiple(f, g, tuple(a - b for a, b in zip(m, lm)), c, p)
                break
        else:
            r[m] = c
            del f[m]
    return r


def s_polynomial(f, g, lf, lg, p):
    """S-polynomial of monic ``f`` and ``g``."""
    L = _lcm(lf, lg)
    out = {}
    _sub_multiple(out, f, tuple(a - b for a, b in zip(L, lf)), p - 1, p)
    _sub_multiple(out, g, tuple(a - b for a, b in zip(L, lg)), 1, p)
    return out


@dataclass
class GroebnerBasis:
    polys: list
    order: TermOrder
    n: int
    p: int
    reduced: bool = True
    leads: list = field(default_factory=list)

    def __post_init__(self):
        if not self.leads:
            self.leads = [_lead(f, self.order) for f in self.polys]

    def forms(self):
        return [form_from_poly(f, self.n, self.p) for f in self.polys]

    def leading_monomials(self):
        return list(self.leads)

    def certify(self):
        """Every S-polynomial (coprime pairs included) reduces to zero."""
        G, L = self.polys, self.leads
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                S = s_polynomial(G[i], G[j], L[i], L[j], self.p)
                if reduce_full(S, G, L, self.order, self.p):
                    return False
        return True

    def __str__(self):
        return "\n".join(
            " + ".join(f"{c}*{format_monomial(e)}" for e, c in sorted(f.items(), key=lambda t: self.order.key(t[0]), reverse=True))
            for f in self.polys
        )


def _as_polys(gens, p):
    out = []
    for g in gens:
        f = poly_from_form(g) if isinstance(g, Form) else {tuple(e): c % p for e, c in g.items()}
        f = {e: c for e, c in f.items() if c}
        if f:
            if len({sum(e) for e in f}) != 1:
                raise ValueError("generators must be homogeneous")
            out.append(f)
    return out


def buchberger(gens, order, n=None, p=None):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``gens`` are :class:`Form` objects or exponent dicts; ``n`` and ``p`` are
    taken from the forms when not given.
    """
    forms = [g for g in gens if isinstance(g, Form)]
    if forms:
        n = forms[0].n if n is None else n
        p = forms[0].p if p is None else p
    if n is None or p is None:
        raise ValueError("n and p are required for dict input")
    G, L = [], []
    for f in _as_polys(gens, p):
        r = reduce_full(f, G, L, order, p)
        if r:
            lm = _lead(r, order)
            G.append(_monic(r, lm, p))
            L.append(lm)
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda ij: (sum(_lcm(L[ij[0]], L[ij[1]])), ij[1], ij[0]))
        i, j = pairs.pop(0)
        if all(a == 0 or b == 0 for a, b in zip(L[i], L[j])):
            continue
        r = reduce_full(s_polynomial(G[i], G[j], L[i], L[j], p), G, L, order, p)
        if r:
            lm = _lead(r, order)
            G.append(_monic(r, lm, p))
            L.append(lm)
            k = len(G) - 1
            pairs.extend((a, k) for a in range(k))
    # minimal basis, then interreduce
    idx = sorted(range(len(G)), key=lambda a: order.key(L[a]))
    keep = []
    for a in idx:
        if not any(divides(L[b], L[a]) for b in keep):
            keep.append(a)
    G, L = [G[a] for a in keep], [L[a] for a in keep]
    out = []
    for a in range(len(G)):
        others = [b for b in range(len(G)) if b != a]
        tail = {e: c for e, c in G[a].items() if e != L[a]}
        r = reduce_full(tail, [G[b] for b in others], [L[b] for b in others], order, p)
        r[L[a]] = 1
        out.append(r)
    pairs = sorted(zip(out, L), key=lambda t: order.key(t[1]), reverse=True)
    return GroebnerBasis([f for f, _ in pairs], order, n, p, True, [lm for _, lm in pairs])


def initial_ideal(gb):
    if not gb.polys:
        raise ValueError("the zero ideal has no initial ideal generators")
    return MonomialIdeal(gb.n, gb.leads)


def initial_ideal_from_pieces(I, order, top=None):
    """Initial ideal of an Artinian graded ideal from its graded pieces.

    In each degree the leading monomials of ``I_d`` are the pivots of the
    echelon form with columns sorted from largest to smallest monomial.
    """
    if top is None:
        top = QuotientAlgebra(I).top_degree
        if top is None:
            raise ValueError("ideal is not Artinian; use buchberger")
    leads = []
    for d in range(top + 2):
        B = I.piece(d)
        if B.shape[0] == 0:
            continue
        basis = monomial_basis(I.n, d)
        cols = sorted(range(len(basis)), key=lambda k: order.key(basis[k]), reverse=True)
        _, piv = rref(B[:, cols], I.p)
        leads.extend(basis[cols[c]] for c in piv)
    return MonomialIdeal(I.n, leads)


# ----------------------------------------------------------------- reports


@dataclass
class SandwichReport:
    lower: int
    upper: int
    per_order: dict
    determined: bool

    def to_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "per_order": self.per_order,
            "determined": self.determined,
        }


def rate_sandwich(I, orders=None, method="auto"):
    """``m(I) - 1 <= rate(R/I) <= min_tau m(in_tau(I)) - 1``.

    ``method`` is ``"pieces"`` (Artinian ideals only), ``"buchberger"`` or
    ``"auto"``.
    """
    if orders is None:
        orders = [TermOrder("degrevlex"), TermOrder("lex")]
    if I.is_unit() or not I.generator_degrees():
        raise ValueError("rate bounds need a nonzero proper ideal")
    top = None
    if method in ("auto", "pieces"):
        top = QuotientAlgebra(I).top_degree
        if top is None and method == "pieces":
            raise ValueError("ideal is not Artinian; use the buchberger method")
    per = {}
    for o in orders:
        if top is not None:
            J = initial_ideal_from_pieces(I, o, top)
        else:
            J = initial_ideal(buchberger(I.generator_forms(), o, I.n, I.p))
        per[o.name] = max_gen_degree(J) - 1
    lower = I.max_gen_degree() - 1
    upper = min(per.values())
    return SandwichReport(lower, upper, per, lower == upper)


def expected_ci_hf(degrees, n, up_to):
    """Coefficients of ``prod (1 - v^d) / (1 - v)^n`` through ``up_to``."""
    num = [1]
    for d in degrees:
        nxt = [0] * (len(num) + d)
        for i, c in enumerate(num):
            nxt[i] += c
            nxt[i + d] -= c
        num = nxt
    return [
        sum(num[i] * comb(n - 1 + k - i, n - 1) for i in range(min(k, len(num) - 1) + 1))
        for k in range(up_to + 1)
    ]


class NotRegularSequence(ValueError):
    pass


def _is_regular(forms, seed):
    """Hilbert-function test; returns (ok, witness dict)."""
    n, p = forms[0].n, forms[0].p
    degrees = [F.degree for F in forms]
    bound = sum(d - 1 for d in degrees) + 1
    I = GradedIdeal.from_generators(n, p, forms)
    hf = [comb(n - 1 + d, n - 1) - I.dim(d) for d in range(bound + 1)]
    expected = expected_ci_hf(degrees, n, bound)
    for d, (a, b) in enumerate(zip(hf, expected)):
        if a != b:
            return False, {"degree": d, "hf": a, "expected": b}
    if len(forms) < n:
        # cut by general linear forms; an m-primary ideal generated by n forms
        # is generated by a regular sequence, and so is any subsequence
        rng = np.random.Generator(np.random.PCG64(seed))
        lin = [Form(n, 1, rng.integers(0, p, size=n), p) for _ in range(n - len(forms))]
        J = GradedIdeal.from_generators(n, p, list(forms) + lin)
        if J.dim(bound) != comb(n - 1 + bound, n - 1):
            return False, {"degree": bound, "linear_section": "not Artinian"}
    return True, {"hf": hf}


def ci_lgt_certificate(forms, seed=0):
    """Groebner certificate that ``R/(f)`` is LG_t with ``t = max deg f_i``.

    Builds ``g_i = y_i^(d_i) - f_i`` in ``R[y_1..y_c]`` with lex order
    ``y_1 > .. > y_c > x_1 > .. > x_n`` and checks that the ``g_i`` already
    form a Groebner basis with leading terms ``y_i^(d_i)``.
    """
    if not forms:
        raise ValueError("no forms given")
    n, p = forms[0].n, forms[0].p
    if any(F.degree < 1 or F.is_zero() for F in forms):
        raise ValueError("forms must be nonzero of positive degree")
    ok, witness = _is_regular(forms, seed)
    if not ok:
        raise NotRegularSequence(f"not a regular sequence: {witness}")
    c = len(forms)
    degrees = [F.degree for F in forms]
    N = n + c
    g = []
    for i, F in enumerate(forms):
        f = {tuple(int(k == i) * F.degree for k in range(c)) + (0,) * n: 1}
        for e, coef in poly_from_form(F).items():
            f[(0,) * c + e] = (-coef) % p
        g.append(f)
    order = TermOrder("lex")
    gb = buchberger(g, order, N, p)
    expected_leads = [tuple(int(k == i) * degrees[i] for k in range(c)) + (0,) * n for i in range(c)]
    raw = GroebnerBasis(g, order, N, p, reduced=False)
    spairs_zero = raw.certify()
    same = sorted(map(_freeze, gb.polys)) == sorted(map(_freeze, g))
    t = max(degrees)
    passed = spairs_zero and same and sorted(gb.leads) == sorted(expected_leads)
    return {
        "degrees": degrees,
        "t": t,
        "rate": t - 1,
        "regular_sequence": True,
        "hf": witness["hf"],
        "leading_terms": [format_monomial(e[:c], "y") for e in gb.leads],
        "spairs_reduce_to_zero": spairs_zero,
        "generators_are_gb": same,
        "pass": passed,
    }


def _freeze(f):
    return tuple(sorted(f.items()))
