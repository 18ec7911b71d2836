"""Graded pieces of R = K[x_1..x_n] and its apolar partner B = K[y_1..y_n].

Every graded piece is expressed in the lexicographically descending monomial
basis returned by :func:`monomial_basis`; all matrices in the package use it.
R acts on B by partial differentiation, ``x_i o F = dF/dy_i``.
"""

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .linalg import DimensionError, matmul_mod

R_SIDE = "x"
B_SIDE = "y"


@lru_cache(maxsize=None)
def monomial_basis(n, d):
    """Exponent tuples of degree ``d`` in ``n`` variables, lex descending."""
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        out.extend((a,) + rest for rest in monomial_basis(n - 1, d - a))
    return tuple(out)


def basis_size(n, d):
    return comb(n + d - 1, d) if d >= 0 else 0


@lru_cache(maxsize=None)
def exponent_array(n, d):
    arr = np.array(monomial_basis(n, d), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def monomial_index(n, d):
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


@lru_cache(maxsize=None)
def product_index(n, d, e):
    """``table[a, b]`` is the index in degree d+e of ``basis_d[a] * basis_e[b]``."""
    idx = monomial_index(n, d + e)
    A, B = exponent_array(n, d), exponent_array(n, e)
    prods = (A[:, None, :] + B[None, :, :]).reshape(-1, n)
    table = np.fromiter((idx[tuple(m)] for m in prods.tolist()), dtype=np.int64, count=len(prods))
    table = table.reshape(len(A), len(B))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _derivative_weights(n, e, r, p):
    # w[a, g] = prod_i (a_i + g_i)! / g_i!  for a in R_e, g in B_r
    A, G = exponent_array(n, e), exponent_array(n, r)
    top = e + r
    fact = [1] * (top + 1)
    for k in range(1, top + 1):
        fact[k] = fact[k - 1] * k
    w = np.ones((len(A), len(G)), dtype=object)
    for i in range(n):
        num = np.array([fact[v] for v in range(top + 1)], dtype=object)
        w = w * (num[A[:, i][:, None] + G[None, :, i]] // num[G[None, :, i]])
    out = (w % p).astype(np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Form:
    """A homogeneous polynomial stored as coefficients over ``monomial_basis(n, degree)``."""

    n: int
    degree: int
    coeffs: np.ndarray
    p: int
    side: str = R_SIDE

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64).reshape(-1) % self.p
        if c.shape[0] != basis_size(self.n, self.degree):
            raise DimensionError(
                f"form of degree {self.degree} in {self.n} variables needs "
                f"{basis_size(self.n, self.degree)} coefficients, got {c.shape[0]}"
            )
        if self.side not in (R_SIDE, B_SIDE):
            raise ValueError(f"unknown ring side {self.side!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n, degree, p, side=R_SIDE):
        return cls(n, degree, np.zeros(basis_size(n, degree), dtype=np.int64), p, side)

    @classmethod
    def monomial(cls, exps, p, side=R_SIDE, coeff=1):
        n, d = len(exps), sum(exps)
        c = np.zeros(basis_size(n, d), dtype=np.int64)
        c[monomial_index(n, d)[tuple(exps)]] = coeff
        return cls(n, d, c, p, side)

    def is_zero(self):
        return not self.coeffs.any()

    def terms(self):
        basis = monomial_basis(self.n, self.degree)
        return [(int(c), basis[i]) for i, c in enumerate(self.coeffs) if c]

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (
            (self.n, self.degree, self.p, self.side) == (other.n, other.degree, other.p, other.side)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.n, self.degree, self.p, self.side, self.coeffs.tobytes()))

    def __add__(self, other):
        _check_compatible(self, other)
        if self.degree != other.degree:
            raise DimensionError("cannot add forms of different degrees")
        return Form(self.n, self.degree, (self.coeffs + other.coeffs) % self.p, self.p, self.side)

    def scale(self, c):
        return Form(self.n, self.degree, self.coeffs * (c % self.p) % self.p, self.p, self.side)

    def __mul__(self, other):
        _check_compatible(self, other)
        d, e = self.degree, other.degree
        out = np.zeros(basis_size(self.n, d + e), dtype=np.int64)
        table = product_index(self.n, d, e)
        outer = np.outer(self.coeffs, other.coeffs) % self.p
        np.add.at(out, table.reshape(-1), outer.reshape(-1))
        return Form(self.n, d + e, out % self.p, self.p, self.side)

    def __str__(self):
        return format_form(self)


def _check_compatible(F, G):
    if F.n != G.n:
        raise DimensionError(f"forms live in {F.n} and {G.n} variables")
    if F.p != G.p:
        raise ValueError(f"forms live over F_{F.p} and F_{G.p}")


@dataclass(frozen=True)
class GradedPieceMap:
    """Linear map between graded pieces; ``matrix`` has one column per source basis vector."""

    source_degree: int
    target_degree: int
    matrix: np.ndarray = field(repr=False)


def contract(G, F):
    """Apply the differential operator ``G`` (R-side) to ``F`` (B-side)."""
    if G.n != F.n:
        raise DimensionError(f"operator in {G.n} variables cannot act on a form in {F.n}")
    if F.p <= F.degree:
        raise ValueError(f"characteristic {F.p} must exceed the degree {F.degree} of the form")
    e, s = G.degree, F.degree
    if e > s:
        return Form.zero(F.n, 0, F.p, B_SIDE)
    cat = catalecticant_matrix(F, e).matrix
    out = matmul_mod(cat, G.coeffs.reshape(-1, 1), F.p).reshape(-1)
    return Form(F.n, s - e, out, F.p, B_SIDE)


def catalecticant_matrix(F, e):
    """Matrix of ``R_e -> B_{s-e}``, ``G -> G o F`` (column j is ``basis_e[j] o F``)."""
    n, s, p = F.n, F.degree, F.p
    if not 0 <= e <= s:
        raise ValueError(f"degree {e} outside 0..{s}")
    r = s - e
    idx = product_index(n, e, r)  # (N_e, N_r)
    w = _derivative_weights(n, e, r, p)
    cols = F.coeffs[idx] * w % p  # cols[a, g]: coefficient of y^g in x^a o F
    return GradedPieceMap(e, r, np.ascontiguousarray(cols.T))


def product_rows(V, n, d, e, p):
    """Rows ``v * m`` for each row ``v`` of ``V`` (degree d) and monomial ``m`` of degree e.

    Output rows are ordered vector-major, then monomial.
    """
    V = np.asarray(V, dtype=np.int64).reshape(-1, basis_size(n, d))
    Nt = basis_size(n, d + e)
    Ne = basis_size(n, e)
    out = np.zeros((V.shape[0] * Ne, Nt), dtype=np.int64)
    if V.shape[0] == 0:
        return out
    table = product_index(n, d, e)
    rows = np.arange(V.shape[0])[:, None] * Ne
    for m in range(Ne):
        out[rows + m, table[:, m][None, :]] = V
    return out % p


def multiplication_map(forms, e, n=None, p=None):
    """Map ``V (x) R_e -> R_{d+e}`` whose image spans ``{v m}``; columns are products."""
    forms = list(forms)
    if not forms:
        if n is None or p is None:
            return GradedPieceMap(0, e, np.zeros((0, 0), dtype=np.int64))
        return GradedPieceMap(0, e, np.zeros((basis_size(n, e), 0), dtype=np.int64))
    degs = {f.degree for f in forms}
    if len(degs) != 1:
        raise DimensionError(f"forms of mixed degrees {sorted(degs)}")
    f0 = forms[0]
    for f in forms[1:]:
        _check_compatible(f0, f)
    d = f0.degree
    V = np.vstack([f.coeffs for f in forms])
    return GradedPieceMap(d, d + e, np.ascontiguousarray(product_rows(V, f0.n, d, e, f0.p).T))


# ---------------------------------------------------------------- text format

_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^([xy])(\d+)(?:\^(\d+))?$")


def parse_monomial(text, n=None):
    """Parse ``x1^a1*...*xn^an`` (or ``1``) into (letter, exponent tuple)."""
    letter, exps = None, {}
    text = text.strip()
    if text in ("", "1"):
        return letter, _expand({}, n)
    for factor in text.split("*"):
        factor = factor.strip()
        m = _FACTOR.match(factor)
        if not m:
            raise ValueError(f"cannot parse factor {factor!r}")
        if letter is not None and m.group(1) != letter:
            raise ValueError("a monomial cannot mix x and y variables")
        letter = m.group(1)
        i = int(m.group(2))
        if i < 1:
            raise ValueError("variables are numbered from 1")
        exps[i] = exps.get(i, 0) + int(m.group(3) or 1)
    return letter, _expand(exps, n)


def _expand(exps, n):
    top = max(exps, default=0)
    if n is None:
        n = max(top, 1)
    if top > n:
        raise ValueError(f"variable index {top} exceeds n={n}")
    return tuple(exps.get(i, 0) for i in range(1, n + 1))


def parse_terms(text):
    """Split a polynomial string into (coefficient, monomial text) pairs."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    terms = []
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        head, _, rest = body.partition("*")
        if head.isdigit():
            coeff, mono = int(head), rest
        else:
            coeff, mono = 1, body
        terms.append((sign * coeff, mono))
    if pos != len(text):
        raise ValueError(f"cannot parse {text!r}")
    return terms


def parse_form(text, p, n=None, side=None):
    """Read a homogeneous form from the ``c*x1^a1*...*xn^an`` text syntax."""
    raw = [(c, parse_monomial(m)) for c, m in parse_terms(text)]
    letters = {letter for _, (letter, _) in raw if letter is not None}
    if len(letters) > 1:
        raise ValueError("a form cannot mix x and y variables")
    letter = letters.pop() if letters else (side or R_SIDE)
    if side is not None and letter != side:
        raise ValueError(f"expected {side}-variables, got {letter}")
    width = max(len(e) for _, (_, e) in raw)
    if n is None:
        n = width
    if width > n:
        raise ValueError(f"form uses {width} variables but n={n}")
    monos = [(c, e + (0,) * (n - len(e))) for c, (_, e) in raw]
    degs = {sum(e) for _, e in monos}
    if len(degs) != 1:
        raise ValueError(f"form is not homogeneous (degrees {sorted(degs)})")
    d = degs.pop()
    coeffs = np.zeros(basis_size(n, d), dtype=np.int64)
    idx = monomial_index(n, d)
    for c, e in monos:
        coeffs[idx[e]] = (coeffs[idx[e]] + c) % p
    return Form(n, d, coeffs, p, letter)


def format_monomial(exps, letter=R_SIDE):
    parts = [f"{letter}{i + 1}^{a}" for i, a in enumerate(exps) if a]
    return "*".join(parts) if parts else "1"


def format_form(F):
    terms = F.terms()
    if not terms:
        return "0"
    out = []
    for c, e in terms:
        mono = format_monomial(e, F.side)
        out.append(f"{c}*{mono}" if mono != "1" else str(c))
    return " + ".join(out)
