"""Truncated bivariate power series, Poincare series formulas and rate certificates.

A series in ``u`` is a list of coefficients ``beta_0(v), beta_1(v), ...``
where each coefficient is a tuple of Python ints (index = power of v).  All
arithmetic is exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .inverse_system import is_compressed
from .resolution import BettiTable, betti_K_over_A, t_vector

# --------------------------------------------------------------- polynomials in v


def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_sub(a, b):
    return poly_add(a, tuple(-x for x in b))


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def monomial_v(c, k):
    return poly_trim((0,) * k + (c,))


def poly_degree(a):
    """Degree in v; ``None`` for the zero polynomial."""
    a = poly_trim(a)
    return len(a) - 1 if a else None


def format_poly(a):
    terms = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        mono = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono:
            terms.append(f"{c}{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# ---------------------------------------------------------------- series in u


@dataclass
class SeriesTruncation:
    """``sum_{i <= N} coeffs[i](v) u^i``; ``v_max`` bounds the trusted v-degrees."""

    N: int
    coeffs: list
    v_max: int = None

    def __post_init__(self):
        cs = [poly_trim(c) for c in self.coeffs[: self.N + 1]]
        cs += [()] * (self.N + 1 - len(cs))
        self.coeffs = cs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i <= self.N else ()

    def coeff(self, i, j):
        c = self[i]
        return c[j] if 0 <= j < len(c) else 0

    def truncate_v(self, v_max):
        return SeriesTruncation(self.N, [c[: v_max + 1] for c in self.coeffs], v_max)

    def __eq__(self, other):
        if not isinstance(other, SeriesTruncation):
            return NotImplemented
        N = min(self.N, other.N)
        return all(self[i] == other[i] for i in range(N + 1))

    def to_dict(self):
        out = {
            "N": self.N,
            "coeffs": [[[j, c] for j, c in enumerate(p) if c] for p in self.coeffs],
        }
        if self.v_max is not None:
            out["v_max"] = self.v_max
        return out

    @classmethod
    def from_dict(cls, d):
        coeffs = []
        for terms in d["coeffs"]:
            p = [0] * (max((j for j, _ in terms), default=-1) + 1)
            for j, c in terms:
                p[j] = c
            coeffs.append(tuple(p))
        return cls(d["N"], coeffs, d.get("v_max"))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({format_poly(c)}) u^{i}")
        return " + ".join(parts) if parts else "0"


def _coeff_list(x, N):
    if isinstance(x, SeriesTruncation):
        x = x.coeffs
    x = [poly_trim(c) for c in x[: N + 1]]
    return x + [()] * (N + 1 - len(x))


def series_mul(a, b, N):
    a, b = _coeff_list(a, N), _coeff_list(b, N)
    out = [()] * (N + 1)
    for i in range(N + 1):
        if not a[i]:
            continue
        for k in range(N + 1 - i):
            if b[k]:
                out[i + k] = poly_add(out[i + k], poly_mul(a[i], b[k]))
    return SeriesTruncation(N, out)


def series_invert_and_multiply(numerator, denominator, N):
    """``numerator / denominator`` to order ``N`` in u.

    The denominator must have constant term 1 (as a polynomial in v).
    """
    num, den = _coeff_list(numerator, N), _coeff_list(denominator, N)
    if den[0] != (1,):
        raise ValueError(f"denominator constant term must be 1, got {format_poly(den[0])}")
    inv = [()] * (N + 1)
    inv[0] = (1,)
    for i in range(1, N + 1):
        acc = ()
        for k in range(1, i + 1):
            if den[k] and inv[i - k]:
                acc = poly_add(acc, poly_mul(den[k], inv[i - k]))
        inv[i] = tuple(-c for c in acc)
    return series_mul(num, inv, N)


def koszul_numerator(n, N):
    """``(1 + uv)^n`` truncated at ``N``."""
    return SeriesTruncation(N, [monomial_v(comb(n, i), i) for i in range(N + 1)])


def betti_series(table, N=None):
    """Poincare series ``sum beta_{i,j} u^i v^j`` of a Betti table."""
    if N is None:
        N = table.max_i
    coeffs = [()] * (N + 1)
    for (i, j), c in table.entries.items():
        if i <= N and c:
            coeffs[i] = poly_add(coeffs[i], monomial_v(c, j))
    v_max = table.j_max if not table.complete else None
    return SeriesTruncation(N, coeffs, v_max)


# ---------------------------------------------------------------- formulas


def _check_gorenstein_table(table, n, s):
    if not table.complete:
        raise ValueError("a complete Betti table over R is required")
    if s < 2 or s == 3:
        raise ValueError(f"socle degree s={s} is excluded by the closed formula (need 2 <= s != 3)")
    if table.row(n) != {n + s: 1}:
        raise ValueError(f"top Betti row {table.row(n)} is not R(-{n + s}): not Gorenstein of socle degree {s}")


def poincare_formula_PS(betti_R, n, s, N):
    """``P^A_K = (1+uv)^n / (1 - u(P^R_A - 1) + u^(n+1) v^(n+s) (1+u))`` to order N."""
    _check_gorenstein_table(betti_R, n, s)
    PR = betti_series(betti_R, N)
    den = [()] * (N + 1)
    den[0] = (1,)
    for i in range(1, N + 1):
        den[i] = tuple(-c for c in PR[i - 1]) if i >= 2 else ()
    for i in (n + 1, n + 2):
        if i <= N:
            den[i] = poly_add(den[i], monomial_v(1, n + s))
    return series_invert_and_multiply(koszul_numerator(n, N), den, N)


def compressed_shape(betti_R, n, s):
    """``(a, b)`` with ``a_j = beta_{j,t+j-1}``, ``b_j = beta_{j,t+j}``, ``t = s//2 + 1``.

    Raises when rows 1..n-1 have entries outside those two strands.
    """
    t = s // 2 + 1
    a, b = [], []
    for j in range(1, n):
        row = betti_R.row(j)
        extra = {k: c for k, c in row.items() if k not in (t + j - 1, t + j)}
        if extra:
            raise ValueError(f"row {j} has entries {extra} outside degrees {t + j - 1}, {t + j}")
        a.append(row.get(t + j - 1, 0))
        b.append(row.get(t + j, 0))
    return a, b


def betti_recursion(a, b, n, s, N):
    """Coefficients of ``P^A_K`` from the strand data ``a``, ``b`` by clearing denominators.

    ``beta_i = C(n,i) v^i + sum_j beta_{i-j-1} (a_j + b_j v) v^(t+j-1) - beta_{i-n-2} v^(n+s)``.
    """
    if len(a) != n - 1 or len(b) != n - 1:
        raise ValueError(f"expected {n - 1} values in a and b")
    if any(x < 0 for x in list(a) + list(b)):
        raise ValueError("strand multiplicities must be nonnegative")
    t = s // 2 + 1
    beta = []
    for i in range(N + 1):
        acc = monomial_v(comb(n, i), i)
        for j in range(1, min(i - 1, n - 1) + 1):
            acc = poly_add(acc, poly_mul(beta[i - j - 1], poly_trim((0,) * (t + j - 1) + (a[j - 1], b[j - 1]))))
        if i >= n + 2:
            acc = poly_sub(acc, poly_mul(beta[i - n - 2], monomial_v(1, n + s)))
        beta.append(acc)
    return SeriesTruncation(N, beta)


# --------------------------------------------------------------------- rate


@dataclass(frozen=True)
class RateValue:
    value: Fraction
    witness: int


def rate_truncated(t_values, i_max=None):
    """``max_{2 <= i <= i_max} (t_i - 1)/(i - 1)`` and the first index attaining it."""
    if i_max is None:
        i_max = len(t_values) - 1
    if i_max < 2:
        raise ValueError("the rate needs t_i for some i >= 2")
    best = None
    for i in range(2, i_max + 1):
        if i >= len(t_values) or t_values[i] is None:
            raise ValueError(f"t_{i} is not available")
        r = Fraction(t_values[i] - 1, i - 1)
        if best is None or r > best.value:
            best = RateValue(r, i)
    return best


def rate_bound_check(t_values, m_I):
    """``t_i <= (m_I - 1)(i - 1) + 1`` for every available ``i >= 1``."""
    return all(t is None or t <= (m_I - 1) * (i - 1) + 1 for i, t in enumerate(t_values) if i >= 1)


@dataclass
class RateReport:
    i_max: int
    t_values: list
    rate_lower: int
    rate_truncated: Fraction
    witness_i: int
    bound_ok: bool

    def to_dict(self):
        return {
            "i_max": self.i_max,
            "t_values": self.t_values,
            "rate_lower": self.rate_lower,
            "rate_truncated": _fraction_json(self.rate_truncated),
            "witness_i": self.witness_i,
            "bound_ok": self.bound_ok,
        }


def _fraction_json(x):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rate_report(A, i_max, table=None):
    if table is None:
        table = betti_K_over_A(A, i_max)
    t = t_vector(table, i_max)
    m = A.ideal.max_gen_degree()
    r = rate_truncated(t, i_max)
    return RateReport(i_max, t, m - 1, r.value, r.witness, rate_bound_check(t, m))


# ------------------------------------------------------------------- Golod


@dataclass
class GolodReport:
    N: int
    slack: dict
    nonnegative: bool
    equality: bool
    rhs: SeriesTruncation = field(repr=False)

    def to_dict(self):
        return {
            "N": self.N,
            "nonnegative": self.nonnegative,
            "equality": self.equality,
            "slack": [[i, j, c] for (i, j), c in sorted(self.slack.items()) if c],
            "rhs": self.rhs.to_dict(),
        }


def golod_bound(n, betti_R, N):
    """``(1+uv)^n / (1 - u(P^R_A - 1))`` to order N."""
    PR = betti_series(betti_R, N)
    den = [(1,)] + [tuple(-c for c in PR[i - 1]) if i >= 2 else () for i in range(1, N + 1)]
    return series_invert_and_multiply(koszul_numerator(n, N), den, N)


def golod_inequality_check(P_A_K, n, betti_R, N):
    """Compare ``P^A_K`` coefficientwise with the Golod bound.

    When ``P_A_K`` is only trusted up to ``v_max`` the comparison stops there.
    """
    if isinstance(P_A_K, BettiTable):
        P_A_K = betti_series(P_A_K, N)
    rhs = golod_bound(n, betti_R, N)
    slack = {}
    for i in range(N + 1):
        top = max(len(rhs[i]), len(P_A_K[i]))
        if P_A_K.v_max is not None:
            top = min(top, P_A_K.v_max + 1)
        for j in range(top):
            slack[(i, j)] = rhs.coeff(i, j) - P_A_K.coeff(i, j)
    return GolodReport(
        N=N,
        slack=slack,
        nonnegative=all(c >= 0 for c in slack.values()),
        equality=all(c == 0 for c in slack.values()),
        rhs=rhs,
    )


# ----------------------------------------------------------------- verdicts


@dataclass
class Verdict:
    params: dict
    m_I: int
    t_values: list
    rate: Fraction
    bound_ok: bool
    witness_i: int
    passed: bool
    checks: dict
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "params": self.params,
            "m_I": self.m_I,
            "t_values": self.t_values,
            "rate": _fraction_json(self.rate),
            "bound_ok": self.bound_ok,
            "witness_i": self.witness_i,
            "pass": self.passed,
            "checks": self.checks,
            "evidence": self.evidence,
        }


def _params(A, i_max):
    out = {"n": A.n, "s": A.s, "p": A.p, "i_max": i_max}
    if getattr(A, "seed", None) is not None:
        out["seed"] = A.seed
    return out


def _common_evidence(A):
    degs = A.ideal.generator_degrees()
    return {
        "hf": list(A.hf_vector),
        "compressed": A.hf_vector[-1] == 1 and is_compressed(A),
        "generator_degrees": {str(d): c for d, c in sorted(degs.items())},
        "num_generators": sum(degs.values()),
    }


def theorem_main_verdict(A, i_max, j_max="default"):
    """Finite certificate for ``rate(A) = floor(s/2)``.

    The witness ``i = 2`` gives the lower bound ``t_2 - 1 = m(I) - 1``; the
    upper bound ``t_i <= (m(I)-1)(i-1) + 1`` is checked for every computed i.
    Three-variable algebras of odd socle degree are routed to
    :func:`n3_parity_verdict`.
    """
    if A.n == 3 and A.s % 2 == 1 and A.s >= 5:
        return n3_parity_verdict(A, i_max, j_max)
    return _generic_verdict(A, i_max, j_max)


def _generic_verdict(A, i_max, j_max):
    s = A.s
    table = betti_K_over_A(A, i_max, j_max)
    rep = rate_report(A, i_max, table)
    m = A.ideal.max_gen_degree()
    expected = s // 2
    ev = _common_evidence(A)
    checks = {
        "compressed": ev["compressed"],
        "m_I": m == expected + 1,
        "rate": rep.rate_truncated == expected,
        "witness_i": rep.witness_i == 2,
        "bound": rep.bound_ok,
    }
    if s == 3:
        checks["koszul"] = all(rep.t_values[i] == i for i in range(2, i_max + 1))
    ev["expected_rate"] = expected
    ev["betti_K"] = table.to_dict()
    return Verdict(
        params=_params(A, i_max),
        m_I=m,
        t_values=rep.t_values,
        rate=rep.rate_truncated,
        bound_ok=rep.bound_ok,
        witness_i=rep.witness_i,
        passed=all(checks.values()),
        checks=checks,
        evidence=ev,
    )


def n3_parity_verdict(A, i_max, j_max="default"):
    """Three variables, odd socle degree ``s = 2t - 1 >= 5``.

    Expect ``m(I) = t`` for even t and ``t + 1`` for odd t, an odd number of
    minimal generators and rate ``m(I) - 1``.  Even socle degree falls back
    to the generic check.
    """
    if A.s % 2 == 0:
        return _generic_verdict(A, i_max, j_max)
    if A.n != 3 or A.s < 5:
        raise ValueError(f"expected n = 3 and odd s >= 5, got n={A.n}, s={A.s}")
    t = (A.s + 1) // 2
    expected_m = t if t % 2 == 0 else t + 1
    table = betti_K_over_A(A, i_max, j_max)
    rep = rate_report(A, i_max, table)
    m = A.ideal.max_gen_degree()
    ev = _common_evidence(A)
    checks = {
        "compressed": ev["compressed"],
        "m_I": m == expected_m,
        "odd_generator_count": ev["num_generators"] % 2 == 1,
        "rate": rep.rate_truncated == expected_m - 1,
        "witness_i": rep.witness_i == 2,
        "bound": rep.bound_ok,
    }
    if t % 2 == 1:
        checks["generator_degrees"] = sorted(A.ideal.generator_degrees()) == [t, t + 1]
    ev["expected_rate"] = expected_m - 1
    ev["betti_K"] = table.to_dict()
    return Verdict(
        params=_params(A, i_max),
        m_I=m,
        t_values=rep.t_values,
        rate=rep.rate_truncated,
        bound_ok=rep.bound_ok,
        witness_i=rep.witness_i,
        passed=all(checks.values()),
        checks=checks,
        evidence=ev,
    )
