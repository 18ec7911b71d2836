"""Command-line interface.

Exit status: 0 when every check passes, 1 when a check fails, 2 for bad
input or configuration.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import _kernels
from .corpus import (
    ExperimentError,
    dump_report,
    find_experiment,
    lemma1_check,
    list_corpus,
    load_experiment,
    run_experiment,
    seed_sweep,
)
from .groebner import TermOrder, buchberger, ci_lgt_certificate, initial_ideal, rate_sandwich
from .inverse_system import (
    ArtinAlgebra,
    GradedIdeal,
    annihilator_ideal,
    generic_algebra,
    inverse_system_algebra,
    monomial_algebra,
)
from .linalg import DEFAULT_PRIME
from .monomial import default_splits, format_monomial_ideal, lemma1_even, lemma1_odd, parse_monomial_ideal
from .poincare import (
    betti_recursion,
    betti_series,
    compressed_shape,
    golod_inequality_check,
    poincare_formula_PS,
    rate_report,
    theorem_main_verdict,
)
from .resolution import TruncationUnsoundError, betti_K_over_A, format_betti, resolve_over_R
from .rings import format_form, parse_form

log = logging.getLogger("gorenstein_rate")


class InputError(ValueError):
    pass


# ------------------------------------------------------------------ parsing


def _common(p):
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--s", type=int, help="socle degree")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field characteristic (default %(default)s)")
    p.add_argument("--seed", type=int, default=1, help="seed for the random form (default %(default)s)")
    p.add_argument("--max-i", type=int, default=4, help="largest homological degree (default %(default)s)")
    p.add_argument("--max-deg", default="default", help="internal degree cap for resolutions of K ('all' for none)")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("-v", "--verbose", action="store_true")


def _algebra_inputs(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--form", help="dual form in y-variables; the algebra is its inverse-system quotient")
    g.add_argument("--ideal", action="append", metavar="FORM", help="ideal generator in x-variables (repeatable)")
    g.add_argument("--ideal-file", metavar="FILE", help="file with one x-form per line")
    g.add_argument("--monomial-file", metavar="FILE", help="monomial ideal, one monomial per line")


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def build_parser():
    parser = argparse.ArgumentParser(prog="gorenstein-rate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-generic", help="full report for the algebra of a seeded random form")
    _common(p)
    _algebra_inputs(p)

    p = sub.add_parser("lemma1", help="level monomial ideal with m(J) equal to the socle degree")
    _common(p)
    p.add_argument("--t", type=int, help="target socle degree (defaults to --s)")
    p.add_argument("--j", type=int, help="end of the first variable block")
    p.add_argument("--k", type=int, help="end of the second variable block (odd case)")
    p.add_argument("--print-ideal", action="store_true", help="include the generators in the report")

    p = sub.add_parser("annihilator", help="annihilator ideal of a dual form")
    _common(p)
    _algebra_inputs(p)

    for name, text in (
        ("resolve-k", "graded Betti numbers of the residue field over A"),
        ("betti-r", "graded Betti numbers of A over the polynomial ring"),
        ("poincare", "closed formula, recursion and engine for the Poincare series"),
        ("rate", "truncated rate with the upper-bound certificate"),
    ):
        p = sub.add_parser(name, help=text)
        _common(p)
        _algebra_inputs(p)
        if name == "poincare":
            p.add_argument("--golod", action="store_true", help="also compare with the Golod bound")

    p = sub.add_parser("groebner", help="reduced Groebner basis and initial ideal")
    _common(p)
    _algebra_inputs(p)
    p.add_argument("--order", choices=("lex", "degrevlex"), default="degrevlex")
    p.add_argument("--perm", help="variable ranking, 1-based, e.g. 2,1,3")
    p.add_argument("--ci", action="store_true", help="certify a complete intersection via y_i^d_i - f_i")
    p.add_argument("--sandwich", action="store_true", help="report m(I)-1 <= rate <= m(in(I))-1")

    p = sub.add_parser("sweep", help="rate verdict over a range of seeds")
    _common(p)
    p.add_argument("--seeds", default="1-20", help="e.g. 1-100 or 1,5,9 (default %(default)s)")
    p.add_argument("--min-pass", type=float, default=0.95, help="required pass rate (default %(default)s)")

    p = sub.add_parser("corpus", help="regression corpus")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    c = csub.add_parser("run", help="run corpus experiments")
    _common(c)
    c.add_argument("names", nargs="*", help="entry names or experiment.json paths (default: all)")
    c.add_argument("--corpus-dir", help="alternative corpus root")
    c.add_argument("--skip", action="append", default=[], help="entry to skip (repeatable)")
    c = csub.add_parser("list", help="list corpus entries")
    c.add_argument("--corpus-dir")
    c.add_argument("--format", choices=("json", "text"), default="text")
    c.add_argument("--out", metavar="FILE")
    c.add_argument("-v", "--verbose", action="store_true")
    return parser


# ------------------------------------------------------------------ inputs


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _ideal_forms(args):
    lines = args.ideal if args.ideal else [
        ln.split("#", 1)[0].strip() for ln in _read(args.ideal_file).splitlines()
    ]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("no ideal generators given")
    forms = [parse_form(ln, args.prime, args.n, side="x") for ln in lines]
    n = max(F.n for F in forms)
    if any(F.n != n for F in forms):
        forms = [parse_form(ln, args.prime, n, side="x") for ln in lines]
    return forms


def _j_max(args):
    v = args.max_deg
    if v in ("default", None):
        return "default"
    if v in ("all", "none"):
        return None
    try:
        return int(v)
    except ValueError as exc:
        raise InputError(f"--max-deg must be an integer, 'default' or 'all', got {v!r}") from exc


def load_algebra(args):
    """Algebra chosen by the input flags; a seeded random form by default."""
    if getattr(args, "form", None):
        F = parse_form(args.form, args.prime, args.n, side="y")
        return inverse_system_algebra(F)
    if getattr(args, "ideal", None) or getattr(args, "ideal_file", None):
        forms = _ideal_forms(args)
        return ArtinAlgebra(GradedIdeal.from_generators(forms[0].n, args.prime, forms))
    if getattr(args, "monomial_file", None):
        return monomial_algebra(parse_monomial_ideal(_read(args.monomial_file), args.n), args.prime)
    if args.n is None or args.s is None:
        raise InputError("give --n and --s (or --form / --ideal / --ideal-file / --monomial-file)")
    if args.n < 1 or args.s < 1:
        raise InputError("--n and --s must be positive")
    return generic_algebra(args.n, args.s, args.seed, args.prime)


# ---------------------------------------------------------------- commands


def _betti_block(table):
    return {"table": table.to_dict(), "text": format_betti(table)}


def cmd_analyze_generic(args):
    A = load_algebra(args)
    bR = resolve_over_R(A).betti
    v = theorem_main_verdict(A, args.max_i, _j_max(args))
    report = {"algebra": A.report(), "betti_R": _betti_block(bR), "verdict": v.to_dict()}
    return v.passed, report


def cmd_lemma1(args):
    m = args.n
    t = args.t if args.t is not None else args.s
    if m is None or t is None:
        raise InputError("give --n (number of variables m) and --t or --s (socle degree)")
    if t < 2:
        raise InputError("socle degree must be at least 2")
    parity = "even" if t % 2 == 0 else "odd"
    u = t // 2
    if args.j is None:
        splits = default_splits(m, parity == "odd")
    else:
        splits = (args.j,) if parity == "even" else (args.j, args.k if args.k is not None else default_splits(m, True)[1])
    ok, detail = lemma1_check(parity, m, u, splits)
    if args.print_ideal:
        J = lemma1_even(m, u, *splits) if parity == "even" else lemma1_odd(m, u, *splits)
        detail["generators"] = format_monomial_ideal(J).split()
    return ok, detail


def cmd_annihilator(args):
    if args.form:
        F = parse_form(args.form, args.prime, args.n, side="y")
        I = annihilator_ideal(F)
        A = ArtinAlgebra(I, form=F)
    else:
        A = load_algebra(args)
        I = A.ideal
    gens = [format_form(G) for G in I.generator_forms()]
    report = {"algebra": A.report(), "generators": gens}
    return True, report


def cmd_resolve_k(args):
    A = load_algebra(args)
    table = betti_K_over_A(A, args.max_i, _j_max(args))
    return True, {"algebra": A.report(), "betti_K": _betti_block(table), "t_values": [table.t(i) for i in range(args.max_i + 1)]}


def cmd_betti_r(args):
    A = load_algebra(args)
    res = resolve_over_R(A)
    return True, {"algebra": A.report(), "betti_R": _betti_block(res.betti)}


def cmd_poincare(args):
    A = load_algebra(args)
    N = args.max_i
    bR = resolve_over_R(A).betti
    engine = betti_series(betti_K_over_A(A, N, _j_max(args)), N)
    report = {"algebra": A.report(), "engine": engine.to_dict(), "engine_text": str(engine)}
    ok = True
    try:
        formula = poincare_formula_PS(bR, A.n, A.s, N)
        a, b = compressed_shape(bR, A.n, A.s)
        recursion = betti_recursion(a, b, A.n, A.s, N)
    except ValueError as exc:
        report["formula"] = f"not applicable: {exc}"
    else:
        ok = formula.coeffs == recursion.coeffs == engine.coeffs
        report.update(formula=formula.to_dict(), formula_text=str(formula), a=a, b=b, agree=ok)
    if args.golod:
        g = golod_inequality_check(engine, A.n, bR, N)
        report["golod"] = g.to_dict()
        ok = ok and g.nonnegative
    return ok, report


def cmd_rate(args):
    A = load_algebra(args)
    rep = rate_report(A, args.max_i, betti_K_over_A(A, args.max_i, _j_max(args)))
    return rep.bound_ok and rep.rate_truncated >= rep.rate_lower, {"algebra": A.report(), "rate": rep.to_dict()}


def cmd_groebner(args):
    if args.form or args.monomial_file or (not args.ideal and not args.ideal_file):
        A = load_algebra(args)
        forms = A.ideal.generator_forms()
        ideal = A.ideal
    else:
        forms = _ideal_forms(args)
        ideal = GradedIdeal.from_generators(forms[0].n, args.prime, forms)
    if args.ci:
        cert = ci_lgt_certificate(forms)
        return cert["pass"], {"certificate": cert}
    order = TermOrder.parse(args.order, args.perm)
    if order.perm is not None and len(order.perm) != forms[0].n:
        raise InputError(f"--perm must rank all {forms[0].n} variables")
    gb = buchberger(forms, order)
    J = initial_ideal(gb)
    report = {
        "order": order.name,
        "basis": [format_form(F) for F in gb.forms()],
        "initial_ideal": str(J),
        "certified": gb.certify(),
    }
    if args.sandwich:
        report["sandwich"] = rate_sandwich(ideal, [order]).to_dict()
    return report["certified"], report


def cmd_sweep(args):
    if args.n is None or args.s is None:
        raise InputError("sweep needs --n and --s")
    seeds = _parse_seeds(args.seeds)
    rep = seed_sweep(args.n, args.s, seeds, args.max_i, args.prime, _j_max(args))
    ok = rep["count"] == 0 or rep["pass_rate"] >= args.min_pass
    rep["min_pass"] = args.min_pass
    return ok, rep


def cmd_corpus(args):
    root = getattr(args, "corpus_dir", None)
    if args.corpus_command == "list":
        return True, {"entries": list_corpus(root)}
    names = args.names or [n for n in list_corpus(root) if n not in args.skip]
    reports = []
    for name in names:
        e = load_experiment(name) if Path(name).exists() else find_experiment(name, root)
        reports.append(run_experiment(e))
        log.info("%s: %s", e.name, "PASS" if reports[-1]["pass"] else "FAIL")
    summary = {
        "schema": 1,
        "results": [{"name": r["name"], "pass": r["pass"]} for r in reports],
        "reports": reports,
        "pass": all(r["pass"] for r in reports),
    }
    return summary["pass"], summary


COMMANDS = {
    "analyze-generic": cmd_analyze_generic,
    "lemma1": cmd_lemma1,
    "annihilator": cmd_annihilator,
    "resolve-k": cmd_resolve_k,
    "betti-r": cmd_betti_r,
    "poincare": cmd_poincare,
    "rate": cmd_rate,
    "groebner": cmd_groebner,
    "sweep": cmd_sweep,
    "corpus": cmd_corpus,
}


def _text(report):
    """Human-readable rendering: Betti triangles verbatim, the rest as key: value."""
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict) and "text" in val and "table" in val:
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in val["text"].splitlines())
        elif key.endswith("_text"):
            lines.append(f"{key[:-5]}: {val}")
        elif key == "reports":
            continue
        else:
            lines.append(dump_report({key: val}, "text").rstrip())
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    log.debug("linear algebra backend: %s", _kernels.backend_name())
    try:
        ok, report = COMMANDS[args.command](args)
    except (InputError, ExperimentError, TruncationUnsoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {**report, "pass": bool(ok)} if "pass" not in report else report
    text = json.dumps(report, sort_keys=True, indent=2) + "\n" if args.format == "json" else _text(report)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
