"""Command line entry point: ``cubicsep <subcommand> [options]``.

Exit status: 0 on success, 1 when a verification flag in the report is
false, 2 for invalid input or usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from functools import partial
from typing import Sequence

from .contfrac import AlgebraicReal, cf_expand, pair_parameters
from .exponents import region_report
from .funcfield import (
    KCFTemplate,
    chain_42,
    derive_riccati,
    distance_valuation,
    ff_approx_check,
    kcf_convergents,
    kcf_cubic,
    kcf_root,
    normalize_unit,
)
from .hall import hall_scan, merge_hall, merge_thue, thue_eval, thue_scan
from .laurent import T, PrecisionError
from .partition import run_partitioned
from .pell import closeness_exponents, family_member, verify_cf_pattern, verify_family_identity
from .polynomial import DomainError, as_fraction, parse_poly
from .report import NestedReportError, Report, serialize
from .roots import SURVEY_COLUMNS, merge_surveys, sep_survey

ENV_PREFIX = "CUBICSEP_"
GLOBAL_DEFAULTS = {"format": None, "out": "-", "workers": 1, "seed": None}
DEFAULT_FORMAT = {"survey": "csv", "hall": "csv", "thue": "csv", "dmap": "csv",
                  "cf": "json", "family": "json", "ff": "json"}


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--format", choices=["json", "csv"], **kw, help="output format")
    p.add_argument("--out", **kw, help="output file ('-' for stdout)")
    p.add_argument("--workers", type=_positive_int, **kw, help="worker processes for scans")
    p.add_argument("--seed", type=int, **kw, help="seed recorded in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubicsep", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    parser.set_defaults(**{k: None for k in GLOBAL_DEFAULTS})
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_globals(p, suppress=True)
        return p

    p = command("survey", "exhaustive root-separation survey of cubics")
    p.add_argument("--bmax", type=_positive_int, required=True)
    p.add_argument("--hmax", type=_positive_int, required=True)
    p.add_argument("--s", type=_rational, default=Fraction(0))
    p.add_argument("--t", type=_rational, default=Fraction(0))
    p.add_argument("--k", type=_positive_int, default=20, help="number of smallest records kept")
    p.add_argument("--bits", type=_positive_int, default=16, help="relative precision of sep")

    p = command("cf", "continued fraction of a real root")
    p.add_argument("--poly", required=True, help="coefficients a3,a2,a1,a0 (leading first)")
    p.add_argument("--root-lo", type=_rational, required=True)
    p.add_argument("--root-hi", type=_rational, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--pair", type=_rational, help="convergent p/q for the pair parameter checks")

    p = command("hall", "small values of |x^3 - y^2|")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--epsilon", type=_rational, default=Fraction(0))

    p = command("thue", "small values of binary cubic forms")
    p.add_argument("--amax", type=_positive_int, required=True)
    p.add_argument("--qmax", type=_positive_int, required=True)
    p.add_argument("--epsilon", type=_rational, required=True)

    p = command("family", "the Pell-built cubic family")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--verify-cf", action="store_true")
    p.add_argument("--verify-identity", action="store_true")
    p.add_argument("--closeness", action="store_true")

    p = command("dmap", "exponent region table over v in [2, 3]")
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--grid", type=int, required=True)

    p = command("ff", "function-field example and Riccati checks")
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--periods", type=_positive_int, required=True)
    p.add_argument("--tpower", type=_positive_int, default=1, help="substitute t -> t^m")
    p.add_argument("--terms", type=_positive_int, help="Newton series terms (default: automatic)")
    p.add_argument("--riccati", action="store_true")
    p.add_argument("--check-442", dest="check_442", action="store_true",
                   help="check the (4,2) lower bound chain at regular convergents")
    return parser


def _resolve_globals(args: argparse.Namespace, env) -> None:
    for name, default in GLOBAL_DEFAULTS.items():
        if getattr(args, name, None) is None:
            raw = env.get(ENV_PREFIX + name.upper())
            if raw is None:
                setattr(args, name, default)
            elif name in ("workers", "seed"):
                try:
                    setattr(args, name, int(raw))
                except ValueError as exc:
                    raise UsageError(f"{ENV_PREFIX}{name.upper()} must be an integer") from exc
            else:
                setattr(args, name, raw)
    if args.format is None:
        args.format = DEFAULT_FORMAT[args.command]
    if args.format not in ("json", "csv"):
        raise UsageError(f"unknown format {args.format!r}")
    if args.workers < 1:
        raise UsageError("workers must be positive")


# ---- subcommands ----


def cmd_survey(a) -> Report:
    params = {"bmax": a.bmax, "hmax": a.hmax, "s": a.s, "t": a.t, "k": a.k, "bits": a.bits}
    func = partial(sep_survey, k=a.k, precision_bits=a.bits)
    res = run_partitioned(func, (a.bmax, a.hmax, a.s, a.t), a.workers, merge_surveys, a.workers)
    records = [dict(zip(SURVEY_COLUMNS, r.row())) for r in sorted(res.records, key=lambda r: r.sort_key())]
    positive = res.min_sep_h2 is None or res.min_sep_h2.lo > 0
    summary = {"count": res.count, "min_score": res.min_score, "min_sep_h2": res.min_sep_h2,
               "checks": {"min_sep_h2_positive": positive}}
    return Report("survey", params, records, summary, columns=SURVEY_COLUMNS)


def cmd_cf(a) -> Report:
    if a.depth < 0:
        raise DomainError("depth must be nonnegative")
    P = parse_poly(a.poly)
    x = AlgebraicReal.from_window(P, a.root_lo, a.root_hi)
    cf = cf_expand(x, a.depth)
    ps, qs = cf.numerators, cf.denominators
    det_ok = all(ps[k - 1] * qs[k] - ps[k] * qs[k - 1] == (-1) ** k for k in range(1, len(ps)))
    params = {"poly": P, "root_lo": a.root_lo, "root_hi": a.root_hi, "depth": a.depth}
    record = {"partial_quotients": list(cf.partial_quotients), "convergents": list(cf.convergents)}
    checks = {"convergent_determinants": det_ok}
    if a.pair is not None:
        params["pair"] = a.pair
        pp = pair_parameters(x, a.pair)
        record["pair"] = {"A": pp.A, "B": pp.B, "n": pp.n, "q_next": pp.q_next, "flags": pp.flags}
        checks.update({f"pair_{k}": v for k, v in pp.flags.items()})
    return Report("cf", params, [record], {"checks": checks})


def cmd_hall(a) -> Report:
    recs = run_partitioned(hall_scan, (a.xmax, a.epsilon), a.workers, merge_hall, a.workers)
    cols = ["x", "y", "delta", "ratio_lo", "ratio_hi"]
    rows = [dict(zip(cols, (r.x, r.y, r.delta, r.ratio.lo, r.ratio.hi))) for r in recs]
    return Report("hall", {"xmax": a.xmax, "epsilon": a.epsilon}, rows, {"count": len(rows)}, columns=cols)


def cmd_thue(a) -> Report:
    scan = run_partitioned(thue_scan, (a.amax, a.qmax, a.epsilon), a.workers, merge_thue, a.workers)
    cols = ["a0", "a1", "a2", "a3", "p", "q", "value", "score_lo", "score_hi"]
    rows = []
    reverified = True
    for r in scan.records:
        reverified &= thue_eval(r.a, r.p, r.q) == r.value
        rows.append(dict(zip(cols, (*r.a, r.p, r.q, r.value, r.score.lo, r.score.hi))))
    m = scan.minimum
    minimum = None if m is None else {"a": list(m.a), "p": m.p, "q": m.q, "value": m.value, "score": m.score}
    summary = {"count": len(rows), "checked": scan.checked, "minimum": minimum,
               "checks": {"records_reverified": reverified}}
    params = {"amax": a.amax, "qmax": a.qmax, "epsilon": a.epsilon}
    return Report("thue", params, rows, summary, columns=cols)


def cmd_family(a) -> Report:
    records = []
    checks = {}
    identity = {c.n: c for c in verify_family_identity(a.n)} if a.verify_identity else {}
    closeness = {r.n: r for r in closeness_exponents(a.n)} if a.closeness else {}
    for n in range(1, a.n + 1):
        m = family_member(n)
        rec = {"n": n, "poly": m.poly, "approx": m.approx, "approx_gcd": m.approx_gcd,
               "A_n": m.A_n, "u": m.u, "v": m.v, "irreducible": m.irreducible,
               "scaled_value": m.scaled_value}
        member_checks = {"irreducible": m.irreducible}
        if n in identity:
            c = identity[n]
            member_checks["identity_abs_2"] = c.passed
            member_checks["root_product_contains_value"] = c.product_ok
        if a.verify_cf:
            pm = verify_cf_pattern(n)
            rec["cf_first_mismatch"] = pm.first_mismatch
            member_checks["cf_pattern"] = pm.full_match
        if n in closeness:
            r = closeness[n]
            rec["closeness_ratio"] = r.ratio
            rec["height_over_v"] = r.height_ratio
        rec["checks"] = member_checks
        records.append(rec)
        for k, v in member_checks.items():
            checks[k] = checks.get(k, True) and v
    if closeness:
        lo = min(r.ratio.lo for r in closeness.values())
        hi = max(r.ratio.hi for r in closeness.values())
        checks["closeness_spread_below_10"] = hi < 10 * lo
    params = {"n": a.n, "verify_cf": a.verify_cf, "verify_identity": a.verify_identity,
              "closeness": a.closeness}
    return Report("family", params, records, {"count": len(records), "checks": checks})


def cmd_dmap(a) -> Report:
    rows = region_report(a.epsilon, a.grid)
    cols = ["v", "outer_u", "inner_u", "provenance"]
    records = [dict(zip(cols, (r.v, r.outer_u, r.inner_u, r.provenance))) for r in rows]
    summary = {"count": len(records), "checks": {"inner_not_below_outer": all(r.consistent for r in rows)}}
    return Report("dmap", {"epsilon": a.epsilon, "grid": a.grid}, records, summary, columns=cols)


def cmd_ff(a) -> Report:
    r = T**a.tpower
    tmpl = KCFTemplate(a.c, r)
    P = kcf_cubic(tmpl)
    count = 4 * a.periods
    terms = a.terms or 24 + 16 * a.periods * a.tpower
    alpha = kcf_root(tmpl, terms)
    convs = kcf_convergents(tmpl, count)
    rows = []
    certified = True
    for k, (p, q) in enumerate(convs):
        d = distance_valuation(alpha, p, q)
        ok = d < -2 * q.degree
        certified &= ok
        rows.append({"k": k, "P": p, "Q": q, "distance_deg": d, "q_deg": q.degree, "convergent": ok})
    idx = [k for k in range(2, count + 1, 4)]
    approx = ff_approx_check(P, tmpl, idx, alpha)
    checks = {"kcf_convergents_certified": certified,
              "approx_inequality": all(x.passed for x in approx)}
    summary = {
        "cubic": str(P),
        "height_deg": P.height_degree,
        "series": str(alpha.truncate(alpha.top_degree - min(alpha.precision, 12))),
        "approx": [vars(x) for x in approx],
        "exponent_pairs": {"stated": "(3,2)", "derived_upper": "(4,2)", "necessary_u_at_least": "3",
                           "stated_equals_derived": False},
        "checks": checks,
    }
    if a.riccati:
        rr = derive_riccati(P)
        A, B, C, D = rr.coeffs.as_tuple()
        summary["riccati"] = {"A": A, "B": B, "C": C, "D": D, "max_deg": rr.coeffs.max_degree}
        residual = rr.coeffs.residual(alpha)
        checks["riccati_identity"] = rr.identity_ok
        checks["riccati_series"] = not residual.coeffs
        checks["riccati_height_bound"] = rr.bound_ok
    if a.check_442:
        norm = normalize_unit(P, alpha)
        chain = chain_42(norm.poly, norm.alpha, count)
        summary["chain_42"] = {"normalized_cubic": str(norm.poly), "steps": norm.steps,
                               "rows": [vars(x) for x in chain]}
        checks["chain_riccati_bound"] = all(x.riccati_bound_ok for x in chain)
        checks["chain_height_bound"] = all(x.height_bound_ok for x in chain)
    params = {"c": a.c, "periods": a.periods, "tpower": a.tpower, "terms": terms,
              "riccati": a.riccati, "check_442": a.check_442}
    return Report("ff", params, rows, summary)


COMMANDS = {"survey": cmd_survey, "cf": cmd_cf, "hall": cmd_hall, "thue": cmd_thue,
            "family": cmd_family, "dmap": cmd_dmap, "ff": cmd_ff}


def run(argv: Sequence[str] | None = None, env=None, stdout=None, stderr=None) -> int:
    env = os.environ if env is None else env
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        _resolve_globals(args, env)
        report = COMMANDS[args.command](args)
        if args.seed is not None:
            report.parameters["seed"] = args.seed
        data = serialize(report, args.format)
    except (UsageError, NestedReportError, DomainError, ValueError, PrecisionError) as exc:
        print(f"cubicsep {args.command}: error: {exc}", file=stderr)
        return 2
    if args.out in (None, "-"):
        out = getattr(stdout, "buffer", None)
        if out is not None:
            out.write(data)
            out.flush()
        else:
            stdout.write(data.decode("utf-8"))
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    return 1 if report.failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
