"""Command-line interface: ``redeilab <command> ...``.

Commands::

    classify   --p P [--strategy naive|rootsets] [--scan-lower-degrees] [--range-sum-multiple K]
    charsum    {paley,weil,cells,minint,scan} --p P ...
    directions {analyze,ls,census,check} [--p P] [--points FILE] [--random N]
    fourier    --p P (--ls | --points FILE) [--oracle]
    poly       'p=7; coeffs=[1,0,0,1]'

Shared options: ``--seed`` (recorded verbatim), ``--threads`` (overridden by
the ``REDEILAB_THREADS`` environment variable), ``--budget``, ``--out``,
``--format json|csv``, ``--mode assert|report`` and ``--no-timing`` (zeroes
every wall-clock field so that repeated runs are byte-identical).

Polynomial text format, one line::

    p=<prime>; coeffs=[a0,a1,...,ad]

Coefficients are integers in ascending degree (a0 first) and are reduced
mod p.  ``coeffs=[]`` is the zero polynomial.

Point files hold a ``p=<prime>`` header followed by one ``x,y`` pair per
line; ``#`` starts a comment.

Exit status: 0 ok, 1 an asserted check failed, 2 usage error (including a
non-prime p or malformed input), 3 candidate budget exceeded.  In
``--mode report`` failed checks are recorded in the output but exit 0.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import charsum, classify as cls_mod, fourier, geometry
from .field import FieldError, is_prime, prime_ctx
from .poly import (format_polynomial, parse_polynomial, power_sum_identity_check,
                   range_profile)

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Outcome:
    """What a command hands back: the JSON result, CSV rows and failed checks."""

    def __init__(self, result: dict, rows: list[dict] | None = None):
        self.result = result
        self.rows = rows if rows is not None else [_flat(result)]
        self.failures: list[str] = []

    def expect(self, ok, label: str):
        if not ok:
            self.failures.append(label)


def _flat(d: dict) -> dict:
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
            for k, v in d.items()}


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p={text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"p={p} is not prime")
    if p == 2:
        raise argparse.ArgumentTypeError("p=2 is excluded; p must be an odd prime")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _threads(args) -> int:
    env = os.environ.get("REDEILAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"REDEILAB_THREADS={env!r} is not an integer") from None
    return max(1, args.threads)


def _need_p(args):
    if args.p is None:
        raise UsageError("--p is required")
    return prime_ctx(args.p)


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> Outcome:
    ctx = _need_p(args)
    k = args.range_sum_multiple
    if k < 1:
        raise UsageError("--range-sum-multiple must be >= 1")
    strategy = args.strategy or ("naive" if k != 1 else "rootsets")
    kw = {"budget": args.budget, "scan_lower_degrees": args.scan_lower_degrees}
    if strategy == "naive":
        kw["range_sum_multiple"] = k
    elif k != 1:
        raise UsageError("--range-sum-multiple needs --strategy naive")
    else:
        kw["workers"] = _threads(args)
    res = cls_mod.classify(ctx, strategy, **kw)
    d = res.to_dict(timing=not args.no_timing)
    d["families_present"] = sorted({o.family for o in res.orbits} - {cls_mod.OTHER})
    if k == 1:
        d["lc_findings"] = [o.to_dict()["coeffs"] for o in res.orbits if not o.checks.get("lc_class", True)]
    rows = [_flat(dict(o.to_dict(), p=res.p)) for o in res.orbits]
    out = Outcome(d, rows)
    if k == 1:
        out.expect(res.checks_pass(), "orbit structural checks")
        out.expect(not res.lower_degree_hits, "no range-sum-p polynomial below degree (p-1)/2")
    return out


# ---------------------------------------------------------------------------
# charsum


def cmd_paley(args) -> Outcome:
    ctx = _need_p(args)
    classes = ("QR", "QNR") if args.gamma_class == "both" else (args.gamma_class,)
    result, rows = {"p": ctx.p, "op": "paley", "tables": {}}, []
    ok = True
    for c in classes:
        tab = charsum.paley_table(ctx, c, all_representatives=True)
        closed = charsum.paley_closed_form(ctx.p, c)
        printed = charsum.paley_printed_form(ctx.p, c)
        entry = {
            "counts": {_pattern(k): v for k, v in tab.counts.items()},
            "closed_form": {_pattern(k): v for k, v in closed.items()},
            "matches_closed_form": tab.counts == closed,
            "matches_printed_table": tab.counts == printed,
            "representatives_checked": tab.representatives_checked,
        }
        ok &= entry["matches_closed_form"]
        result["tables"][c] = entry
        for key, v in tab.counts.items():
            rows.append({"p": ctx.p, "gamma_class": c, "pattern": _pattern(key), "count": v,
                         "closed_form": closed[key], "printed": printed[key]})
    out = Outcome(result, rows)
    out.expect(ok, "Paley counts equal the closed form")
    return out


def _pattern(v) -> str:
    return "".join("+" if e == 1 else "-" for e in v)


def cmd_weil(args) -> Outcome:
    ctx = _need_p(args)
    shifts = args.shifts if args.shifts is not None else [0]
    try:
        rep = charsum.weil_sign_patterns(ctx, shifts, enforce_premise=False)
    except ValueError as e:
        raise UsageError(str(e)) from None
    result = {
        "p": ctx.p, "op": "weil", "shifts": list(rep.shifts), "m": len(rep.shifts),
        "premise": rep.premise, "bound": rep.bound,
        "counts": {_pattern(v): n for v, n in rep.counts.items()},
        "holds": {_pattern(v): h for v, h in rep.holds.items()},
        "all_hold": rep.all_hold,
    }
    rows = [{"p": ctx.p, "pattern": _pattern(v), "count": n, "bound": rep.bound,
             "holds": rep.holds[v], "premise": rep.premise} for v, n in rep.counts.items()]
    out = Outcome(result, rows)
    if rep.premise:
        out.expect(rep.all_hold, "sign-pattern bound")
    return out


def cmd_cells(args) -> Outcome:
    ctx = _need_p(args)
    shifts = args.shifts if args.shifts is not None else [0]
    try:
        rep = charsum.translate_cell_sizes(ctx, shifts)
    except ValueError as e:
        raise UsageError(str(e)) from None
    label = lambda I: ",".join(map(str, I)) or "-"
    result = {
        "p": ctx.p, "op": "cells", "shifts": list(rep.shifts), "bound": rep.bound,
        "sizes": {label(I): n for I, n in rep.sizes.items()},
        "all_hold": rep.all_hold,
    }
    rows = [{"p": ctx.p, "cell": label(I), "size": n, "bound": rep.bound, "holds": rep.holds[I]}
            for I, n in rep.sizes.items()]
    out = Outcome(result, rows)
    out.expect(rep.all_hold, "translate cell bound")
    return out


def _minint_dict(r: charsum.MinIntersection) -> dict:
    return {"lhs": r.lhs, "rhs": str(r.rhs), "rhs_float": float(r.rhs), "holds": r.holds,
            "argmin": r.argmin, "union_sizes": {str(k): v for k, v in r.union_sizes.items()}}


def cmd_minint(args) -> Outcome:
    ctx = _need_p(args)
    shifts = args.shifts if args.shifts is not None else list(range(1, 9))
    if not 1 <= args.r_hat <= len(shifts):
        raise UsageError("--r-hat must lie in [1, number of shifts]")
    result: dict = {"p": ctx.p, "op": "minint", "r_hat": args.r_hat, "shifts": shifts}
    rows = []
    try:
        s = charsum.structured_instance(ctx, tuple(shifts), args.r_hat)
        result["structured"] = _minint_dict(s)
        rows.append({"p": ctx.p, "instance": "structured", **_flat(_minint_dict(s))})
    except charsum.PremiseError as e:
        s = None
        result["structured"] = {"proviso": False, "reason": str(e)}
    rng = np.random.default_rng(args.seed)
    randoms = []
    for i in range(args.random):
        r = charsum.random_minint_instance(ctx, rng, t=len(shifts), r_hat=args.r_hat)
        randoms.append(_minint_dict(r))
        rows.append({"p": ctx.p, "instance": f"random-{i}", **_flat(_minint_dict(r))})
    result["random"] = randoms
    result["eight_translates"] = {"proviso": charsum.eight_translate_proviso(ctx.p), "cell_bound": charsum.translate_cell_bound(ctx.p),
                       "rhs": charsum.eight_translate_rhs(ctx.p)}
    out = Outcome(result, rows)
    out.expect(s is None or s.holds, "structured min-intersection bound")
    out.expect(all(r["holds"] for r in randoms), "random min-intersection bounds")
    return out


def _read_subset(path: str) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read subset file: {e}") from None
    vals = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for tok in line.replace(",", " ").split():
            try:
                vals.append(int(tok))
            except ValueError:
                raise UsageError(f"line {lineno}: {tok!r} is not an integer") from None
    return vals


def cmd_scan(args) -> Outcome:
    ctx = _need_p(args)
    try:
        thr = charsum.parse_threshold(args.threshold)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed threshold {args.threshold!r}") from None
    spec = args.subset
    if spec == "qr":
        subsets = [("qr", ctx.residues)]
    elif spec.startswith("random:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"malformed subset spec {spec!r}") from None
        rng = np.random.default_rng(args.seed)
        subsets = [(f"random-{i}", charsum.random_half_subset(ctx, rng)) for i in range(n)]
    elif spec.startswith("file:"):
        subsets = [(spec[5:], _read_subset(spec[5:]))]
    else:
        raise UsageError(f"--subset must be qr, random:N or file:PATH, got {spec!r}")
    reports = []
    for name, C in subsets:
        try:
            reports.append((name, charsum.concentration_scan(ctx, C, thr)))
        except ValueError as e:
            raise UsageError(str(e)) from None
    rows = [dict(_flat(r.to_dict()), subset=name) for name, r in reports]
    if len(reports) == 1:
        result = reports[0][1].to_dict()
    else:
        result = {"p": ctx.p, "op": "concentration_scan", "threshold": reports[0][1].to_dict()["threshold"],
                  "subsets": len(reports), "max_count": max(r.count for _, r in reports),
                  "asserted": reports[0][1].asserted,
                  "reports": [dict(r.to_dict(), subset=name) for name, r in reports]}
    out = Outcome(result, rows)
    for name, r in reports:
        out.expect(r.holds is not False, f"at most {charsum.CONCENTRATION_CAP} heavy shifts ({name})")
    return out


# ---------------------------------------------------------------------------
# directions


def _load_points(args, need_p_size: bool = False) -> geometry.PointSet:
    if args.points:
        try:
            S = geometry.read_points(args.points, args.p)
        except OSError as e:
            raise UsageError(f"cannot read point file: {e}") from None
        except geometry.PointFileError as e:
            raise UsageError(f"{args.points}: {e}") from None
    else:
        ctx = _need_p(args)
        S = geometry.random_point_set(ctx, np.random.default_rng(args.seed))
    if need_p_size and len(S) != S.p:
        raise UsageError(f"|S| = {len(S)} != p = {S.p}")
    return S


def cmd_analyze(args) -> Outcome:
    S = _load_points(args)
    if len(S) < 2:
        raise UsageError(f"need at least two points, got {len(S)}")
    rep = geometry.direction_report(S)
    d = rep.to_dict()
    if len(S) == S.p:
        chk = geometry.direction_degree_check(S)
        d["degree_bound"] = {"holds": chk.holds, "tightest": geometry.slope_label(chk.tightest)
                             if chk.tightest is not None else None, "slack": chk.slack}
    rows = [dict(info.to_dict(), slope=geometry.slope_label(m), coeffs=json.dumps(list(info.poly.coeffs)))
            for m, info in rep.slopes.items()]
    out = Outcome(d, rows)
    if "degree_bound" in d:
        out.expect(d["degree_bound"]["holds"], "direction count >= degree + 2")
    return out


def cmd_ls(args) -> Outcome:
    ctx = _need_p(args)
    S = geometry.ls_set(ctx)
    rep = geometry.direction_report(S)
    census = geometry.ls_profile_census(ctx)
    chk = geometry.direction_degree_check(S)
    d = rep.to_dict()
    d["census"] = census.to_dict()
    d["expected_directions"] = (ctx.p + 3) // 2
    d["degree_bound_holds"] = chk.holds
    rows = [dict(info.to_dict(), slope=geometry.slope_label(m), coeffs=json.dumps(list(info.poly.coeffs)))
            for m, info in rep.slopes.items()]
    out = Outcome(d, rows)
    out.expect(len(S) == ctx.p, "|L| = p")
    out.expect(rep.n_directions == (ctx.p + 3) // 2, "|D| = (p+3)/2")
    out.expect(census.matches, "projection census")
    out.expect(chk.holds, "direction count >= degree + 2")
    return out


def cmd_census(args) -> Outcome:
    ctx = _need_p(args)
    c = geometry.ls_profile_census(ctx)
    out = Outcome(c.to_dict())
    out.expect(c.matches, "projection census")
    return out


def cmd_check(args) -> Outcome:
    if args.points:
        samples = [_load_points(args, need_p_size=True)]
    else:
        ctx = _need_p(args)
        rng = np.random.default_rng(args.seed)
        samples = [geometry.random_point_set(ctx, rng) for _ in range(args.random)]
    rows = []
    for i, S in enumerate(samples):
        chk = geometry.direction_degree_check(S)
        rows.append({"sample": i, "p": S.p, "n_directions": chk.n_directions, "holds": chk.holds,
                     "tightest": geometry.slope_label(chk.tightest) if chk.tightest is not None else None,
                     "slack": chk.slack})
    passed = sum(r["holds"] for r in rows)
    result = {"p": samples[0].p if samples else args.p, "op": "degree_bound_check",
              "samples": len(rows), "passed": passed, "details": rows}
    out = Outcome(result, rows)
    out.expect(passed == len(rows), "direction count >= degree + 2")
    return out


# ---------------------------------------------------------------------------
# fourier


def cmd_fourier(args) -> Outcome:
    if args.ls:
        S = geometry.ls_set(_need_p(args))
    elif args.points:
        S = _load_points(args, need_p_size=True)
    else:
        raise UsageError("fourier needs --ls or --points FILE")
    p = S.p
    rep = fourier.spectrum(S)
    verdicts = fourier.magnitude_law_check(S, rep=rep)
    d = rep.to_dict()
    d["magnitude_laws"] = [{"slope": geometry.slope_label(v.slope), "case": v.case, "p_mag": v.p_mag,
                     "holds": v.holds} for v in verdicts]
    try:
        mc = fourier.m_count_argument(S, rep)
        d["m_count"] = mc.to_dict()
        d["gap"] = mc.gap
    except ValueError as e:
        mc = None
        d["m_count"] = {"applies": False, "reason": str(e)}
    if args.oracle:
        diff = np.abs(fourier.naive_transform(S) - fourier.spectrum_matrix(rep)).max()
        d["oracle_max_diff"] = float(diff)
    rows = [dict(x.to_dict(), poly_class=x.poly_class) for x in rep.directions.values()]
    out = Outcome(d, rows)
    out.expect(rep.plancherel_residual < 1e-8 * p, "Plancherel")
    out.expect(all(v.holds is not False for v in verdicts), "magnitude laws")
    if mc is not None:
        out.expect(mc.holds, "gap = 2")
    if args.oracle:
        out.expect(d["oracle_max_diff"] < 1e-9, "naive transform agreement")
    return out


# ---------------------------------------------------------------------------
# poly


def cmd_poly(args) -> Outcome:
    try:
        P = parse_polynomial(args.polynomial)
    except (ValueError, FieldError) as e:
        raise UsageError(str(e)) from None
    prof = range_profile(P)
    d = {
        "polynomial": format_polynomial(P),
        "text": str(P),
        "degree": P.degree if not P.is_zero() else None,
        "lc": P.lc,
        "values": list(prof.values),
        "range_sum": prof.range_sum,
        "roots": list(prof.roots),
        "excess": list(prof.excess),
    }
    out = Outcome(d)
    if not P.is_zero() and P.p > 2:
        ps = power_sum_identity_check(P, P.p - 2)
        d["power_sum_identity"] = ps.holds
        out.expect(ps.holds, "power-sum identity")
    if P.degree == P.ctx.half and prof.range_sum == P.p:
        d["family"] = cls_mod.family_membership(P)
        d["checks"] = cls_mod.verify_orbit(P)
    return out


# ---------------------------------------------------------------------------
# plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_prime, help="odd prime")
    common.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (recorded in the output)")
    common.add_argument("--threads", type=int, default=1, help="worker processes (REDEILAB_THREADS wins)")
    common.add_argument("--budget", type=int, default=cls_mod.DEFAULT_BUDGET, help="candidate budget")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--mode", choices=("assert", "report"), default="assert")
    common.add_argument("--no-timing", action="store_true", help="zero all wall-clock fields")

    ap = argparse.ArgumentParser(prog="redeilab", description="Range-sum polynomials over F_p.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify degree-(p-1)/2 range-sum-p polynomials")
    c.add_argument("--strategy", choices=("naive", "rootsets"))
    c.add_argument("--scan-lower-degrees", action="store_true")
    c.add_argument("--range-sum-multiple", type=int, default=1, metavar="K")
    c.set_defaults(func=cmd_classify)

    cs = sub.add_parser("charsum", help="Legendre shift sums and sign patterns")
    css = cs.add_subparsers(dest="op", required=True)
    x = css.add_parser("paley", parents=[common])
    x.add_argument("--gamma-class", choices=("QR", "QNR", "both"), default="both")
    x.set_defaults(func=cmd_paley)
    x = css.add_parser("weil", parents=[common])
    x.add_argument("--shifts", type=_int_list)
    x.set_defaults(func=cmd_weil)
    x = css.add_parser("cells", parents=[common])
    x.add_argument("--shifts", type=_int_list)
    x.set_defaults(func=cmd_cells)
    x = css.add_parser("minint", parents=[common])
    x.add_argument("--shifts", type=_int_list, help="translates of the squares (default 1..8)")
    x.add_argument("--r-hat", type=int, default=5)
    x.add_argument("--random", type=int, default=0, metavar="N", help="also run N random instances")
    x.set_defaults(func=cmd_minint)
    x = css.add_parser("scan", parents=[common])
    x.add_argument("--subset", default="qr", help="qr | random:N | file:PATH")
    x.add_argument("--threshold", default="p/7")
    x.set_defaults(func=cmd_scan)

    d = sub.add_parser("directions", help="direction sets and projection polynomials")
    ds = d.add_subparsers(dest="op", required=True)
    for name, fn in (("analyze", cmd_analyze), ("ls", cmd_ls), ("census", cmd_census), ("check", cmd_check)):
        x = ds.add_parser(name, parents=[common])
        x.add_argument("--points", help="point file")
        if name == "check":
            x.add_argument("--random", type=int, default=1, metavar="N", help="number of random p-sets")
        x.set_defaults(func=fn)

    f = sub.add_parser("fourier", parents=[common], help="Fourier spectrum of a p-set")
    g = f.add_mutually_exclusive_group()
    g.add_argument("--ls", action="store_true")
    g.add_argument("--points")
    f.add_argument("--oracle", action="store_true", help="cross-check against the O(p^4) transform")
    f.set_defaults(func=cmd_fourier)

    pp = sub.add_parser("poly", parents=[common], help="inspect one polynomial")
    pp.add_argument("polynomial", help="'p=7; coeffs=[1,0,0,1]'")
    pp.set_defaults(func=cmd_poly)
    return ap


def _config(args) -> dict:
    skip = {"func", "no_timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _render(fmt: str, envelope: dict, rows: list[dict]) -> str:
    if fmt == "json":
        return json.dumps(envelope, indent=2, sort_keys=True, default=_json_default) + "\n"
    buf = io.StringIO()
    fields: list[str] = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _csv_value(v) for k, v in r.items()})
    return buf.getvalue()


def _csv_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, float) and math.isinf(o):
        return None
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _sanitize(o):
    """Replace -inf degrees and other non-JSON floats by None."""
    if isinstance(o, dict):
        return {str(k): _sanitize(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_sanitize(v) for v in o]
    if isinstance(o, float) and (math.isinf(o) or math.isnan(o)):
        return None
    return o


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        outcome = args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except cls_mod.BudgetExceeded as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (cls_mod.PreconditionError, charsum.PremiseError, FieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    ms = 0 if args.no_timing else round((time.perf_counter() - t0) * 1e3, 3)
    envelope = {
        "tool": "redeilab",
        "version": __version__,
        "config": _config(args),
        "seed": args.seed,
        "ms": ms,
        "mode": args.mode,
        "ok": not outcome.failures,
        "failures": outcome.failures,
        "result": _sanitize(outcome.result),
    }
    text = _render(args.format, envelope, [_sanitize(r) for r in outcome.rows])
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if outcome.failures:
        for f in outcome.failures:
            print(f"check failed: {f}", file=sys.stderr)
        if args.mode == "assert":
            return EXIT_ASSERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
