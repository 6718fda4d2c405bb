"""Command line front end.

Subcommands map one-to-one onto the library surface:

  f-series        certified F(n) over a range, with checkpoint/resume
  sn              structural summary of the integer S(n)
  integral        the double integral I(n) by two independent methods
  relation-check  integer reconstruction linking I(n), log S(n) and gamma
  criterion-gap   the fractional-part gap d(2n) I(n) - {log S(n)}
  estimate        continued-fraction irrationality diagnostics for a constant
  examples        the power-tower and factorial-CF worked constructions
  bounds          closed-form conditional bound calculators
  scan            subsequence scan of the distance-to-integer series
  plot            SVG scatter of the F series

Flags beat environment variables (prefix EULERFORMS_, e.g. EULERFORMS_DIGITS),
which beat built-in defaults.  Machine outputs carry a header embedding the
tool version, the parse policy id, and a 12-hex config hash so any two files
with equal headers are comparable number for number.

Exit codes: 0 success, 1 a certified computation faulted (precision ceiling,
ambiguity, self-check), 2 usage errors.  Usage errors write nothing to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import EulerformsError
from .exact import PARSE_POLICY
from .checkpoint import (TOOL_VERSION, config_hash, fseries_config,
                         load_checkpoint, open_for_append, append_record)
from .precreal import DEFAULT_PRECISION_CEILING

_CSV_COLS = ("n", "status", "bits", "frac", "frac_err", "dist", "dist_err",
             "F", "F_err", "mag")


def _env(name: str, default, cast):
    raw = os.environ.get("EULERFORMS_" + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise SystemExit(2)


def _header(cfg: dict) -> str:
    return (f"# eulerforms {TOOL_VERSION} policy={PARSE_POLICY} "
            f"config={config_hash(cfg)}")


def _errreal_json(x) -> dict:
    return {"value": format(x.value, ".25g"), "abs_err": float(x.abs_err),
            "precision_bits": x.precision_bits}


def _out_stream(path):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


# ---------------------------------------------------------------- f-series

def _cmd_f_series(args) -> int:
    from .logseq import f_series_rendered

    if not (1 <= args.lo <= args.hi):
        raise _Usage("need 1 <= --lo <= --hi")
    done = {}
    fh = None
    if args.checkpoint:
        fresh = not os.path.exists(args.checkpoint)
        if not fresh:
            done = load_checkpoint(args.checkpoint, args.digits,
                                   args.precision_ceiling)
        fh = open_for_append(args.checkpoint, args.digits,
                             args.precision_ceiling, fresh=fresh)
    try:
        on_rec = (lambda r: append_record(fh, r)) if fh else None
        records = f_series_rendered(
            args.lo, args.hi, out_digits=args.digits,
            precision_ceiling=args.precision_ceiling,
            done=done, on_record=on_rec, workers=args.workers)
    finally:
        if fh:
            fh.close()
    cfg = fseries_config(args.digits, args.precision_ceiling)
    out = _out_stream(args.out)
    try:
        if args.format == "json":
            doc = {"meta": {"tool": f"eulerforms/{TOOL_VERSION}",
                            "policy": PARSE_POLICY, "config": config_hash(cfg),
                            "digits": args.digits},
                   "records": records}
            out.write(json.dumps(doc, sort_keys=True) + "\n")
        else:
            out.write(_header(cfg) + "\n")
            out.write(",".join(_CSV_COLS) + "\n")
            for r in records:
                out.write(",".join(str(r.get(c, "")) for c in _CSV_COLS) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# ---------------------------------------------------------------- sn

def _cmd_sn(args) -> int:
    from .exact import (grouped_exponents, triple_count,
                        log_sn_digits_estimate, sn_exact_small)
    from .errors import OverCap

    n = args.n
    if n < 1:
        raise _Usage("--n must be >= 1")
    groups = grouped_exponents(n)
    print(_header({"cmd": "sn", "n": n}))
    print(f"n                 {n}")
    print(f"factor triples    {triple_count(n)}")
    print(f"grouped factors   {len(groups)}")
    print(f"max exponent bits {max(g.bit_length() for g in groups)}")
    print(f"digits(S) about   {log_sn_digits_estimate(n)}")
    if args.exact_cap:
        try:
            value = sn_exact_small(n, cap_digits=args.exact_cap)
            import gmpy2
            rendered = gmpy2.mpz(value).digits(10)
            print(f"S exact digits    {len(rendered)}")
            if len(rendered) <= 120:
                print(f"S                 {rendered}")
        except OverCap as exc:
            print(f"S exact           skipped ({exc})")
    return 0


# ---------------------------------------------------------------- integral

def _cmd_integral(args) -> int:
    from .integral import integral_In

    if args.n < 1:
        raise _Usage("--n must be >= 1")
    val = integral_In(args.n, target_abs_err=args.target)
    if args.format == "json":
        print(json.dumps({"n": args.n, "I": _errreal_json(val)},
                         sort_keys=True))
    else:
        print(_header({"cmd": "integral", "n": args.n,
                       "target": args.target}))
        print(f"I({args.n}) = {format(val.value, '.40g')}")
        print(f"abs_err <= {val.abs_err:.3e}")
    return 0


# ---------------------------------------------------------------- relations

def _cmd_relation_check(args) -> int:
    from .relations import relation_check

    if args.n < 1:
        raise _Usage("--n must be >= 1")
    rep = relation_check(args.n, tolerance=args.tolerance)
    if args.format == "json":
        print(json.dumps({
            "n": rep.n, "d2n": str(rep.d2n), "binom": str(rep.binom),
            "nearest_int": str(rep.nearest_int),
            "residual": _errreal_json(rep.residual),
            "tolerance": rep.tolerance}, sort_keys=True))
    else:
        print(_header({"cmd": "relation-check", "n": args.n,
                       "tolerance": args.tolerance}))
        print(f"n            {rep.n}")
        print(f"d(2n)        {rep.d2n}")
        print(f"C(2n,n)      {rep.binom}")
        print(f"integer part {rep.nearest_int}")
        print(f"residual     {format(rep.residual.value, '.6g')} "
              f"(abs_err <= {rep.residual.abs_err:.3e})")
        print(f"within       {rep.tolerance:.1e}  ok")
    return 0


def _cmd_criterion_gap(args) -> int:
    from .relations import criterion_gap

    if args.n < 1:
        raise _Usage("--n must be >= 1")
    gap = criterion_gap(args.n)
    if args.format == "json":
        print(json.dumps({"n": args.n, "gap": _errreal_json(gap)},
                         sort_keys=True))
    else:
        print(_header({"cmd": "criterion-gap", "n": args.n}))
        print(f"gap({args.n}) = {format(gap.value, '.20g')} "
              f"(abs_err <= {gap.abs_err:.3e})")
    return 0


# ---------------------------------------------------------------- estimate

def _cmd_estimate(args) -> int:
    from .constants import ConstRequest, const_value
    from .cf import cf_expand, cf_convergents, mu_estimate, beta_estimate

    value = const_value(ConstRequest(name=args.const, digits=args.digits))
    quotients = cf_expand(value, args.depth)
    records = cf_convergents(quotients)
    print(_header({"cmd": "estimate", "const": args.const,
                   "digits": args.digits, "depth": args.depth}))
    print(f"quotients ({len(quotients)}): "
          f"{' '.join(map(str, quotients[:24]))}"
          f"{' ...' if len(quotients) > 24 else ''}")
    print("k  q_k            mu_k        mu_tight    beta_k      beta_tight")
    for r in records:
        print(f"{r.k:<3d}{r.q_k:<15d}{r.mu_k:<12.6g}{r.mu_tight:<12.6g}"
              f"{r.beta_k:<12.8g}{r.beta_tight:<12.8g}")
    mu = mu_estimate(records)
    beta = beta_estimate(records)
    print(f"mu tail   [{mu.tail_min:.6g}, {mu.tail_max:.6g}]")
    print(f"beta tail [{beta.tail_min:.8g}, {beta.tail_max:.8g}]")
    return 0


# ---------------------------------------------------------------- examples

def _cmd_examples(args) -> int:
    if args.which == "tower":
        from .towers import tower_records, verify_super_liouville

        print(_header({"cmd": "examples", "which": "tower"}))
        lam = Fraction(args.lam) if args.lam else None
        for r in tower_records(args.n_max):
            line = (f"n={r.k} q={r.q!r} beta_k={r.beta_k:g} "
                    f"beta_tight={r.beta_tight:.10g} mu_k={r.mu_k:.6g}")
            print(line)
        if lam is not None:
            ok = verify_super_liouville(args.n, lam)
            print(f"verify(n={args.n}, lam={args.lam}): "
                  f"{'holds' if ok else 'fails'}")
    else:
        from .factcf import L_convergents, first_chain_n, digit_count

        print(_header({"cmd": "examples", "which": "factorial"}))
        for r in L_convergents(args.n_max):
            print(f"k={r.k} digits(q)={digit_count(r.q_k)} "
                  f"mu_k={r.mu_k:.6g} beta_k={r.beta_k:.12g}")
        if args.eps:
            n0 = first_chain_n(Fraction(args.eps))
            print(f"chain first closes at n={n0} for eps={args.eps}")
    return 0


# ---------------------------------------------------------------- bounds

def _cmd_bounds(args) -> int:
    from . import bounds

    # validate the argument combination before any stdout byte leaves
    if (args.sigma is None) != (args.tau is None):
        raise _Usage("--sigma and --tau go together")
    if args.delta is None and args.sigma is None and args.lam is None:
        raise _Usage("give --delta, --sigma/--tau, or --lam")
    print(_header({"cmd": "bounds"}))
    if args.delta is not None:
        print(f"measure bound at delta={args.delta:g}: "
              f"{bounds.theorem_bounds(args.delta):.12f}")
    if args.sigma is not None:
        print(f"mu(sigma={args.sigma:g}, tau={args.tau:g}) = "
              f"{bounds.mu_sigma_tau(args.sigma, args.tau):.12f}")
        print(f"comparison bound 1 + sigma/tau = "
              f"{bounds.chudnovsky_hata_bound(args.sigma, args.tau):.12f}")
    if args.lam is not None:
        print(f"m(lam={args.lam:g}, eps={args.eps:g}) = "
              f"{bounds.m_lambda_eps(args.lam, args.eps):.12f}")
    return 0


# ---------------------------------------------------------------- scan

def _cmd_scan(args) -> int:
    from .relations import subsequence_scan

    if not (1 <= args.n_max):
        raise _Usage("--n-max must be >= 1")
    if args.b < 1:
        raise _Usage("--b must be >= 1")
    rep = subsequence_scan(args.n_max, args.a, args.b, args.threshold)
    print(_header({"cmd": "scan", "n_max": args.n_max, "a": args.a,
                   "b": args.b, "threshold": args.threshold}))
    print(f"gap candidates under {args.threshold:g}: "
          f"{len(rep.frac_candidates)}")
    for c in rep.frac_candidates:
        print(f"n={c.n:<5d} gap={c.gap:+.6f} dist={c.dist:.6f}")
    if rep.sigma_fit is not None:
        print(f"gap fit   sigma={rep.sigma_fit:.4f} tau={rep.tau_fit:.4f}")
    if rep.dist_sigma_fit is not None:
        print(f"dist fit  sigma={rep.dist_sigma_fit:.4f} "
              f"tau={rep.dist_tau_fit:.4f}")
    print(f"sigma<tau anywhere: {'yes' if rep.remark_flag else 'no'}")
    return 0


# ---------------------------------------------------------------- plot

def _cmd_plot(args) -> int:
    from .logseq import f_series_rendered
    from .svgplot import emit_figure

    if not (1 <= args.lo <= args.hi):
        raise _Usage("need 1 <= --lo <= --hi")
    records = f_series_rendered(args.lo, args.hi, out_digits=args.digits,
                                workers=args.workers)
    svg = emit_figure(records, title=f"F(n), n = {args.lo}..{args.hi}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out} ({len(svg)} bytes, "
          f"{sum(1 for r in records if r['status'] == 'ok')} points)")
    return 0


# ---------------------------------------------------------------- driver

class _Usage(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="eulerforms", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="cmd", required=True)

    digits_default = _env("DIGITS", 15, int)
    workers_default = _env("WORKERS", 1, int)

    p = sub.add_parser("f-series", help="certified F(n) over a range")
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--digits", type=int, default=digits_default)
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--precision-ceiling", type=int,
                   default=_env("PRECISION_CEILING",
                                DEFAULT_PRECISION_CEILING, int))
    p.add_argument("--checkpoint", default=_env("CHECKPOINT", None, str))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_f_series)

    p = sub.add_parser("sn", help="structural summary of S(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact-cap", type=int, default=0,
                   help="materialize S(n) exactly if it fits in this many digits")
    p.set_defaults(func=_cmd_sn)

    p = sub.add_parser("integral", help="I(n) by two independent methods")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=float,
                   default=_env("TARGET", 1e-30, float))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_integral)

    p = sub.add_parser("relation-check",
                       help="reconstruct the integer linking I, log S, gamma")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tolerance", type=float,
                   default=_env("TOLERANCE", 1e-20, float))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_relation_check)

    p = sub.add_parser("criterion-gap", help="d(2n) I(n) - {log S(n)}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_criterion_gap)

    p = sub.add_parser("estimate",
                       help="continued-fraction diagnostics for a constant")
    p.add_argument("--const", choices=("gamma", "e", "ln2"), default="gamma")
    p.add_argument("--digits", type=int, default=max(digits_default, 30))
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("examples", help="worked tower and factorial-CF runs")
    p.add_argument("--which", choices=("tower", "factorial"), required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--lam", default=None)
    p.add_argument("--eps", default=None)
    p.set_defaults(func=_cmd_examples)

    p = sub.add_parser("bounds", help="closed-form bound calculators")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--lam", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("scan", help="scan the distance-to-integer series")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.05)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("plot", help="SVG scatter of the F series")
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--digits", type=int, default=digits_default)
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)

    return top


def main(argv=None) -> int:
    try:
        parser = _build_parser()
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors (stderr only) and 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"eulerforms: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"eulerforms: {exc}", file=sys.stderr)
        return 2
    except EulerformsError as exc:
        print(f"eulerforms: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
