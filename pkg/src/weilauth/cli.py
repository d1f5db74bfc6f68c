"""Command-line front end.

Subcommands map one-to-one onto the library: field, gauss, weil, pi,
ps, encode, verify, entropy, report.  With --method both the brute and
closed routes are computed side by side and the exit status reports
their agreement, so the CLI doubles as a self-check harness:

    0  success (and agreement, when two methods ran)
    1  usage or parse error
    2  enumeration cap exceeded
    3  brute-force and closed-form results disagree

Output is deterministic byte-for-byte for a fixed configuration,
including across --jobs settings; runtime is only included when
--timing is passed, since it would break that guarantee.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import bounds
from .authcode import (CodeParams, Message, SubstitutionQuery, case_id,
                       count_keys_bruteforce, count_keys_closed, encode,
                       pi_closed, pi_exact, ps_bound, ps_exact_details, verify)
from .caps import (DEFAULT_ENUM_CAP, DEFAULT_PAIR_CAP, DEFAULT_PS_CAP,
                   DEFAULT_SCAN_CAP, CapExceeded)
from .charsum import (WeilSumParams, gauss_sum_bruteforce, gauss_sum_closed,
                      weil_sum_bruteforce, weil_sum_closed)
from .cyclotomic import CyclotomicInt
from .field import make_field


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the exit-code contract
    # reserves 2 for cap violations, so remap usage errors to 1.
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fraction_json(fr: Fraction) -> dict:
    return {"num": fr.numerator, "den": fr.denominator, "decimal": float(fr)}


def _cyclo_json(z: CyclotomicInt) -> dict:
    c = z.to_complex()
    return {"p": z.p, "coeffs": list(z.coeffs),
            "approx": {"re": round(c.real, 12), "im": round(c.imag, 12)}}


def _field_for(args, degree_attr="n"):
    n = getattr(args, degree_attr)
    q = args.p ** n
    if q > args.enum_cap:
        raise CapExceeded(f"field of size {q} exceeds enumeration cap {args.enum_cap}")
    return make_field(args.p, n, getattr(args, "modulus", None))


# -- subcommand handlers: return (params_echo, results, agreement) ------


def _cmd_field(args):
    ctx = _field_for(args)
    params = {"p": ctx.p, "n": ctx.n, "modulus": ctx.format_modulus()}
    results = {"q": ctx.q, "primitive_element": ctx.format_element(ctx.g)}
    return params, results, None


def _cmd_gauss(args):
    params = {"p": args.p, "h": args.h}
    results = {}
    agreement = None
    if args.method in ("brute", "both"):
        ctx = _field_for(args, "h")
        results["brute"] = _cyclo_json(gauss_sum_bruteforce(
            ctx, cap=args.enum_cap, jobs=args.jobs))
    if args.method in ("closed", "both"):
        results["closed"] = _cyclo_json(gauss_sum_closed(args.p, args.h))
    if args.method == "both":
        agreement = results["brute"]["coeffs"] == results["closed"]["coeffs"]
    return params, results, agreement


def _cmd_weil(args):
    ctx = _field_for(args, "h")
    a = ctx.parse_element(args.a)
    b = ctx.parse_element(args.b)
    wp = WeilSumParams(ctx, args.u, a, b)
    params = {"p": ctx.p, "h": ctx.n, "u": args.u, "a": args.a, "b": args.b,
              "modulus": ctx.format_modulus()}
    results = {}
    agreement = None
    if args.method in ("brute", "both"):
        results["brute"] = _cyclo_json(weil_sum_bruteforce(
            wp, cap=args.enum_cap, jobs=args.jobs))
    if args.method in ("closed", "both"):
        results["closed"] = _cyclo_json(weil_sum_closed(wp))
    if args.method == "both":
        agreement = results["brute"]["coeffs"] == results["closed"]["coeffs"]
    return params, results, agreement


def _code_params(args) -> CodeParams:
    return CodeParams(_field_for(args), args.r)


def _cmd_pi(args):
    cp = _code_params(args)
    params = {"p": cp.p, "n": cp.n, "r": cp.r, "modulus": cp.ctx.format_modulus()}
    results = {"case_id": case_id(cp)}
    agreement = None
    if args.method in ("brute", "both"):
        if cp.q > args.scan_cap:
            raise CapExceeded(f"(a, b) scan over {cp.q} elements exceeds cap {args.scan_cap}")
        results["brute"] = _fraction_json(pi_exact(cp, cap=args.scan_cap, jobs=args.jobs))
    if args.method in ("closed", "both"):
        results["closed"] = _fraction_json(pi_closed(cp))
    if args.method == "both":
        agreement = results["brute"] == results["closed"]
    return params, results, agreement


def _cmd_ps(args):
    cp = _code_params(args)
    params = {"p": cp.p, "n": cp.n, "r": cp.r, "modulus": cp.ctx.format_modulus()}
    results = {"case_id": case_id(cp)}
    agreement = None
    bound = ps_bound(cp)
    if args.method in ("closed", "both"):
        results["bound"] = {"applicable": bound.applicable, "value": bound.value,
                            "note": bound.note}
    if args.method in ("brute", "both"):
        scan = ps_exact_details(cp, cap=args.ps_cap, jobs=args.jobs)
        results["exact"] = _fraction_json(scan.value)
        results["skipped_pairs"] = scan.skipped
        lower = Fraction(cp.q - 1, cp.q * cp.p - 1)
        results["combinatorial_lower"] = _fraction_json(lower)
        ok = scan.value >= lower
        if bound.applicable:
            ok = ok and float(scan.value) <= bound.value + 1e-9
        if args.method == "both":
            agreement = ok
    return params, results, agreement


def _cmd_encode(args):
    cp = _code_params(args)
    k = cp.ctx.parse_element(args.k)
    s = cp.ctx.parse_element(args.s)
    m = encode(cp, k, s)
    params = {"p": cp.p, "n": cp.n, "r": cp.r, "k": args.k, "s": args.s}
    return params, {"m1": cp.ctx.format_element(m.m1), "m2": m.m2}, None


def _cmd_verify(args):
    cp = _code_params(args)
    k = cp.ctx.parse_element(args.k)
    m = Message(cp.ctx.parse_element(args.m1), args.m2 % cp.p)
    s = verify(cp, k, m)
    params = {"p": cp.p, "n": cp.n, "r": cp.r, "k": args.k,
              "m1": args.m1, "m2": args.m2}
    results = {"accepted": s is not None,
               "source": cp.ctx.format_element(s) if s is not None else None}
    return params, results, None


def _cmd_entropy(args):
    cp = _code_params(args)
    rep = bounds.entropy_report(cp, scan_cap=args.scan_cap, ps_cap=args.ps_cap,
                                pair_cap=args.pair_cap, jobs=args.jobs)
    params = {"p": cp.p, "n": cp.n, "r": cp.r}
    results = {
        "h_e": rep.h_e, "h_e_given_m": rep.h_e_given_m,
        "h_e_given_mm": rep.h_e_given_mm, "q_i": rep.q_i, "q_s": rep.q_s,
        "pi_exact": _fraction_json(rep.pi_value) if rep.pi_value is not None else None,
        "pi_closed": _fraction_json(rep.pi_closed),
        "ps_exact": _fraction_json(rep.ps_value) if rep.ps_value is not None else None,
        "ps_bound": rep.ps_bound,
        "R": _fraction_json(rep.r_bound), "P": _fraction_json(rep.p_bound),
        "ratio_q_pi": rep.ratio_q_pi, "ratio_R_pi": rep.ratio_r_pi,
        "ratio_P_ps": rep.ratio_p_ps,
    }
    return params, results, None


def _cmd_report(args):
    if args.n_max < args.n_min:
        raise ValueError("--n-max must be >= --n-min")
    rows = bounds.optimality_report(
        args.p, args.r, range(args.n_min, args.n_max + 1),
        scan_cap=args.scan_cap, ps_cap=args.ps_cap, pair_cap=args.pair_cap,
        jobs=args.jobs)
    params = {"p": args.p, "r": args.r, "n_min": args.n_min, "n_max": args.n_max}
    return params, {"rows": rows}, None


# -- rendering -----------------------------------------------------------


def _render_csv(results: dict) -> str:
    rows = results["rows"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(bounds.REPORT_COLUMNS)
    for row in rows:
        writer.writerow(["" if row[c] is None else
                         (repr(row[c]) if isinstance(row[c], float) else row[c])
                         for c in bounds.REPORT_COLUMNS])
    return buf.getvalue()


def _render_text(payload: dict) -> str:
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for key in obj:
                walk(f"{prefix}{key}.", obj[key])
        elif isinstance(obj, list):
            for i, item in enumerate(obj):
                walk(f"{prefix}{i}.", item)
        else:
            lines.append(f"{prefix[:-1]} = {obj}")

    walk("", payload)
    return "\n".join(lines) + "\n"


def _emit(payload: dict, args) -> None:
    if args.format == "csv" and "rows" in payload.get("results", {}):
        text = _render_csv(payload["results"])
    elif args.format == "text":
        text = _render_text(payload)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", default=None, help="write output to a file")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    common.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    common.add_argument("--scan-cap", type=int, default=DEFAULT_SCAN_CAP)
    common.add_argument("--ps-cap", type=int, default=DEFAULT_PS_CAP)
    common.add_argument("--pair-cap", type=int, default=DEFAULT_PAIR_CAP)
    common.add_argument("--timing", action="store_true",
                        help="include runtime_ms (breaks byte determinism)")
    common.add_argument("--method", choices=("brute", "closed", "both"), default="both")

    parser = _Parser(prog="weilauth",
                     description="Exact tools for a trace-masked authentication "
                                 "code over F_{p^n} and its character-sum analysis.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add(name, fn, **fields):
        sp = sub.add_parser(name, parents=[common])
        for flag, kw in fields.items():
            sp.add_argument(f"--{flag.replace('_', '-')}", **kw)
        sp.set_defaults(func=fn)
        return sp

    pint = {"type": int, "required": True}
    pstr = {"type": str, "required": True}
    add("field", _cmd_field, p=pint, n=pint,
        modulus={"type": str, "default": None})
    add("gauss", _cmd_gauss, p=pint, h=pint,
        modulus={"type": str, "default": None})
    add("weil", _cmd_weil, p=pint, h=pint, u=pint, a=pstr, b=pstr,
        modulus={"type": str, "default": None})
    add("pi", _cmd_pi, p=pint, n=pint, r=pint,
        modulus={"type": str, "default": None})
    add("ps", _cmd_ps, p=pint, n=pint, r=pint,
        modulus={"type": str, "default": None})
    add("encode", _cmd_encode, p=pint, n=pint, r=pint, k=pstr, s=pstr,
        modulus={"type": str, "default": None})
    add("verify", _cmd_verify, p=pint, n=pint, r=pint, k=pstr, m1=pstr,
        m2=pint, modulus={"type": str, "default": None})
    add("entropy", _cmd_entropy, p=pint, n=pint, r=pint,
        modulus={"type": str, "default": None})
    add("report", _cmd_report, p=pint, r=pint, n_min=pint, n_max=pint)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        params, results, agreement = args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = {"params": params, "method": args.method,
               "results": results, "agreement": agreement}
    if args.timing:
        payload["runtime_ms"] = int((time.perf_counter() - start) * 1000)
    _emit(payload, args)
    return 0 if agreement in (None, True) else 3


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
