"""Command-line interface.

Exit codes: 0 success, 1 a mathematical check failed (the counterexample is
printed as JSON), 2 malformed input or flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import basechange as bc
from . import jsonio
from . import monoids as mo
from . import perfectoid as pf
from . import spectrum as sp
from . import witt as wt
from .errors import CounterexampleFound, F1AnError, NotBounded
from .scalars import PowerNorm, Scalar, TwoSidedNorm, scalar_norm
from .suites import SUITES, run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="f1an", description="Normed sets, Witt vectors and spectra at finite support.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norm", help="norm of an element read as JSON")
    p.add_argument("--input", type=_json_arg, help="element JSON (default: stdin)")
    p.add_argument("--radius", type=_rat, default=Fraction(1, 2), help="radius for Puiseux digits")
    p.add_argument("--alpha", type=_rat, help="alpha for Witt vectors")
    p.add_argument("--rho", type=_rat, help="Gauss radius for FF elements")
    p.add_argument("--two-sided", action="store_true", help="two-sided FF norm at rho")
    p.add_argument("--mode", choices=["L1", "Sup"], default="L1")
    p.add_argument("--power", type=_rat, help="scalar norm |x|**s")
    p.add_argument("--interval", nargs=2, type=_rat, metavar=("S1", "S2"), help="scalar norm max(|x|**s1, |x|**s2)")

    w = sub.add_parser("witt", help="Witt vector arithmetic")
    w.add_argument("op", choices=["add", "mul", "neg", "ghost", "from-int", "polys"])
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--len", type=int, required=True)
    w.add_argument("--x", type=_json_arg)
    w.add_argument("--y", type=_json_arg)
    w.add_argument("--m", type=int, help="integer for from-int")
    w.add_argument("--kind", choices=["Fp", "Z"], default="Fp", help="digit kind for integer digits")
    w.add_argument("--route", choices=["auto", "table", "series"], default="auto")

    b = sub.add_parser("basechange", help="base change operations")
    b.add_argument("op", choices=["norm", "convolve", "cofinality"])
    b.add_argument("--f", type=_json_arg, help="element JSON")
    b.add_argument("--g", type=_json_arg, help="second element JSON")
    b.add_argument("--mode", choices=["L1", "Sup"], default="L1")
    b.add_argument("--coeffs", type=_json_arg, help='cofinality input {"exponent": norm}')
    b.add_argument("--rho", type=_rat)
    b.add_argument("--rho-prime", type=_rat)

    q = sub.add_parser("quotient", help="cokernel class norms and scaling certificates")
    q.add_argument("op", choices=["cokernel", "frobenius-family"])
    q.add_argument("--r-prime", type=_rat)
    q.add_argument("--radius", type=_rat)
    q.add_argument("--n", type=int)
    q.add_argument("--family", type=_rat, nargs="+")
    q.add_argument("--p", type=int, default=2)
    q.add_argument("--sources", choices=["system", "family"], default="system")

    s = sub.add_parser("spectrum", help="points of the spectrum of Z")
    s.add_argument("op", choices=["export", "eval", "validate"])
    s.add_argument("--max-prime", type=int, default=5)
    s.add_argument("--samples", type=int, default=5)
    s.add_argument("--overlay", action="append", default=[])
    s.add_argument("--format", choices=["json", "svg"], default="json")
    s.add_argument("--point", help="trivial, prime:P:EPS or arch:EPS")
    s.add_argument("--n", type=int)
    s.add_argument("--range", type=int, default=50, help="validate on -R..R")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0)
    return ap


def _out(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_input(value):
    if value is not None:
        return value
    text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON on stdin: {exc}") from None


def _witt_vec(raw, p: int, n: int, kind: str) -> wt.WittVector:
    if raw is None:
        raise UsageError("missing --x/--y")
    if isinstance(raw, dict):
        x = wt.WittVector.from_json(raw)
    elif isinstance(raw, list) and any(isinstance(d, dict) for d in raw):
        x = wt.WittVector.from_json({"p": p, "digits": raw})
    elif isinstance(raw, list):
        x = wt.WittVector(p, raw, kind)
    else:
        raise UsageError("Witt vectors are JSON lists of digits")
    if x.p != p or x.n != n:
        raise UsageError(f"vector has p={x.p}, length {x.n}; flags say p={p}, length {n}")
    return x


def _digits_json(x: wt.WittVector):
    if x.kind == "puiseux":
        return [d.to_json() for d in x.digits]
    return list(x.digits)


def cmd_norm(args) -> int:
    el = jsonio.load_element(_read_input(args.input))
    if isinstance(el, Scalar):
        spec = None
        if args.power is not None:
            spec = PowerNorm(args.power)
        elif args.interval is not None:
            spec = TwoSidedNorm(*args.interval)
        v = scalar_norm(el, spec)
    elif isinstance(el, pf.PuiseuxPoly):
        v = pf.pp_sup_norm(el, args.radius)
        print(_out({"norm": jsonio.norm_to_json(v), "l1": jsonio.norm_to_json(pf.pp_l1_norm(el, args.radius))}))
        return 0
    elif isinstance(el, wt.WittVector):
        if args.alpha is None:
            raise UsageError("Witt vectors need --alpha")
        v = wt.witt_alpha_norm(el, args.alpha, args.radius)
    elif isinstance(el, wt.FFElement):
        if args.rho is None:
            raise UsageError("FF elements need --rho")
        fn = wt.ff_two_sided_norm if args.two_sided else wt.ff_gauss_norm
        v = fn(el, args.rho, args.radius)
    else:
        spec = None
        if args.power is not None:
            spec = PowerNorm(args.power)
        elif args.interval is not None:
            spec = TwoSidedNorm(*args.interval)
        v = bc.bc_norm(el, bc.GaussNormSpec(args.mode, spec) if spec else bc.GaussNormSpec(args.mode))
    print(_out({"norm": jsonio.norm_to_json(v)}))
    return 0


def cmd_witt(args) -> int:
    p, n = args.p, args.len
    if args.op == "polys":
        table = wt.gen_witt_polys(p, n)
        print(_out({"S": [table.format("add", k) for k in range(n)], "P": [table.format("mul", k) for k in range(n)]}))
        return 0
    if args.op == "from-int":
        if args.m is None:
            raise UsageError("from-int needs --m")
        print(_out(list(wt.witt_from_integer(args.m, p, n).digits)))
        return 0
    x = _witt_vec(args.x, p, n, args.kind)
    if args.op == "neg":
        print(_out(_digits_json(wt.witt_neg(x))))
        return 0
    if args.op == "ghost":
        if x.kind != "Z":
            x = wt.WittVector(p, x.digits, "Z")
        print(_out(x.ghost()))
        return 0
    y = _witt_vec(args.y, p, n, args.kind)
    fn = wt.witt_add if args.op == "add" else wt.witt_mul
    print(_out(_digits_json(fn(x, y, args.route))))
    return 0


def cmd_basechange(args) -> int:
    if args.op == "cofinality":
        if args.coeffs is None or args.rho is None or args.rho_prime is None:
            raise UsageError("cofinality needs --coeffs, --rho and --rho-prime")
        coeffs = {Fraction(k): jsonio.parse_rational(v) for k, v in args.coeffs.items()}
        res = bc.cofinality_check(coeffs, args.rho, args.rho_prime)
        print(
            _out(
                {
                    "l1_at_rho_prime": jsonio.norm_to_json(res.l1_at_rho_prime),
                    "sup_at_rho": jsonio.norm_to_json(res.sup_at_rho),
                    "bound": jsonio.norm_to_json(res.bound),
                    "geometric": res.geometric,
                }
            )
        )
        return 0
    f = jsonio.load_element(_read_input(args.f))
    if not isinstance(f, bc.F1Element):
        raise UsageError("expected a base-change element")
    if args.op == "norm":
        print(_out({"norm": jsonio.norm_to_json(bc.bc_norm(f, bc.GaussNormSpec(args.mode)))}))
        return 0
    if args.g is None:
        raise UsageError("convolve needs --g")
    g = jsonio.load_element(args.g)
    h = bc.convolve(f, g)
    print(_out({"product": jsonio.dump_element(h), "norm": jsonio.norm_to_json(bc.bc_norm(h))}))
    return 0


def cmd_quotient(args) -> int:
    if args.op == "cokernel":
        if args.r_prime is None or args.radius is None or args.n is None:
            raise UsageError("cokernel needs --r-prime, --radius and --n")
        v = mo.quotient_cokernel_norm(args.r_prime, args.radius, args.n)
        print(_out({"n": args.n, "norm": jsonio.norm_to_json(v)}))
        return 0
    if not args.family:
        raise UsageError("frobenius-family needs --family")
    cert = mo.frobenius_family_bound(mo.NormFamily.pairs(args.family), args.p, sources=args.sources)
    out = {}
    for key, c in cert.items():
        out[key] = [{"target": str(args.family[j]), "source": src, "C": jsonio.norm_to_json(C)} for j, src, C in c.entries]
    print(_out(out))
    return 0


def cmd_spectrum(args) -> int:
    if args.op == "export":
        sys.stdout.write(sp.export_tree(args.max_prime, args.samples, args.overlay, args.format))
        return 0
    if args.point is None:
        raise UsageError(f"{args.op} needs --point")
    pt = sp.parse_point(args.point)
    if args.op == "eval":
        if args.n is None:
            raise UsageError("eval needs --n")
        print(_out({"point": pt.label, "n": args.n, "value": jsonio.norm_to_json(sp.eval_point(pt, args.n))}))
        return 0
    rep = sp.validate_point(pt, range(-args.range, args.range + 1))
    print(_out({"point": rep.label, "pairs": rep.pairs, "status": "pass"}))
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    code = 0
    for name in names:
        try:
            res = run_suite(name, args.seed)
            print(_out({"suite": name, "status": "pass", **res}))
        except CounterexampleFound as exc:
            print(_out({"suite": name, "status": "fail", "message": str(exc), "witness": exc.witness}))
            code = 1
    return code


_COMMANDS = {
    "norm": cmd_norm,
    "witt": cmd_witt,
    "basechange": cmd_basechange,
    "quotient": cmd_quotient,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


def _jsonable(w):
    try:
        json.dumps(w)
        return w
    except TypeError:
        return str(w)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except SystemExit as exc:
        # --help exits through argparse
        return int(exc.code or 0)
    except (CounterexampleFound, NotBounded) as exc:
        print(_out({"status": "fail", "message": str(exc), "witness": _jsonable(exc.witness)}))
        return 1
    except (F1AnError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        print(f"f1an: error: {exc}", file=sys.stderr)
        return 2


def run(argv: Sequence[str], stdin: str = "") -> tuple[int, str, str]:
    """Run the CLI in-process, capturing its output."""
    import io
    from contextlib import redirect_stderr, redirect_stdout

    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
