"""Command-line entry point.

Exit codes: 0 success, 1 computation failed (error JSON on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import mpmath

from . import bounds, forms, reduction, smoothness
from .rings import GF, FiniteField
from .symmetric import CoeffVector, parse_scalar_list

SCHEMA_VERSION = 1


def _schema(name: str) -> str:
    return f"tschirnhaus/{name}/{SCHEMA_VERSION}"


class VerificationFailed(ArithmeticError):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _coeffs(text: str) -> CoeffVector:
    try:
        return CoeffVector(parse_scalar_list(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}: {exc}")


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit_json(obj: dict, out) -> None:
    out.write(json.dumps(obj, indent=2))
    out.write("\n")


# -- subcommands -----------------------------------------------------------------

def cmd_bounds(args, out) -> int:
    rows = bounds.bounds_table(args.max_r)
    fmt = "json" if args.json else args.format
    if fmt == "json":
        _emit_json({"schema": _schema("bounds"), "rounding": args.rounding,
                    "rows": [r.to_json(args.rounding) for r in rows]}, out)
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["r", "fw", "prior", "prior_source", "ratio_2dp", "d", "k"])
        for r in rows:
            d, k = r.minimizer or ("", "")
            w.writerow([r.r, r.fw, r.prior, r.prior_source, r.ratio_display(2, args.rounding), d, k])
    else:
        out.write("| r | FW(r) | (d, k) | prior bound | source | prior / FW |\n")
        out.write("|---|---|---|---|---|---|\n")
        for r in rows:
            dk = f"({r.minimizer[0]}, {r.minimizer[1]})" if r.minimizer else "-"
            out.write(f"| {r.r} | {r.fw} | {dk} | {r.prior} | {r.prior_source} | "
                      f"{r.ratio_display(2, args.rounding)} |\n")
    return 0


def cmd_psi(args, out) -> int:
    seq = bounds.psi_sequence(args.d, args.k)
    if args.json:
        _emit_json({"schema": _schema("psi"), "d": args.d, "k": args.k,
                    "psi": list(seq.psi), "phi": bounds.phi(args.d, args.k)}, out)
    else:
        out.write(f"{seq}\n")
    return 0


def cmd_form(args, out) -> int:
    form = forms.tschirnhaus_form(args.n, args.i, args.reduced)
    if args.pencil:
        poly = forms.radical_specialize(form, args.pencil)
        if args.json:
            _emit_json({"schema": _schema("form"), "n": args.n, "i": args.i,
                        "reduced": args.reduced, "pencil": args.pencil,
                        "poly": poly.to_json()}, out)
        else:
            out.write(f"{poly}\n")
        return 0
    if args.json:
        _stream_form_json(form, out)
        return 0
    for piece in forms.iter_form_text(form, expand=not args.unexpanded):
        out.write(piece)
    out.write("\n")
    return 0


def _stream_form_json(form, out) -> None:
    """Same layout as MultiPoly.to_json, written term by term."""
    names = list(form.vars)
    head = {"schema": _schema("form"), "n": form.n, "i": form.i, "reduced": form.reduced}
    out.write(json.dumps(head)[:-1])
    out.write(', "poly": {"ring": "ZZ", "vars": ' + json.dumps(names) + ', "terms": [')
    ps = form.power_sums()
    first = True
    for kappa, mult, w in form.iter_kappa():
        for mu, c in ps[w].items():
            exp = list(kappa) + list(mu)
            out.write(("" if first else ", ") + json.dumps({"exp": exp, "coeff": str(mult * c)}))
            first = False
    out.write("]}}\n")


def cmd_transform(args, out) -> int:
    a, b = args.coeffs, args.b
    if len(b.a) != len(a.a):
        raise ValueError(f"--b needs {len(a.a)} entries (b_0..b_{len(a.a) - 1}), got {len(b.a)}")
    c = forms.transform_coeffs_oracle(a, b) if args.oracle else forms.transform_coeffs(a, b)
    if args.json:
        _emit_json({"schema": _schema("transform"), "a": str(a).split(","),
                    "b": str(b).split(","), "c": str(c).split(","),
                    "method": "oracle" if args.oracle else "newton"}, out)
    else:
        out.write(f"{c}\n")
    return 0


def _reduce_one(a, level, seed, tol):
    trace = reduction.reduce(a, level, seed, tol)
    return trace, reduction.verify_trace(trace, tol)


def cmd_reduce(args, out) -> int:
    jobs = args.coeffs
    work = [(a.a, args.level, args.seed, args.tol) for a in jobs]
    if args.threads > 1 and len(jobs) > 1:
        # mpmath keeps its precision in a process-wide context, so threads
        # would race on it; separate processes keep runs independent
        with ProcessPoolExecutor(max_workers=min(args.threads, len(jobs))) as pool:
            results = list(pool.map(_reduce_one, *zip(*work)))
    else:
        results = [_reduce_one(*w) for w in work]
    failed = [i for i, (_, rep) in enumerate(results) if not rep.ok]
    if args.json:
        payload = [{"trace": t.to_json(), "verification": r.to_json()} for t, r in results]
        body = payload[0] if len(payload) == 1 else {"results": payload}
        _emit_json({"schema": _schema("reduce"), "tol": args.tol, **body}, out)
    else:
        for (trace, rep), a in zip(results, jobs):
            step = trace.steps[-1]
            out.write(f"a = {a}\n")
            out.write(f"level = {trace.level}, seed = {trace.seed}, attempts = {trace.attempts}\n")
            out.write("b = " + ", ".join(_fmt_c(x) for x in step.b) + "\n")
            out.write("c = " + ", ".join(_fmt_c(x) for x in step.c) + "\n")
            if step.exact_b is not None:
                out.write("b (exact) = " + ", ".join(str(x) for x in step.exact_b) + "\n")
            for k, v in trace.residuals.items():
                out.write(f"residual p_{k} = {reduction._num(v, 6)}\n")
            out.write(f"root correspondence = {reduction._num(trace.root_deviation, 6)}\n")
            out.write(f"verified = {rep.ok}\n")
    if failed:
        raise VerificationFailed(f"verification failed for input(s) {failed}",
                                 {"failed_inputs": failed})
    return 0


def _fmt_c(x, digits: int = 15) -> str:
    x = mpmath.mpc(x)
    if x.imag == 0:
        return mpmath.nstr(x.real, digits)
    return mpmath.nstr(x, digits)


def cmd_certify(args, out) -> int:
    cert = smoothness.orbit_certificate(args.n, args.p, args.r)
    cert.check()
    _emit_json({"schema": _schema("certificate"), **cert.to_json()}, out)
    return 0


def _field(args) -> FiniteField:
    if args.modulus:
        return FiniteField(args.p, args.m, args.modulus)
    return GF(args.p, args.m)


def cmd_verify_smooth(args, out) -> int:
    if args.certificate:
        n, p, r = args.certificate
        cert = smoothness.orbit_certificate(n, p, r)
        report = smoothness.verify_certificate(cert, args.budget, args.scope, args.threads)
        extra = {"certificate": {"n": n, "p": p, "r": r, "bound_N": cert.bound_N}}
    else:
        if args.n is None or args.p is None or args.a is None:
            raise ValueError("give --certificate N P R, or --n, --p and --a")
        F = _field(args)
        report = smoothness.brute_force_smooth(
            args.n, args.degrees, F, F.from_int(args.a) if F.m == 1 else F(args.a),
            pencil=args.pencil, reduced=args.reduced, normalize=not args.raw,
            scope=args.scope, budget=args.budget, threads=args.threads)
        extra = {}
    payload = {"schema": _schema("smoothness"), **extra, **report.to_json()}
    _emit_json(payload, out)
    if not report.smooth:
        raise VerificationFailed(f"{report.singular_count} singular point(s) found", payload)
    return 0


def cmd_disc_scaling(args, out) -> int:
    rep = smoothness.quadric_discriminant_scaling(args.n, args.trials, args.seed)
    if args.json:
        _emit_json({"schema": _schema("disc-scaling"), **rep.to_json()}, out)
    else:
        out.write(f"n = {rep.n}, trials = {len(rep.samples)}\n")
        out.write(f"det / disc constant: {rep.constant}\n")
        out.write(f"value: {rep.value}\n")
    if not rep.constant:
        raise VerificationFailed("det / disc is not constant", rep.to_json())
    return 0


def cmd_rho_search(args, out) -> int:
    rho = bounds.rho_search(args.d, args.k_max)
    if args.json:
        _emit_json({"schema": _schema("rho-search"), "d": args.d, "k_max": args.k_max,
                    "rho": rho, "exploratory": True}, out)
    else:
        out.write(f"{'none' if rho is None else rho}\n")
    return 0


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1,
                        help="worker pool size (default: available CPUs)")

    parser = argparse.ArgumentParser(prog="tschirnhaus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="FW(r) table")
    p.add_argument("what", choices=["table"])
    p.add_argument("--max-r", type=int, default=15)
    p.add_argument("--format", choices=["md", "csv", "json"], default="md")
    p.add_argument("--rounding", choices=["down", "half-up"], default="down")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("psi", parents=[common], help="psi sequence for (d, k)")
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("form", parents=[common], help="emit the Tschirnhaus form T_i")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--i", type=_positive, required=True)
    p.add_argument("--reduced", action="store_true", help="set b_{n-1} = 0")
    p.add_argument("--pencil", choices=forms.PENCILS, help="specialize to a one-parameter pencil")
    p.add_argument("--unexpanded", action="store_true", help="keep p_k symbolic")
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("transform", parents=[common], help="coefficients of the transformed polynomial")
    p.add_argument("--coeffs", type=_coeffs, required=True, help="a_1,...,a_n")
    p.add_argument("--b", type=_coeffs, required=True, help="b_0,...,b_{n-1}")
    p.add_argument("--oracle", action="store_true", help="use the characteristic-polynomial oracle")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reduce", parents=[common], help="reduce to principal or Bring form")
    p.add_argument("--coeffs", type=_coeffs, required=True, action="append",
                   help="a_1,...,a_n (repeat for a batch)")
    p.add_argument("--level", choices=sorted(reduction.LEVELS), default="principal")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("certify", parents=[common], help="orbit certificate for i = p^r + 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify-smooth", parents=[common], help="brute-force smoothness over a finite field")
    p.add_argument("--certificate", type=int, nargs=3, metavar=("N", "P", "R"))
    p.add_argument("--n", type=int)
    p.add_argument("--degrees", type=_int_list, default=(1, 2))
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--modulus", type=_int_list, help="field modulus coefficients, constant first")
    p.add_argument("--a", type=int, help="pencil parameter (integer image, or encoding when m > 1)")
    p.add_argument("--pencil", choices=forms.PENCILS, default="radical")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--raw", action="store_true", help="skip content normalization")
    p.add_argument("--scope", choices=["variety", "all"], default="variety")
    p.add_argument("--budget", type=int, default=smoothness.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify_smooth)

    p = sub.add_parser("disc-scaling", parents=[common], help="det(T_12 Gram) / disc at random points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_disc_scaling)

    p = sub.add_parser("rho-search", parents=[common], help="exploratory search for rho(d)")
    p.add_argument("d", type=int)
    p.add_argument("--k-max", type=int, default=25)
    p.set_defaults(func=cmd_rho_search)
    return parser


def _error(kind: str, exc: BaseException, payload: dict | None = None) -> None:
    body = {"schema": _schema("error"), "error": kind, "type": type(exc).__name__,
            "message": str(exc)}
    if payload:
        body["details"] = payload
    sys.stderr.write(json.dumps(body) + "\n")


_VALUE_FLAGS = {"--coeffs", "--b", "--modulus", "--degrees"}


def _attach_negative_values(argv: list) -> list:
    """Turn ``--coeffs -3,2`` into ``--coeffs=-3,2`` so argparse keeps the value."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(tok)
    return out


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except VerificationFailed as exc:
        _error("verification", exc, exc.payload)
        return 1
    except (ValueError, TypeError, KeyError) as exc:
        _error("usage", exc)
        return 2
    except (ArithmeticError, RuntimeError) as exc:
        _error("computation", exc)
        return 1
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
