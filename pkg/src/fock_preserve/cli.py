"""Command-line front end.

Every subcommand reads JSON input files, runs one library operation and
writes a deterministic report (sorted keys) echoing the configuration, the
seed and the library version.  Exit status: 0 when the computation finished,
1 when a property was refuted, 2 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any

from . import __version__
from .fock import GaussianForm, GaussQuad, Weight, apply_integral_rep, fock_inner, fock_norm_sq
from .leeyang import (
    HypothesisError,
    SpinModel,
    fugacity_zeros,
    gls_compose,
    has_ly_property,
    measure_from_json,
    transform,
)
from .operators import (
    NotPreserver,
    apply_op,
    classify_preserver,
    dual_symbol,
    op_from_json,
    symbol,
    table_from_symbol,
)
from .poly import MPoly, multi_indices
from .stability import Region, check

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


def _sanitize(obj: Any) -> Any:
    """Make a report strictly JSON: non-finite floats become strings, complex becomes re/im."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else "-inf" if obj < 0 else "nan")
    if isinstance(obj, complex):
        return {"re": _sanitize(obj.real), "im": _sanitize(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _load(path: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg}", path=path, line=exc.lineno,
                         column=exc.colno) from None


def _weight(raw: str | None, default: Any, n: int, name: str) -> Weight:
    value = default if raw is None else [float(x) for x in raw.split(",")]
    if value is None:
        raise InputError(f"missing weight {name}")
    try:
        return Weight.of(value, n)
    except ValueError as exc:
        raise InputError(f"invalid weight {name}: {exc}") from None


def _poly(data: Any) -> MPoly:
    if isinstance(data, dict) and "poly" in data:
        data = data["poly"]
    return MPoly.from_json(data)


def _poly_rows(p: MPoly) -> list[list]:
    return [[" ".join(map(str, a)), c.real, c.imag] for a, c in p.items()]


# ---------------------------------------------------------------------------
# commands; each returns (exit_code, result dict, csv rows or None)


def cmd_check_stable(args):
    data = _load(args.input)
    p = _poly(data)
    region = Region(args.region)
    v = check(p, region, args.trials, args.seed, args.tol)
    return (EXIT_REFUTED if v.refuted else EXIT_OK), {"verdict": v.to_json(), "region": region.value}, None


def cmd_symbol(args):
    T = op_from_json(_load(args.input))
    G = symbol(T, args.degree)
    return EXIT_OK, {"symbol": G.to_json()}, (["alpha", "re", "im"], _poly_rows(G.poly))


def cmd_classify(args):
    T = op_from_json(_load(args.input))
    res = classify_preserver(T, args.field, args.degree, args.trials, args.seed, args.tol)
    code = EXIT_REFUTED if res.refuted else EXIT_OK
    out = res.to_json()
    if isinstance(res, NotPreserver):
        out["witness_text"] = repr(res.witness)
        out["image_text"] = repr(res.image)
    return code, {"classification": out}, None


def cmd_fock_norm(args):
    data = _load(args.input)
    p = _poly(data)
    beta = _weight(args.beta, data.get("beta") if isinstance(data, dict) else None, p.nvars, "beta")
    value = fock_norm_sq(p, beta)
    return EXIT_OK, {"value": value, "beta": beta.to_json(), "mode": "exact"}, None


def cmd_apply(args):
    T = op_from_json(_load(args.operator))
    data = _load(args.input)
    f = _poly(data)
    alpha = _weight(args.alpha, data.get("alpha", 1.0) if isinstance(data, dict) else 1.0, T.n_in, "alpha")
    direct = apply_op(T, f)
    quad = GaussQuad.monte_carlo(args.samples, args.seed) if args.mode == "montecarlo" else GaussQuad.exact()
    rep = apply_integral_rep(T, f, alpha, quad, args.degree)
    agree = rep.agrees_with(direct)
    result = {"direct": direct.to_json(), "integral": rep.to_json(), "agree": agree,
              "max_rel_diff": direct.max_rel_diff(rep.poly), "alpha": alpha.to_json(),
              "truncation_degree": args.degree}
    return EXIT_OK, result, (["alpha", "re", "im"], _poly_rows(direct))


def cmd_adjoint(args):
    T = op_from_json(_load(args.input))
    alpha = _weight(args.alpha, 1.0, T.n_in, "alpha")
    beta = _weight(args.beta, 1.0, T.m_out, "beta")
    D = args.degree
    G = symbol(T, D)
    Gs = dual_symbol(G, alpha.beta, beta.beta)
    Tstar = table_from_symbol(Gs)
    rows = []
    worst = 0.0
    for a in multi_indices(T.n_in, D):
        f = MPoly.monomial(a)
        Tf = apply_op(T, f)
        for g_idx in multi_indices(T.m_out, D):
            g = MPoly.monomial(g_idx)
            lhs = fock_inner(Tf, g, beta)
            rhs = fock_inner(f, Tstar.apply(g), alpha)
            res = abs(lhs - rhs) / (1 + abs(lhs))
            worst = max(worst, res)
            rows.append([" ".join(map(str, a)), " ".join(map(str, g_idx)), lhs.real, lhs.imag, rhs.real, rhs.imag,
                         res])
    result = {"dual_symbol": Gs.to_json(), "max_residual": worst, "pairs": len(rows),
              "residuals": [dict(zip(["f", "g", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"], r))
                            for r in rows]}
    header = ["f", "g", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"]
    return EXIT_OK, result, (header, rows)


def cmd_ly_zeros(args):
    model = SpinModel.from_json(_load(args.input))
    direction = None if args.direction is None else [int(x) for x in args.direction.split(",")]
    z = fugacity_zeros(model, direction)
    return EXIT_OK, z.to_json(), (["re(u)", "im(u)", "|u|-1"], [list(r) for r in z.csv_rows()])


def cmd_transform(args):
    mu = measure_from_json(_load(args.input))
    T = transform(mu, args.degree)
    rep = has_ly_property(mu)
    code = EXIT_OK if rep.holds else EXIT_REFUTED
    return code, {"transform": T.to_json(), "lee_yang": rep.to_json()}, \
        (["alpha", "re", "im"], _poly_rows(T.truncation))


def cmd_gls(args):
    data = _load(args.input)
    if not isinstance(data, dict):
        raise InputError("gls input must be a JSON object")
    try:
        if "measure" in data:
            src_deg = int(data.get("source_degree", args.degree + 40))
            phi_hat = transform(measure_from_json(data["measure"]), src_deg).truncation
        else:
            phi_hat = MPoly.from_json(data["phi_hat"])
        graw = data.get("g", {"nvars": phi_hat.nvars, "terms": [{"alpha": [0] * phi_hat.nvars, "re": 1.0}]})
        g = GaussianForm.from_json(graw) if graw.get("kind") == "gaussian" else MPoly.from_json(graw)
        n = phi_hat.nvars
        beta = Weight.of(data["beta"], n)
        alpha = Weight.of(data["alpha"], n)
        gamma = Weight.of(data["gamma"], n)
    except KeyError as exc:
        raise InputError(f"gls input is missing key {exc.args[0]!r}") from None
    res = gls_compose(phi_hat, beta, g, alpha, gamma, args.degree, args.trials, args.seed, args.tol)
    return (EXIT_REFUTED if res.verdict.refuted else EXIT_OK), res.to_json(), \
        (["alpha", "re", "im"], _poly_rows(res.psi_hat))


COMMANDS = {
    "check-stable": cmd_check_stable,
    "symbol": cmd_symbol,
    "classify": cmd_classify,
    "fock-norm": cmd_fock_norm,
    "apply": cmd_apply,
    "adjoint": cmd_adjoint,
    "ly-zeros": cmd_ly_zeros,
    "transform": cmd_transform,
    "gls": cmd_gls,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=8, help="truncation degree D (default 8)")
    common.add_argument("--trials", type=int, default=1000, help="random line restrictions (default 1000)")
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--tol", type=float, default=1e-9, help="root margin tolerance (default 1e-9)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="fock-preserve", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-stable", parents=[common], help="stability / real-rootedness / Lee-Yang check")
    p.add_argument("input", help="polynomial JSON")
    p.add_argument("--region", choices=[r.value for r in Region], default="upper")

    p = sub.add_parser("symbol", parents=[common], help="truncated operator symbol")
    p.add_argument("input", help="operator JSON")

    p = sub.add_parser("classify", parents=[common], help="classify a linear operator as a stability preserver")
    p.add_argument("input", help="operator JSON")
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = sub.add_parser("fock-norm", parents=[common], help="squared weighted Fock norm")
    p.add_argument("input", help="polynomial JSON (optionally {\"poly\": ..., \"beta\": [...]})")
    p.add_argument("--beta", default=None, help="comma-separated weights")

    p = sub.add_parser("apply", parents=[common], help="apply an operator directly and via its integral form")
    p.add_argument("operator", help="operator JSON")
    p.add_argument("input", help="polynomial JSON")
    p.add_argument("--alpha", default=None, help="comma-separated weights of the source space")
    p.add_argument("--mode", choices=("exact", "montecarlo"), default="exact")
    p.add_argument("--samples", type=int, default=20000)

    p = sub.add_parser("adjoint", parents=[common], help="dual symbol and duality residuals")
    p.add_argument("input", help="operator JSON")
    p.add_argument("--alpha", default=None, help="weights of the source space (default 1)")
    p.add_argument("--beta", default=None, help="weights of the target space (default 1)")

    p = sub.add_parser("ly-zeros", parents=[common], help="fugacity zeros of an Ising model")
    p.add_argument("input", help="spin model JSON")
    p.add_argument("--direction", default=None, help="comma-separated positive integers (default all ones)")

    p = sub.add_parser("transform", parents=[common], help="Fourier-Laplace transform of a measure")
    p.add_argument("input", help="measure JSON")

    p = sub.add_parser("gls", parents=[common], help="compose a Lee-Yang functional with a multiplier")
    p.add_argument("input", help="JSON with measure or phi_hat, g, alpha, beta, gamma")
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")} | {"format": args.format}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_report(payload: dict) -> str:
    return json.dumps(_sanitize(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    base = {"command": args.command, "config": config, "seed": args.seed, "version": __version__}
    try:
        if args.tol <= 0 or args.trials < 1 or args.degree < 0:
            raise InputError("tol must be positive, trials at least 1 and degree nonnegative")
        code, result, table = COMMANDS[args.command](args)
    except HypothesisError as exc:
        report = base | {"exit_code": EXIT_INPUT, "error": str(exc), "hypothesis": exc.hypothesis}
        _emit(_json_report(report), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        report = base | {"exit_code": EXIT_INPUT, "error": str(exc)} | exc.details
        _emit(_json_report(report), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError, KeyError) as exc:
        msg = f"invalid input: {exc}"
        _emit(_json_report(base | {"exit_code": EXIT_INPUT, "error": msg}), args.out)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT

    if args.format == "csv":
        if table is None:
            msg = f"csv output is not available for {args.command}"
            _emit(_json_report(base | {"exit_code": EXIT_INPUT, "error": msg}), args.out)
            print(f"error: {msg}", file=sys.stderr)
            return EXIT_INPUT
        header, rows = table
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[repr(x) if isinstance(x, float) else x for x in r] for r in rows])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_json_report(base | {"exit_code": code, "result": result}), args.out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
