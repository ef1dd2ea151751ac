"""Command-line front end.

Subcommands
-----------
classify   classify a linear fractional self-map of the disk
block      build a truncated matrix block and export it
probe      run the normality-class defect probes on an operator
spectrum   eigenvalue clouds, rotation spectra, parabolic spiral samples
scenario   list or run the named verification scenarios

Exit codes: 0 success or PASS, 1 internal error, 2 invalid input,
3 constraint violation, 4 scenario FAIL.

Numeric output is printed with 12 significant digits.  Map, operator, and
expression JSON schemas are the ones produced by the corresponding
``to_json`` methods, so every emitted JSON document re-parses.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConstraintError, InputError, WcolabError
from .mobius import MoebiusMap, classify, parabolic_from
from .opmat import (
    OperatorSpec,
    block_to_csv,
    build_block,
    composition,
    default_internal_order,
    operator_norm_estimate,
    toeplitz,
)
from .probes import defect_report, hyponormality_probe
from .scenarios import Overrides, list_scenarios, run_all, run_scenario
from .series import expr_from_json
from .space import SpaceSpec
from .spectra import (
    DEFAULT_BETA_GRID,
    eigen_residual,
    rotation_spectrum,
    spectral_radius_estimate,
    spiral_curve,
    truncation_eigenvalues,
)

MIN_ORDER = 4


def fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def fmt_c(z: complex) -> str:
    z = complex(z)
    return f"{z.real + 0.0:.12g}{z.imag + 0.0:+.12g}j"


def _load_json_arg(text: str, what: str):
    """Parse inline JSON, or JSON from a file when the value starts with @."""
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                return json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {what} file {text[1:]!r}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON in {what} file {text[1:]!r}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad inline JSON for {what}: {exc}")


def _parse_complex_arg(obj, what: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(obj[0], obj[1])
    if isinstance(obj, str):
        try:
            return complex(obj.replace(" ", ""))
        except ValueError:
            pass
    raise InputError(f"{what} must be a number, a [re, im] pair, or a complex literal")


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _write_csv(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset CLI options from the optional --config JSON file."""
    if not getattr(args, "config", None):
        return
    cfg = _load_json_arg("@" + args.config, "config")
    if not isinstance(cfg, dict):
        raise InputError("config file must hold a JSON object")
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _resolve_space(args) -> SpaceSpec:
    return SpaceSpec.parse(args.space if args.space is not None else "hardy")


def _resolve_orders(args, ops=None) -> tuple[int, int]:
    n = int(args.order) if args.order is not None else 16
    if n < MIN_ORDER:
        raise InputError(f"--order must be at least {MIN_ORDER}, got {n}")
    if args.tail is not None:
        m = int(args.tail)
        if m < 2 * n:
            raise InputError(f"--tail must be at least 2*order = {2 * n}, got {m}")
    elif ops is not None:
        m = default_internal_order(n, ops)
    else:
        m = max(8 * n, 160)
    return n, m


def _resolve_tol(args, default: float = 1e-10) -> float:
    tol = float(args.tol) if args.tol is not None else default
    if tol <= 0:
        raise InputError(f"--tol must be positive, got {tol}")
    return tol


def _operator_from_args(args) -> OperatorSpec:
    given = [x for x in (args.op, args.map, args.weight) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --op, --map, --weight")
    if args.op is not None:
        return OperatorSpec.from_json(_load_json_arg(args.op, "operator"))
    if args.map is not None:
        return composition(MoebiusMap.from_json(_load_json_arg(args.map, "map")))
    return toeplitz(expr_from_json(_load_json_arg(args.weight, "weight")))


# -- subcommands --------------------------------------------------------------


def cmd_classify(args) -> int:
    m = MoebiusMap.from_json(_load_json_arg(args.map, "map"))
    tol = _resolve_tol(args)
    result = classify(m, tol)
    print(f"class: {result.map_class.value}")
    if result.fixed_points is not None:
        for p in result.fixed_points.points:
            loc = "infinity" if not np.isfinite(p.location.real) else fmt_c(p.location)
            print(
                f"fixed point: {loc}  multiplicity {p.multiplicity}"
                f"  derivative {fmt_c(p.derivative)}"
            )
    if result.dw is not None:
        kind = "boundary" if result.dw.boundary else "interior"
        print(
            f"denjoy-wolff: {fmt_c(result.dw.location)} ({kind})"
            f"  derivative {fmt_c(result.dw.derivative)}"
        )
    if result.translation is not None:
        print(f"translation number: {fmt_c(result.translation)}")
    if result.borderline:
        print("borderline: yes")
    for note in result.notes:
        print(f"note: {note}")
    if args.json:
        payload = {"map": m.to_json(), "classification": result.to_json()}
        _write_json(args.json, payload)
    return 0


def cmd_block(args) -> int:
    op = _operator_from_args(args)
    space = _resolve_space(args)
    n, m = _resolve_orders(args, (op,))
    blk = build_block(op, space, n, m)
    print(f"operator: {op.describe()}  space: {space.label()}")
    print(f"orders: N={n} M={m}")
    print(f"norm estimate: {fmt(operator_norm_estimate(blk))}")
    if blk.tail_estimate is not None:
        print(f"tail estimate: {fmt(blk.tail_estimate)}")
    if blk.tail_flag:
        print(
            "warning: boundary-touching symbol or slow coefficient decay; "
            "raise --tail for trustworthy tails"
        )
    if args.csv:
        _write_csv(args.csv, block_to_csv(blk))
    if args.json:
        entries = [
            [[float(v.real), float(v.imag)] for v in row] for row in blk.entries
        ]
        payload = {
            "op": op.to_json(),
            "space": space.to_json(),
            "row_order": blk.row_order,
            "col_order": blk.col_order,
            "entries": entries,
            "tail_flag": bool(blk.tail_flag),
            "tail_estimate": blk.tail_estimate,
        }
        _write_json(args.json, payload)
    return 0


def cmd_probe(args) -> int:
    op = _operator_from_args(args)
    space = _resolve_space(args)
    n, m = _resolve_orders(args, (op,))
    rep = defect_report(op, space, n, m)
    print(f"operator: {op.describe()}  space: {space.label()}  N={rep.N} M={rep.M}")
    print(f"selfcommutator min eigenvalue: {fmt(rep.min_eig_selfcomm)}")
    print(f"selfcommutator norm:           {fmt(rep.norm_selfcomm)}")
    print(f"quasinormal defect:            {fmt(rep.quasinormal_defect)}")
    print(f"selfadjoint defect:            {fmt(rep.selfadjoint_defect)}")
    print(f"unitary defect:                {fmt(rep.unitary_defect)}")
    if rep.tail_bound is not None:
        print(f"tail bound on G1:              {fmt(rep.tail_bound)}")
    for flag in rep.flags:
        print(f"flag: {flag}")
    ev = hyponormality_probe(op, space, n, m)
    verdictline = (
        "negative certificate (not hyponormal)" if ev.certificate else "no certificate"
    )
    print(f"hyponormality: {verdictline}")
    if args.json:
        payload = {
            "op": op.to_json(),
            "space": space.to_json(),
            "N": rep.N,
            "M": rep.M,
            "min_eig_selfcomm": rep.min_eig_selfcomm,
            "norm_selfcomm": rep.norm_selfcomm,
            "quasinormal_defect": rep.quasinormal_defect,
            "selfadjoint_defect": rep.selfadjoint_defect,
            "unitary_defect": rep.unitary_defect,
            "tail_bound": rep.tail_bound,
            "flags": list(rep.flags),
            "hyponormality_certificate": bool(ev.certificate),
        }
        _write_json(args.json, payload)
    return 0


def cmd_spectrum(args) -> int:
    space = _resolve_space(args)
    if args.t is not None:
        t = _parse_complex_arg(args.t, "--t")
        zeta = (
            _parse_complex_arg(args.zeta, "--zeta") if args.zeta is not None else 1.0 + 0j
        )
        phi = parabolic_from(zeta, t)
        samples = int(args.samples) if args.samples is not None else 64
        if samples < 2:
            raise InputError("--samples must be at least 2")
        betas = tuple(float(b) for b in np.linspace(0.0, 8.0, samples))
        spiral = spiral_curve(t, betas)
        order = int(args.order) if args.order is not None else 400
        residuals = [
            (beta, eigen_residual(zeta, t, beta, order)) for beta in DEFAULT_BETA_GRID
        ]
        print(f"parabolic symbol: zeta={fmt_c(zeta)} t={fmt_c(t)}")
        print(f"map: {json.dumps(phi.to_json())}")
        print("eigen residual table (beta, residual):")
        for beta, r in residuals:
            print(f"  {fmt(beta)}  {fmt(r)}")
        if args.csv:
            lines = ["beta,re,im"]
            for beta, lam in spiral:
                lines.append(f"{beta:.17g},{lam.real:.17g},{lam.imag:.17g}")
            _write_csv(args.csv, "\n".join(lines) + "\n")
        if args.json:
            payload = {
                "map": phi.to_json(),
                "zeta": [zeta.real, zeta.imag],
                "t": [t.real, t.imag],
                "spiral": [[b, [v.real, v.imag]] for b, v in spiral],
                "residuals": [[b, r] for b, r in residuals],
            }
            _write_json(args.json, payload)
        return 0

    op = _operator_from_args(args)
    n, m = _resolve_orders(args, (op,))
    eigs = truncation_eigenvalues(build_block(op, space, n, m))
    gelfand = spectral_radius_estimate(op, space, n, k_max=12, M=m)
    radius = gelfand[-1]
    print(f"operator: {op.describe()}  space: {space.label()}  N={n}")
    print(f"gelfand radius estimate (k=12): {fmt(radius)}")
    print("truncation eigenvalues (diagnostic only, largest first):")
    for lam in eigs[: min(len(eigs), 12)]:
        print(f"  {fmt_c(lam)}")
    exact = None
    if op.symbol is not None and op.describe() == "composition":
        sym = op.symbol
        if abs(sym.b) <= 1e-14 and abs(sym.c) <= 1e-14:
            lam = sym.a / sym.d
            exact = rotation_spectrum(lam)
            print(f"rotation symbol detected: spectrum kind {exact.kind}")
            if exact.points is not None:
                for p in exact.points:
                    print(f"  {fmt_c(p)}")
    if args.csv:
        lines = ["re,im"]
        for lam in eigs:
            lines.append(f"{lam.real:.17g},{lam.imag:.17g}")
        _write_csv(args.csv, "\n".join(lines) + "\n")
    if args.json:
        payload = {
            "op": op.to_json(),
            "space": space.to_json(),
            "N": n,
            "gelfand_sequence": [float(v) for v in gelfand],
            "eigenvalues": [[v.real, v.imag] for v in eigs],
        }
        if exact is not None:
            payload["rotation_spectrum"] = {
                "kind": exact.kind,
                "points": None
                if exact.points is None
                else [[p.real, p.imag] for p in exact.points],
            }
        _write_json(args.json, payload)
    return 0


def cmd_scenario(args) -> int:
    if args.action == "list":
        for sid, claim in list_scenarios():
            print(f"{sid}: {claim}")
        return 0
    ov = Overrides(
        order_scale=float(args.order_scale) if args.order_scale is not None else 1.0,
        N=int(args.order) if args.order is not None else None,
        M=int(args.tail) if args.tail is not None else None,
    )
    if args.all:
        reports = run_all(ov)
    elif args.id:
        reports = [run_scenario(args.id, ov)]
    else:
        raise InputError("scenario run needs --id <scenario> or --all")
    failed = False
    for rep in reports:
        print(f"{rep.scenario_id}: {rep.verdict}  ({rep.runtime_s:.2f}s)")
        for c in rep.checks:
            if c.passed is None:
                mark = "info"
            else:
                mark = "pass" if c.passed else "FAIL"
            value = fmt(c.value) if isinstance(c.value, float) else c.value
            print(f"  [{mark}] {c.name}: {value}  ({c.threshold}; {c.source})")
        failed = failed or rep.verdict == "FAIL"
    if args.json:
        payload = {"reports": [rep.to_json() for rep in reports]}
        _write_json(args.json, payload)
    return 4 if failed else 0


# -- parser -------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, orders: bool = True) -> None:
    p.add_argument("--space", help="hardy or bergman:<alpha>")
    if orders:
        p.add_argument("--order", help="matrix truncation order N")
        p.add_argument("--tail", help="internal coefficient order M (default policy-chosen)")
    p.add_argument("--tol", help="tolerance override")
    p.add_argument("--json", help="write a JSON report to this path ('-' for stdout)")
    p.add_argument("--csv", help="write a CSV artifact to this path ('-' for stdout)")
    p.add_argument("--config", help="JSON config file with default option values")


def _add_operator_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--op", help="operator JSON (weight + optional symbol), inline or @file")
    p.add_argument("--map", help="map JSON for a plain composition operator")
    p.add_argument("--weight", help="expression JSON for a plain Toeplitz operator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcolab",
        description="numerical laboratory for weighted composition operators "
        "on Hardy and Bergman spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a linear fractional self-map")
    p.add_argument("--map", required=True, help="map JSON, inline or @file")
    _add_common(p, orders=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("block", help="build a truncated matrix block")
    _add_operator_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("probe", help="normality-class defect probes")
    _add_operator_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("spectrum", help="eigenvalue clouds and parabolic spirals")
    _add_operator_args(p)
    p.add_argument("--t", help="translation number for a parabolic symbol")
    p.add_argument("--zeta", help="boundary fixed point (default 1)")
    p.add_argument("--samples", help="spiral sample count (default 64)")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scenario", help="list or run verification scenarios")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("--id", help="scenario id to run")
    p.add_argument("--all", action="store_true", help="run every scenario")
    p.add_argument("--order-scale", help="scale factor applied to default orders")
    _add_common(p)
    p.set_defaults(func=cmd_scenario)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConstraintError as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return 3
    except WcolabError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
