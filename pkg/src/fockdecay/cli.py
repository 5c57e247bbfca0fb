"""Command-line interface: figure-reproduction data dumps and the validation suite.

Commands
--------
grid         Wigner function W(x, p) on a square grid, one CSV per (n, tau)
eta          negative-volume sweep over (n, tau) -> CSV
peak         peak quantum eigenstate vs tau -> CSV
populations  occupation probabilities p_k(tau) -> CSV
validate     run every oracle/metric invariant -> JSON report

Outputs are deterministic: identical configurations produce byte-identical
files.  Every CSV starts with a ``#`` metadata line recording the tool
version and the fully resolved parameter set.

Exit codes: 0 success, 1 computation or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, metrics, oracles
from .states import DecoherenceParams, N_MAX, mixture_coefficients, wigner_radial

_FMT = "{:.16e}"  # 17 significant digits, enough to round-trip doubles

PRESETS = {
    "fig1a": {
        "command": "grid",
        "n": [1, 4, 7],
        "tau": [0.0, 0.15, 0.3],
        "grid_extent": 5.0,
        "grid_step": 0.05,
    },
    "fig1b": {"command": "eta", "n": [1, 4, 7], "tau": "0:1:0.01"},
    "fig1c": {"command": "eta", "n_max": 20, "tau": [0.15, 0.20, 0.25, 0.30]},
    "fig2a": {"command": "peak", "n_max": 20, "tau": "0.01:0.5:0.01"},
    "fig2b": {"command": "populations", "n": [1, 3], "tau": "0:3:0.01"},
}


def _parse_tau_token(token: str):
    """One --tau argument: either a float or an a:b:step range (inclusive)."""
    if ":" in token:
        parts = token.split(":")
        if len(parts) != 3:
            raise ValueError(f"range syntax is a:b:step, got {token!r}")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError(f"invalid range {token!r}")
        count = int(round((b - a) / step))
        values = [round(a + i * step, 12) for i in range(count + 1)]
        return [v for v in values if v <= b + step * 1e-9]
    return [float(token)]


def _resolve_taus(tokens):
    out = []
    for token in tokens:
        out.extend(_parse_tau_token(str(token)))
    return out


def _meta_line(command: str, params: dict) -> str:
    parts = [f"fockdecay {__version__}", f"command={command}"]
    for key in sorted(params):
        parts.append(f"{key}={params[key]}")
    return "# " + " | ".join(parts)


def _write_csv(path: Path, meta: str, header: list, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(meta + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _fmt(value: float) -> str:
    return _FMT.format(float(value))


def _axis(extent: float, step: float) -> np.ndarray:
    count = int(round(2.0 * extent / step))
    return np.array([round(-extent + i * step, 12) for i in range(count + 1)])


def cmd_grid(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    axis = _axis(args.grid_extent, args.grid_step)
    xs, ps = np.meshgrid(axis, axis, indexing="ij")
    r2 = (xs * xs + ps * ps).ravel()
    for n in args.n:
        for tau in args.tau:
            params = DecoherenceParams(n, tau, args.nbar)
            if args.nbar == 0.0:
                w = wigner_radial(params, r2)
            else:
                # Thermal path: one Hankel inversion per distinct radius.
                unique_r2, inverse = np.unique(r2, return_inverse=True)
                values = np.array([
                    oracles.hankel_wigner(params, math.sqrt(s)) for s in unique_r2
                ])
                w = values[inverse]
            meta = _meta_line("grid", {
                "n": n, "tau": tau, "nbar": args.nbar,
                "grid_extent": args.grid_extent, "grid_step": args.grid_step,
            })
            rows = (
                [_fmt(x), _fmt(p), _fmt(val)]
                for x, p, val in zip(xs.ravel(), ps.ravel(), w)
            )
            name = f"wigner_grid_n{n}_tau{tau:g}.csv"
            _write_csv(out_dir / name, meta, ["x", "p", "W"], rows)
            print(out_dir / name)
    return 0


def cmd_eta(args) -> int:
    n_values = args.n if args.n else list(range(args.n_max + 1))
    rows = []
    failed = []
    for n in n_values:
        for tau in args.tau:
            try:
                res = metrics.negative_volume(n, tau, tol=args.tol)
                rows.append([str(n), _fmt(tau), _fmt(res.value), res.method,
                             _fmt(res.error_estimate)])
            except (ValueError, RuntimeError) as exc:
                failed.append((n, tau, str(exc)))
                rows.append([str(n), _fmt(tau), "nan", "failed", "nan"])
    meta = _meta_line("eta", {
        "n": ",".join(str(v) for v in n_values),
        "tau": ",".join(f"{t:g}" for t in args.tau),
        "tol": args.tol,
    })
    path = Path(args.out or "eta.csv")
    _write_csv(path, meta, ["n", "tau", "eta", "method", "error_estimate"], rows)
    print(path)
    if failed and not args.keep_going:
        for n, tau, msg in failed:
            print(f"error: eta({n}, {tau}) failed: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_peak(args) -> int:
    if any(t <= 0 for t in args.tau):
        raise UsageError("peak requires a strictly positive tau grid")
    sweep = metrics.eta_sweep(args.n_max, args.tau, tol=args.tol)
    if sweep.failures and not args.keep_going:
        for (i, j), msg in sorted(sweep.failures.items()):
            print(f"error: eta({sweep.n_values[i]}, {sweep.tau_values[j]}) failed: {msg}",
                  file=sys.stderr)
        return 1
    rows = []
    for j, tau in enumerate(sweep.tau_values):
        best_n, best_eta = 0, -1.0
        for i, n in enumerate(sweep.n_values):
            cell = sweep.eta[i][j]
            if cell is not None and cell.value > best_eta:
                best_n, best_eta = n, cell.value
        rows.append([_fmt(tau), str(best_n), str(int(best_n == args.n_max)),
                     _fmt(best_eta)])
    meta = _meta_line("peak", {
        "n_max": args.n_max,
        "tau": ",".join(f"{t:g}" for t in args.tau),
        "tol": args.tol,
    })
    path = Path(args.out or "peak.csv")
    _write_csv(path, meta, ["tau", "n_star", "boundary_flag", "eta_at_peak"], rows)
    print(path)
    return 0


def cmd_populations(args) -> int:
    rows = []
    header = ["n", "tau", "k", "p_k"]
    if args.oracle:
        header.append("p_k_ode")
    for n in args.n:
        ode_cache = {}
        for tau in args.tau:
            p = mixture_coefficients(n, tau)
            if args.oracle:
                cfg = oracles.OdeConfig(dim=n + 1)
                ode_cache[tau] = oracles.lindblad_populations(n, tau, 0.0, cfg)
            for k in range(n + 1):
                row = [str(n), _fmt(tau), str(k), _fmt(p[k])]
                if args.oracle:
                    row.append(_fmt(ode_cache[tau][k]))
                rows.append(row)
    meta = _meta_line("populations", {
        "n": ",".join(str(v) for v in args.n),
        "tau": ",".join(f"{t:g}" for t in args.tau),
        "oracle": args.oracle,
    })
    path = Path(args.out or "populations.csv")
    _write_csv(path, meta, header, rows)
    print(path)
    return 0


def cmd_validate(args) -> int:
    checks = oracles.run_validation_suite(
        break_sign=args.break_sign, tolerance_override=args.tol
    )
    report = [c.as_dict() for c in checks]
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(args.out)
    else:
        print(text)
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        print(f"{status:4s}  {check.name}: max-error={check.max_error:.3e} "
              f"tolerance={check.tolerance:.3e}", file=sys.stderr)
    return 0 if all(c.passed for c in checks) else 1


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockdecay",
        description="Decohering Fock states in phase space: figure data and validation.",
    )
    parser.add_argument("--version", action="version", version=f"fockdecay {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_nmax=False, with_n=False):
        p.add_argument("--tau", action="append", default=None,
                       help="tau value or a:b:step range; repeatable")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--preset", choices=sorted(PRESETS), default=None)
        p.add_argument("--keep-going", action="store_true", dest="keep_going")
        if with_n:
            p.add_argument("--n", action="append", type=int, default=None,
                           help="initial Fock level; repeatable")
        if with_nmax:
            p.add_argument("--n-max", type=int, default=None, dest="n_max")

    p_grid = sub.add_parser("grid", help="Wigner function on a square phase-space grid")
    common(p_grid, with_n=True)
    p_grid.add_argument("--nbar", type=float, default=0.0)
    p_grid.add_argument("--grid-extent", type=float, default=5.0, dest="grid_extent")
    p_grid.add_argument("--grid-step", type=float, default=0.05, dest="grid_step")

    p_eta = sub.add_parser("eta", help="negative-volume sweep")
    common(p_eta, with_nmax=True, with_n=True)

    p_peak = sub.add_parser("peak", help="peak quantum eigenstate vs tau")
    common(p_peak, with_nmax=True)

    p_pop = sub.add_parser("populations", help="occupation probabilities vs tau")
    common(p_pop, with_n=True)
    p_pop.add_argument("--oracle", action="store_true",
                       help="add rate-equation ODE columns")

    p_val = sub.add_parser("validate", help="run the validation suite")
    p_val.add_argument("--tol", type=float, default=None,
                       help="override every check tolerance")
    p_val.add_argument("--out", default=None, help="write the JSON report here")
    p_val.add_argument("--break-sign", action="store_true", dest="break_sign",
                       help="use the non-integrable envelope sign (must fail)")
    return parser


def _apply_preset_and_defaults(args, parser):
    if getattr(args, "preset", None):
        preset = PRESETS[args.preset]
        if preset["command"] != args.command:
            parser.error(f"preset {args.preset!r} belongs to command {preset['command']!r}")
        for key, value in preset.items():
            if key == "command":
                continue
            if getattr(args, key, None) in (None, [],):
                if key == "tau":
                    value = value if isinstance(value, list) else [value]
                setattr(args, key, value)

    if hasattr(args, "tau"):
        if args.tau is None:
            if args.command == "populations":
                args.tau = ["0:3:0.01"]
            elif args.command == "peak":
                args.tau = ["0.01:0.5:0.01"]
        if args.tau is None:
            parser.error(f"{args.command} requires --tau (value or a:b:step)")
        try:
            args.tau = _resolve_taus(args.tau)
        except ValueError as exc:
            parser.error(str(exc))
        if not args.tau:
            parser.error("empty tau grid")

    if hasattr(args, "n") and args.n is None and args.command == "populations":
        args.n = [1, 3]
    if args.command == "grid" and not getattr(args, "n", None):
        parser.error("grid requires --n")
    if args.command == "eta" and not getattr(args, "n", None) and args.n_max is None:
        parser.error("eta requires --n or --n-max")
    if hasattr(args, "n_max") and args.n_max is None:
        args.n_max = 20
    if hasattr(args, "n") and args.n:
        for n in args.n:
            if n < 0 or n > N_MAX:
                parser.error(f"n must be in [0, {N_MAX}], got {n}")
    if hasattr(args, "n_max") and not (0 <= args.n_max <= N_MAX):
        parser.error(f"n-max must be in [0, {N_MAX}], got {args.n_max}")
    if args.command != "validate" and getattr(args, "tol", None) is None:
        args.tol = 1e-10


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_preset_and_defaults(args, parser)
    handlers = {
        "grid": cmd_grid,
        "eta": cmd_eta,
        "peak": cmd_peak,
        "populations": cmd_populations,
        "validate": cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        parser.exit(2, f"usage error: {exc}\n")
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
