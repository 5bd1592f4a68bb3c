"""Command-line front end: eval, scan, verify and dump-symbolic.

Settings come from an optional key=value config file (keys are the long flag
names without dashes) and are overridden by flags given on the command line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import opalg
from .eigenfunctions import decay_envelope, phi_n, psi_n
from .errors import BCTodaError, NumericError, UsageError
from .model import ModelParams, SpectralTuple, make_params
from .numerics import QuadratureSpec

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SHARED_KEYS = ("alpha", "beta", "lambda", "family", "x", "grid", "rel-tol", "abs-tol", "out", "format",
               "config", "seed", "suite", "tol", "n")


@dataclass
class GridAxis:
    axis: int          # 0-based coordinate index
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class RunConfig:
    command: str
    params: ModelParams
    spectral: SpectralTuple
    family: str = "bc"
    points: list = field(default_factory=list)
    grid: list = field(default_factory=list)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    suite: list | None = None
    tol: float | None = None
    n: int | None = None
    overrides: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number (use a+bi)") from None


def parse_lambdas(text: str) -> list:
    return [parse_complex(s) for s in text.split(",") if s.strip()]


def parse_points(text: str, n: int) -> list:
    """Points for n = 1 are a comma list; for n > 1 points are ';'-separated comma tuples."""
    try:
        if n == 1:
            return [(float(s),) for s in text.split(",") if s.strip()]
        pts = []
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            vals = tuple(float(s) for s in chunk.split(","))
            if len(vals) != n:
                raise UsageError(f"point {chunk!r} needs {n} coordinates")
            pts.append(vals)
        return pts
    except ValueError:
        raise UsageError(f"cannot parse points {text!r}") from None


def parse_grid(specs) -> list:
    axes = []
    for s in specs:
        parts = s.split(":")
        if len(parts) != 4:
            raise UsageError(f"grid {s!r} must be axis:min:max:count")
        name, lo, hi, count = parts
        name = name.strip().lower()
        idx = int(name[1:]) - 1 if name.startswith("x") and name[1:].isdigit() else None
        if idx is None or idx < 0:
            raise UsageError(f"grid axis {name!r} must be x1, x2, ...")
        try:
            ax = GridAxis(idx, float(lo), float(hi), int(count))
        except ValueError:
            raise UsageError(f"cannot parse grid {s!r}") from None
        if ax.count < 2:
            raise UsageError("grid counts must be at least 2")
        axes.append(ax)
    return axes


def read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in SHARED_KEYS:
            raise UsageError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--alpha", type=float)
    shared.add_argument("--beta", type=float)
    shared.add_argument("--lambda", dest="lambda_", metavar="LIST", help="comma list, complex as a+bi")
    shared.add_argument("--family", choices=("gl", "bc"))
    shared.add_argument("--x", metavar="LIST", help="points: comma list (n=1) or ';'-separated tuples")
    shared.add_argument("--grid", action="append", metavar="AXIS:MIN:MAX:COUNT")
    shared.add_argument("--rel-tol", type=float)
    shared.add_argument("--abs-tol", type=float)
    shared.add_argument("--out")
    shared.add_argument("--format", choices=("csv", "json"))
    shared.add_argument("--config")
    shared.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="bctoda", description="Open Toda chain eigenfunctions and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[shared], help="evaluate the eigenfunction at points or on a grid")
    sub.add_parser("scan", parents=[shared], help="dense scan along one axis with the others fixed")
    pv = sub.add_parser("verify", parents=[shared], help="run residual checks")
    pv.add_argument("--suite", help="comma list of check names (default: the standard suite)")
    pv.add_argument("--tol", type=float, help="override every check tolerance")
    pv.add_argument("--list", action="store_true", help="list check names and exit")
    pd = sub.add_parser("dump-symbolic", parents=[shared], help="print normal-ordered Hamiltonians")
    pd.add_argument("--n", type=int, help="number of sites (default: number of spectral parameters)")
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Merge config file and flags (flags win) into a RunConfig."""
    raw = read_config_file(ns.config) if ns.config else {}
    flags = {
        "alpha": ns.alpha, "beta": ns.beta, "lambda": ns.lambda_, "family": ns.family, "x": ns.x,
        "grid": ns.grid, "rel-tol": ns.rel_tol, "abs-tol": ns.abs_tol, "out": ns.out, "format": ns.format,
        "seed": ns.seed, "suite": getattr(ns, "suite", None), "tol": getattr(ns, "tol", None),
        "n": getattr(ns, "n", None),
    }
    merged = dict(raw)
    merged.update({k: v for k, v in flags.items() if v is not None})

    def num(key, default, kind=float):
        if key not in merged:
            return default
        try:
            return kind(merged[key])
        except ValueError:
            raise UsageError(f"bad value for {key}: {merged[key]!r}") from None

    overrides = {k: num(k, None) for k in ("alpha", "beta") if k in merged}
    params = make_params(num("alpha", 0.5), num("beta", 1.0))
    lam_text = merged.get("lambda", "1.0")
    spectral = SpectralTuple(parse_lambdas(lam_text) if isinstance(lam_text, str) else lam_text)
    family = str(merged.get("family", "bc")).lower()
    if family not in ("bc", "gl"):
        raise UsageError(f"unknown family {family!r}")
    grid = merged.get("grid", [])
    grid = parse_grid([g for g in grid.split(";") if g.strip()] if isinstance(grid, str) else grid)
    n_sites = spectral.n
    points = parse_points(merged["x"], n_sites) if "x" in merged else []
    fmt = merged.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    try:
        quad = QuadratureSpec(rel_tol=num("rel-tol", 1e-9), abs_tol=num("abs-tol", 1e-12))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    suite = merged.get("suite")
    if isinstance(suite, str):
        suite = [s.strip() for s in suite.split(",") if s.strip()]
    tol = num("tol", None)
    if tol is not None:
        overrides["tol"] = tol
    return RunConfig(command=ns.command, params=params, spectral=spectral, family=family, points=points,
                     grid=grid, quadrature=quad, out=merged.get("out"), fmt=fmt, seed=num("seed", 0, int),
                     suite=suite, tol=tol, n=num("n", None, int), overrides=overrides)


# ---------------------------------------------------------------------------
# output


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def write_table(config: RunConfig, header: list, rows: list):
    if config.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt_float(v) for v in r])
        text = buf.getvalue()
    else:
        text = json.dumps([dict(zip(header, (float(v) for v in r))) for r in rows], indent=1) + "\n"
    _emit(config, text)


def _emit(config: RunConfig, text: str):
    if config.out:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _evaluate(config: RunConfig, coords):
    if config.family == "gl":
        return phi_n(config.spectral, coords, config.quadrature)
    method = "qmc" if config.spectral.n == 3 else "deterministic"
    return psi_n(config.spectral, config.params, coords, config.quadrature, method=method, seed=config.seed)


def _grid_points(config: RunConfig) -> list:
    n = config.spectral.n
    if not config.grid:
        return list(config.points)
    axes = {ax.axis: ax.values() for ax in config.grid}
    if any(a >= n for a in axes):
        raise UsageError("grid axis beyond the number of coordinates")
    if len(axes) != n:
        raise UsageError("eval needs a grid for every axis (or explicit points)")
    return [tuple(p) for p in product(*[axes[i] for i in range(n)])]


def cmd_eval(config: RunConfig) -> int:
    n = config.spectral.n
    pts = _grid_points(config)
    if not pts:
        raise UsageError("no points given (use --x or --grid)")
    coords = tuple(np.array([p[i] for p in pts]) for i in range(n))
    res = _evaluate(config, coords)
    vals = np.atleast_1d(res.value)
    errs = np.atleast_1d(res.error_estimate)
    header = [f"x{i + 1}" for i in range(n)] + ["re", "im", "error_estimate"]
    rows = [list(p) + [v.real, v.imag, e] for p, v, e in zip(pts, vals, errs)]
    write_table(config, header, rows)
    return EXIT_OK


def scan_envelope(config: RunConfig, coords) -> np.ndarray:
    if config.family == "bc":
        return decay_envelope(config.spectral, config.params, coords)
    log_env = np.zeros(np.shape(coords[0]))
    for a, b in zip(coords[:-1], coords[1:]):
        log_env = log_env - np.where(a > b, np.exp((a - b) / 2), 0.0)
    return np.exp(log_env)


def cmd_scan(config: RunConfig) -> int:
    n = config.spectral.n
    if len(config.grid) != 1:
        raise UsageError("scan needs exactly one --grid axis")
    ax = config.grid[0]
    if ax.axis >= n:
        raise UsageError("scan axis beyond the number of coordinates")
    base = list(config.points[0]) if config.points else [0.0] * n
    t = ax.values()
    coords = tuple(t if i == ax.axis else np.full_like(t, base[i]) for i in range(n))
    res = _evaluate(config, coords)
    vals = np.atleast_1d(res.value)
    errs = np.atleast_1d(res.error_estimate)
    env = scan_envelope(config, coords)
    header = ["t", "re", "im", "abs", "envelope", "error_estimate"]
    rows = [[ti, v.real, v.imag, abs(v), e, er] for ti, v, e, er in zip(t, vals, env, errs)]
    write_table(config, header, rows)
    return EXIT_OK


def cmd_verify(config: RunConfig, suite: list | None = None) -> int:
    from .verify import DEFAULT_SUITE, run_suite

    names = list(suite if suite is not None else (config.suite if config.suite is not None else DEFAULT_SUITE))
    reports = run_suite(names, config.overrides)
    width = max([len(r.name) for r in reports] + [5])
    print(f"{'check':<{width}}  {'residual':>10}  {'tolerance':>10}  status")
    for r in reports:
        print(f"{r.name:<{width}}  {r.residual:10.3e}  {r.tolerance:10.3e}  {'PASS' if r.passed else 'FAIL'}")
    if config.out:
        with open(config.out, "w") as fh:
            for r in reports:
                fh.write(r.to_json() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def symbolic_dump(family: str, n: int) -> str:
    family = family.upper()
    hams = opalg.extract_hamiltonians(n, family)
    lines = []
    name = "HH" if family == "BC" else "H"
    for s, h in enumerate(hams, 1):
        lines.append(f"{family} n={n} {name}{s} {h.sexpr()}")
    if family == "BC":
        lines.append(f"BC n={n} B(u) {opalg.monodromy_bc(n)[0, 1].sexpr()}")
    else:
        lines.append(f"GL n={n} A(u) {opalg.monodromy_gl(n)[0, 0].sexpr()}")
    return "\n".join(lines) + "\n"


def cmd_dump_symbolic(config: RunConfig) -> int:
    n = config.n if config.n is not None else config.spectral.n
    if n < 1:
        raise UsageError("n must be at least 1")
    _emit(config, symbolic_dump(config.family, n))
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "scan": cmd_scan, "verify": cmd_verify, "dump-symbolic": cmd_dump_symbolic}


VALUE_FLAGS = ("--x", "--lambda", "--grid", "--alpha")


def _join_negative_values(argv: list) -> list:
    """Turn ``--x -1,0`` into ``--x=-1,0`` so argparse does not read the value as a flag."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(ns, "list", False):
            from .verify import DEFAULT_SUITE, default_checks
            for name in default_checks():
                print(name + ("" if name in DEFAULT_SUITE else "  (not in default suite)"))
            return EXIT_OK
        config = resolve_config(ns)
        return COMMANDS[ns.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, BCTodaError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
