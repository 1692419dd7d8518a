"""Command-line interface.

All quantities are in natural units (hbar = c = 1): energies, masses and
frequencies share one unit, lengths and times are its inverse.

Exit codes: 0 success, 2 usage or invalid input, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__, analytic, classical, numeric, verify
from .errors import GeoRhoError
from .model import validate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3

UNITS_NOTE = "Natural units (hbar = c = 1); omega sets the scale, mass and energies share its unit."
# list-valued options whose values may start with '-'
_LIST_FLAGS = ("--lambda-set", "--n")


class UsageError(Exception):
    pass


def fmt(v):
    """Round to 15 significant digits for output; ints, bools and None pass through."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(format(v, ".15g"))


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    return fmt(obj)


def render_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2) + "\n"


def render_csv(columns, rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    for key, val in (meta or {}).items():
        val = _clean(val)
        buf.write(f"# {key}={'' if val is None else val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else _csv_cell(v) for v in (_clean(r) for r in row)])
    return buf.getvalue()


def load_schema(command: str) -> dict:
    """JSON schema shipped for a subcommand's JSON output."""
    text = resources.files("georho").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


def _csv_cell(v):
    if isinstance(v, float):
        return format(v, ".15g")
    return v


def _model(args):
    return validate(args.lam, args.omega, args.mass)


def _model_meta(params) -> dict:
    return {"lambda": params.lam, "omega": params.omega, "mass": params.mass}


# --- subcommands -----------------------------------------------------------------

def cmd_spectrum(args):
    params = _model(args)
    count = args.levels
    if count is not None and count < 1:
        raise UsageError("--levels must be >= 1")
    if count is None and params.lam <= 0:
        count = 5
    spec = analytic.discrete_spectrum(params, count)
    levels = spec.levels
    numeric_e = None
    if args.verify:
        numeric_e = numeric.sturm_liouville_eigen(params, len(levels)).energies
    rows = []
    failed = False
    for i, lev in enumerate(levels):
        row = {"n": lev.n, "s": lev.s, "nprime": lev.nprime, "p": lev.p, "E": lev.energy}
        if numeric_e is not None:
            diff = abs(float(numeric_e[i]) - lev.energy)
            row["E_numeric"] = float(numeric_e[i])
            row["abs_diff"] = diff
            failed |= diff > args.tolerance * lev.energy
        rows.append(row)
    payload = dict(_model_meta(params))
    payload["countable"] = spec.countable
    payload["levels"] = rows
    if spec.n_max is not None:
        payload["n_max"] = spec.n_max
    if spec.continuum_threshold is not None:
        payload["continuum_threshold"] = spec.continuum_threshold
    if args.format == "json":
        text = render_json(payload)
    else:
        cols = ["n", "s", "nprime", "p", "E"] + (["E_numeric", "abs_diff"] if args.verify else [])
        meta = dict(_model_meta(params), n_max=spec.n_max, continuum_threshold=spec.continuum_threshold)
        text = render_csv(cols, [[r.get(c) for c in cols] for r in rows], meta)
    return text, EXIT_VERIFY if failed else EXIT_OK


def cmd_trajectory(args):
    params = _model(args)
    energy = args.energy
    motion = classical.classify_motion(params, energy)
    v0 = classical.max_speed(params, energy)
    orbit = classical.orbit_from_energy(params, energy) if motion is classical.MotionClass.OSCILLATORY else None
    if args.t_max is not None:
        t_max = args.t_max
    elif orbit is not None and orbit.amplitude > 0:
        t_max = 3.0 * orbit.period
    else:
        t_max = 10.0
    if orbit is None:
        print(f"warning: E = {energy} gives {motion.value} motion; no closed-form orbit", file=sys.stderr)
    path = classical.integrate_geodesic(params, 0.0, v0, t_max, args.dt)
    running = np.maximum.accumulate(np.abs(path.energy - path.energy[0]) / path.energy[0])
    x_an = orbit.position(path.t) if orbit is not None else None
    rows = []
    for i, t in enumerate(path.t):
        xa = None if x_an is None else float(x_an[i])
        diff = None if xa is None else abs(float(path.x[i]) - xa)
        rows.append([float(t), xa, float(path.x[i]), diff, float(running[i])])
    max_diff = None if x_an is None else float(np.max(np.abs(path.x - x_an)))
    failed = args.tolerance is not None and max_diff is not None and max_diff > args.tolerance
    summary = {
        "motion": motion.value,
        "energy": energy,
        "omega_eff": None if orbit is None else orbit.omega_eff,
        "amplitude": None if orbit is None else orbit.amplitude,
        "max_abs_diff": max_diff,
        "energy_drift": path.energy_drift,
    }
    cols = ["t", "x_analytic", "x_numeric", "abs_diff", "energy_drift"]
    if args.format == "json":
        payload = dict(_model_meta(params), **summary)
        payload["samples"] = [dict(zip(cols, r)) for r in rows]
        text = render_json(payload)
    else:
        text = render_csv(cols, rows, dict(_model_meta(params), **summary))
    return text, EXIT_VERIFY if failed else EXIT_OK


def wavefunction_samples(params, level, count: int):
    """Uniform samples in the Liouville coordinate over the bound-state extent, mapped to x."""
    half = numeric.node_grid(params, level).half_width
    z = -half + (np.arange(count) + 1.0) * (2.0 * half / (count + 1))
    return numeric.from_liouville(params, z)


def cmd_wavefunction(args):
    params = _model(args)
    level = analytic.energy_level(params, args.n)
    mode, norm = numeric.normalize(params, level)
    nodes = numeric.node_count(params, level)
    x = wavefunction_samples(params, level, args.grid)
    u = mode(x)
    meta = dict(_model_meta(params), n=level.n, s=level.s, nprime=level.nprime, E=level.energy,
                normalization=norm, nodes=nodes)
    if args.format == "json":
        payload = dict(meta)
        payload["samples"] = [{"x": float(a), "U_normalized": float(b)} for a, b in zip(x, u)]
        text = render_json(payload)
    else:
        text = render_csv(["x", "U_normalized"], zip(x.tolist(), u.tolist()), meta)
    return text, EXIT_OK


def cmd_verify(args):
    lambdas = args.lambda_set
    checks = verify.run_suite(args.suite, lambdas)
    passed = all(c.passed for c in checks)
    if args.format == "json":
        text = render_json({"suite": args.suite, "passed": passed, "checks": [c.as_dict() for c in checks]})
    else:
        cols = ["group", "name", "passed", "measured", "tolerance"]
        text = render_csv(cols, [[getattr(c, k) for k in cols] for c in checks], {"suite": args.suite, "passed": passed})
    return text, EXIT_OK if passed else EXIT_VERIFY


def scan_values(start: float, stop: float, steps: int, log: bool) -> list[float]:
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if log and (start <= 0 or stop <= 0):
        raise UsageError("--log needs positive --from and --to")
    if steps == 1:
        return [start]
    if log:
        return np.geomspace(start, stop, steps).tolist()
    return np.linspace(start, stop, steps).tolist()


def _scan_point(job):
    param_name, value, lam, omega, mass, ns = job
    if param_name == "lambda":
        lam = value
    else:
        mass = value * omega
    params = validate(lam, omega, mass)
    rows = []
    top = analytic.n_max(params)
    for n in ns:
        if top is not None and n > top:
            rows.append([value, lam, omega, mass, n, False, None, None])
            continue
        e = analytic.energy_level(params, n).energy
        rows.append([value, lam, omega, mass, n, True, e, (e - mass) / omega])
    return rows


def scan_threads() -> int:
    raw = os.environ.get("RHO_NUM_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"RHO_NUM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("RHO_NUM_THREADS must be >= 1")
    return n


def cmd_scan(args):
    values = scan_values(args.start, args.stop, args.steps, args.log)
    ns = args.n if args.n is not None else [0]
    if args.param == "mass-ratio" and args.lam is None:
        raise UsageError("--param mass-ratio needs --lambda")
    validate(args.lam if args.lam is not None else 0.0, args.omega, args.mass)
    lam = args.lam if args.lam is not None else 0.0
    jobs = [(args.param, v, lam, args.omega, args.mass, ns) for v in values]
    with ThreadPoolExecutor(max_workers=scan_threads()) as pool:
        chunks = list(pool.map(_scan_point, jobs))
    rows = [r for chunk in chunks for r in chunk]
    cols = ["value", "lambda", "omega", "mass", "n", "bound", "E", "gap"]
    if args.format == "json":
        text = render_json({"param": args.param, "log": args.log, "rows": [dict(zip(cols, r)) for r in rows]})
    else:
        text = render_csv(cols, rows)
    return text, EXIT_OK


# --- parser --------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("levels must be non-negative integers")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="georho",
        description="Geometric relativistic harmonic oscillator models: spectra, orbits and checks.",
        epilog=UNITS_NOTE,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--lambda", dest="lam", type=float, required=True, help="metric parameter (-1 is AdS)")
    model.add_argument("--omega", type=float, default=1.0)
    model.add_argument("--mass", type=float, default=1.0)

    p = sub.add_parser("spectrum", parents=[common, model], help="bound-state energies", epilog=UNITS_NOTE)
    p.add_argument("--levels", type=int, default=None,
                   help="number of levels (default 5 for lambda <= 0, every bound level for lambda > 0)")
    p.add_argument("--verify", action="store_true", help="add finite-difference oracle energies")
    p.add_argument("--tolerance", type=float, default=1e-6, help="relative tolerance for --verify")
    p.set_defaults(func=cmd_spectrum, default_format="json")

    p = sub.add_parser("trajectory", parents=[common, model], help="classical orbit vs geodesic integration",
                       epilog=UNITS_NOTE)
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--t-max", dest="t_max", type=float, default=None, help="default: 3 periods, or 10 if open")
    p.add_argument("--dt", type=float, default=0.01, help="sampling interval")
    p.add_argument("--tolerance", type=float, default=None, help="exit 3 if max |x_numeric - x_analytic| exceeds this")
    p.set_defaults(func=cmd_trajectory, default_format="csv")

    p = sub.add_parser("wavefunction", parents=[common, model], help="normalised bound-state mode", epilog=UNITS_NOTE)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, default=513, help="number of samples")
    p.set_defaults(func=cmd_wavefunction, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=("all",) + tuple(verify.SUITES), default="all")
    p.add_argument("--lambda-set", dest="lambda_set", type=_float_list, default=None)
    p.set_defaults(func=cmd_verify, default_format="json")

    p = sub.add_parser("scan", parents=[common], help="energy levels across lambda or m/omega", epilog=UNITS_NOTE)
    p.add_argument("--param", choices=("lambda", "mass-ratio"), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.add_argument("--n", type=_int_list, default=None, help="comma-separated levels (default 0)")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="fixed lambda for mass-ratio scans")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0, help="fixed mass for lambda scans")
    p.set_defaults(func=cmd_scan, default_format="csv")
    return parser


def _merge_list_flags(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_merge_list_flags(argv))
    if args.format is None:
        args.format = args.default_format
    try:
        text, code = args.func(args)
    except (GeoRhoError, UsageError) as exc:
        print(f"georho {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
