"""Command-line front end: spectrum | coherence | sweep.

Each run writes a data table (CSV by default) plus a JSON summary that
echoes the fully resolved parameter set; feeding that echo back via
--config reproduces the outputs byte for byte.  Exit codes: 0 success,
2 parameter/validation error, 3 numerical/validity error, 4 threshold not
reached under --require-crossing.
"""

import argparse
import json
import sys

import numpy as np

from .coherence import (
    TimeGrid,
    approx_period,
    coherence_approx,
    coherence_exact,
    extract_t_coh,
    thermal_state,
)
from .errors import (
    ConvergenceError,
    ParameterError,
    SweepError,
    ThresholdNotReached,
    ValidityError,
)
from .meanfield import meanfield_coherence, normalized_trace
from .params import ModelParams
from .scaling import sweep
from .sector import SpectrumResult, build_sector_hamiltonian, eigenvalues
from .thermal import thin_spectrum

# Per-command config schema; config files and flags share these keys.
SCHEMAS = {
    "spectrum": {"n": int, "j": float, "b": float, "t": float, "format": str},
    "coherence": {
        "n": int, "j": float, "b": float, "t": float, "gamma": float,
        "delta": float, "tmax": float, "steps": int, "threshold": float,
        "method": str, "format": str,
    },
    "sweep": {
        "n": int, "j": float, "b": float, "t": float, "gamma": float,
        "method": str, "threshold": float, "axis": str, "from": float,
        "to": float, "points": int, "format": str,
    },
}

DEFAULTS = {
    "spectrum": {"j": 1.0, "b": 0.0, "format": "csv"},
    "coherence": {
        "j": 1.0, "b": 0.0, "gamma": 0.0, "delta": 0.0, "steps": 1001,
        "threshold": 0.5, "method": "exact", "format": "csv",
    },
    "sweep": {
        "j": 1.0, "b": 0.0, "gamma": 0.0, "method": "exact",
        "threshold": 0.5, "points": 6, "format": "csv",
    },
}

REQUIRED = {
    "spectrum": ("n", "t"),
    "coherence": ("n", "t", "tmax"),
    "sweep": ("n", "t", "axis", "from", "to"),
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="thinspec",
        description="Qubit decoherence from a symmetry-broken manipulation device",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, help="device spin count (multiple of 4)")
        p.add_argument("--j", type=float, help="exchange energy unit")
        p.add_argument("--b", type=float, help="staggered symmetry-breaking field")
        p.add_argument("--t", type=float, help="temperature (k_B = 1)")
        p.add_argument("--config", help="flat JSON config; flags override")
        p.add_argument("--out", help="output base path (default: command name)")
        p.add_argument("--format", choices=("csv", "json"), help="table format")

    p = sub.add_parser("spectrum", help="sector eigenvalues and thermal weights")
    common(p)

    p = sub.add_parser("coherence", help="time-dependent qubit coherence")
    common(p)
    p.add_argument("--gamma", type=float, help="qubit-device coupling")
    p.add_argument("--delta", type=float, help="singlet-triplet splitting")
    p.add_argument("--tmax", type=float, help="end of the time grid")
    p.add_argument("--steps", type=int, help="samples on the time grid")
    p.add_argument("--threshold", type=float, help="|C| crossing threshold")
    p.add_argument("--method", choices=("exact", "approx", "meanfield"))
    p.add_argument(
        "--require-crossing", action="store_true",
        help="exit 4 when |C| never crosses the threshold",
    )

    p = sub.add_parser("sweep", help="coherence-time scaling across one axis")
    common(p)
    p.add_argument("--gamma", type=float, help="qubit-device coupling")
    p.add_argument("--method", choices=("exact", "approx"))
    p.add_argument("--threshold", type=float, help="|C| crossing threshold")
    p.add_argument("--axis", choices=("N", "T", "B", "gamma", "J"))
    p.add_argument("--from", dest="from_", type=float, help="grid start")
    p.add_argument("--to", type=float, help="grid end")
    p.add_argument("--points", type=int, help="grid size (>= 4)")
    return parser


def _coerce(key, value, typ):
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(f"config key {key!r} must be an integer")
        return value
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParameterError(f"config key {key!r} must be a number")
        return float(value)
    if not isinstance(value, str):
        raise ParameterError(f"config key {key!r} must be a string")
    return value


def _resolve(command, args):
    """Merge defaults, config file and flags; reject unknown config keys."""
    schema = SCHEMAS[command]
    cfg = dict(DEFAULTS[command])
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ParameterError("config file must hold a JSON object")
        for key, value in loaded.items():
            if key not in schema:
                raise ParameterError(f"unknown config key {key!r}")
            cfg[key] = _coerce(key, value, schema[key])
    for key in schema:
        flag = getattr(args, "from_" if key == "from" else key, None)
        if flag is not None:
            cfg[key] = flag
    missing = [k for k in REQUIRED[command] if k not in cfg]
    if missing:
        raise ParameterError(f"missing required parameter(s): {', '.join(missing)}")
    if cfg["format"] not in ("csv", "json"):
        raise ParameterError(f"format must be 'csv' or 'json', got {cfg['format']!r}")
    return cfg


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_outputs(out_base, columns, rows, summary, table_format):
    """CSV table + JSON summary, or a single JSON with embedded rows."""
    if table_format == "csv":
        with open(out_base + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        summary = dict(summary)
        summary["columns"] = list(columns)
        summary["rows"] = [
            [int(v) if isinstance(v, (int, np.integer)) else float(v) for v in row]
            for row in rows
        ]
    with open(out_base + ".json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def _echo(command, cfg):
    return {k: cfg[k] for k in SCHEMAS[command]}


def _cmd_spectrum(cfg, args):
    params = ModelParams(n=cfg["n"], t=cfg["t"], j=cfg["j"], b=cfg["b"])
    h = build_sector_hamiltonian(params, 0)
    ev = eigenvalues(h)
    thin = thin_spectrum(
        SpectrumResult(eigenvalues=ev, eigenvectors=None, sector_dim=h.dim), params
    )
    weights = np.zeros(ev.size)
    weights[: thin.n_max + 1] = thin.weights
    rows = [(i, ev[i], weights[i]) for i in range(ev.size)]
    summary = {
        "n_max": thin.n_max,
        "omega_fit": thin.omega_fit,
        "anharmonicity": thin.anharmonicity,
        "partition_function": thin.partition_function,
        "b_eff": h.b_eff,
        "dim": h.dim,
        "params": _echo("spectrum", cfg),
    }
    _write_outputs(args.out or "spectrum", ("n", "energy", "weight"),
                   rows, summary, cfg["format"])
    return 0


def _cmd_coherence(cfg, args):
    params = ModelParams(
        n=cfg["n"], t=cfg["t"], j=cfg["j"], b=cfg["b"],
        gamma=cfg["gamma"], delta=cfg["delta"],
    )
    grid = TimeGrid(0.0, cfg["tmax"], cfg["steps"])
    method = cfg["method"]
    period = None
    if method == "exact":
        trace = coherence_exact(params, grid)
        populations = None
    elif method == "approx":
        thin, _ = thermal_state(params)
        trace = coherence_approx(params, thin, grid)
        period = approx_period(params) if params.gamma > 0 else None
    elif method == "meanfield":
        traj = meanfield_coherence(params, grid)
        trace = normalized_trace(traj, params)
        populations = (traj.p_singlet, traj.p_triplet0)
    else:
        raise ParameterError(f"method must be exact, approx or meanfield, got {method!r}")

    t_coh = None
    min_abs = None
    try:
        t_coh = extract_t_coh(trace, cfg["threshold"])
    except ThresholdNotReached as exc:
        min_abs = exc.min_abs

    mag = np.abs(trace.values)
    columns = ["t", "re_C", "im_C", "abs_C"]
    cols = [trace.times, trace.values.real, trace.values.imag, mag]
    if method == "meanfield":
        columns += ["p_singlet", "p_triplet0"]
        cols += [populations[0], populations[1]]
    rows = list(zip(*cols))
    summary = {
        "t_coh": t_coh,
        "threshold": cfg["threshold"],
        "method": method,
    }
    if method == "approx":
        summary["period_approx"] = period
    if t_coh is None:
        summary["min_abs_C"] = min_abs
    summary["params"] = _echo("coherence", cfg)
    _write_outputs(args.out or "coherence", columns, rows, summary, cfg["format"])
    if t_coh is None and args.require_crossing:
        return 4
    return 0


def _sweep_grid(cfg):
    lo, hi, points = cfg["from"], cfg["to"], cfg["points"]
    if points < 4:
        raise ParameterError(f"points must be >= 4, got {points}")
    if not 0 < lo < hi:
        raise ParameterError(f"need 0 < from < to, got [{lo}, {hi}]")
    raw = np.geomspace(lo, hi, points)
    if cfg["axis"] != "N":
        return raw
    for end in (lo, hi):
        if end != int(end) or int(end) % 4 != 0:
            raise ParameterError(
                f"N must be a multiple of 4 (grid endpoint N={end})"
            )
    # Interior points snap to the nearest multiple of 4 so geometric N grids
    # stay valid; collisions mean the requested grid is too dense.
    snapped = (np.round(raw / 4.0) * 4.0).astype(int)
    if (np.diff(snapped) <= 0).any():
        raise ParameterError(
            "N grid points collide after rounding to multiples of 4"
        )
    return snapped


def _cmd_sweep(cfg, args):
    base = ModelParams(
        n=cfg["n"], t=cfg["t"], j=cfg["j"], b=cfg["b"], gamma=cfg["gamma"]
    )
    if cfg["axis"] not in ("N", "T", "B", "gamma", "J"):
        raise ParameterError(f"axis must be one of N, T, B, gamma, J, got {cfg['axis']!r}")
    if cfg["method"] not in ("exact", "approx"):
        raise ParameterError(f"method must be 'exact' or 'approx', got {cfg['method']!r}")
    grid = _sweep_grid(cfg)
    result = sweep(base, cfg["axis"], grid, method=cfg["method"],
                   threshold=cfg["threshold"])
    rows = list(zip(result.grid, result.t_coh))
    summary = {
        "axis": result.axis,
        "exponent": result.exponent,
        "stderr": result.stderr,
        "r_squared": result.r_squared,
        "constant_of_proportionality": result.prefactor,
        "params": _echo("sweep", cfg),
    }
    _write_outputs(args.out or "sweep", ("axis_value", "t_coh"),
                   rows, summary, cfg["format"])
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "coherence": _cmd_coherence,
    "sweep": _cmd_sweep,
}


def _fail(code, kind, exc):
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args.command, args)
        return _COMMANDS[args.command](cfg, args)
    except ParameterError as exc:
        return _fail(2, "parameter", exc)
    except ValidityError as exc:
        return _fail(3, "validity", exc)
    except ConvergenceError as exc:
        return _fail(3, "convergence", exc)
    except SweepError as exc:
        return _fail(3, "sweep", exc)
    except OSError as exc:
        return _fail(2, "io", exc)


if __name__ == "__main__":
    sys.exit(main())
