"""Batch command-line front end.

Commands: simulate | density | cf | cdf | moments | mixture | validate.
Flags override values from an optional JSON config file; the fully
resolved configuration (including the seed) is echoed as a header
comment in every CSV and into a ``<out>.meta.json`` sidecar, so reruns
with the same inputs are byte-identical.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analytic
from .analytic import MixtureParams
from .flight import FlightParams, replicate_stream, simulate_batch, simulate_flight
from .validation import SuiteConfig, run_suite

USAGE_ERROR = 1
VALIDATION_FAILURE = 2
IO_ERROR = 3

_FLOAT_FMT = "%.17g"  # round-trip exact for doubles


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return _FLOAT_FMT % float(x)


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write_csv(path: str, columns: list[str], rows, config: dict) -> None:
    lines = [
        "# config: " + _canonical_json(config),
        "# columns: " + ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_sidecar(path: str, config: dict, extra: dict | None = None) -> None:
    payload = {"config": config}
    if extra:
        payload.update(extra)
    with open(path + ".meta.json", "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _parse_vector(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"cannot parse vector {text!r}") from exc


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise _UsageError("config file must hold a JSON object")
    return data


def _resolved(args, keys: list[str]) -> dict:
    """Merge config-file values with flags; flags win when provided."""
    base = _load_config_file(getattr(args, "config", None))
    out = dict(base)
    for key in keys:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            out[key] = val
    return out


_DEFAULTS = {"d": 2, "n": 1, "nu": 0.0, "c": 1.0, "t": 1.0, "seed": 0}


def _flight_params(cfg: dict, need_m: bool = False) -> FlightParams:
    merged = {**_DEFAULTS, **cfg}
    m = merged.get("m")
    if need_m and m is None:
        raise _UsageError("this command requires --m")
    return FlightParams(
        d=int(merged["d"]),
        n=int(merged["n"]),
        nu=float(merged["nu"]),
        c=float(merged["c"]),
        t=float(merged["t"]),
        m=int(m) if m is not None else None,
    )


def _add_common(sub) -> None:
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--nu", type=float, default=None)
    sub.add_argument("--c", type=float, default=None)
    sub.add_argument("--t", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--count", type=int, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--config", type=str, default=None)


_COMMON_KEYS = ["d", "m", "n", "nu", "c", "t", "seed", "count", "out"]


def _require_out(cfg: dict) -> str:
    out = cfg.get("out")
    if not out:
        raise _UsageError("an output path is required (--out)")
    return str(out)


def _r_grid(cfg: dict, p: FlightParams) -> np.ndarray:
    rmax_default = p.c * p.t
    rmin = float(cfg.get("r-min", 0.0))
    rmax = float(cfg.get("r-max", rmax_default))
    npts = int(cfg.get("r-points", 200))
    if npts < 2:
        raise _UsageError("--r-points must be >= 2")
    return np.linspace(rmin, rmax, npts)


def _cmd_simulate(args) -> int:
    cfg = _resolved(args, _COMMON_KEYS + ["trajectories", "trajectories-out"])
    count = int(cfg.get("count", 0) or 0)
    if count < 1:
        raise _UsageError("--count must be >= 1")
    p = _flight_params(cfg)
    seed = int(cfg.get("seed", 0))
    out = _require_out(cfg)
    cfg_echo = {
        "command": "simulate", "d": p.d, "m": p.m, "n": p.n, "nu": p.nu,
        "c": p.c, "t": p.t, "seed": seed, "count": count,
    }
    finals = simulate_batch(p, count, seed)
    cols = ["replicate"] + [f"x{i}" for i in range(1, p.d + 1)]
    rows = ([float(i)] + [float(v) for v in finals[i]] for i in range(count))
    _write_csv(out, cols, rows, cfg_echo)
    _write_sidecar(out, cfg_echo)

    n_traj = int(cfg.get("trajectories", 0) or 0)
    if n_traj > 0:
        traj_out = cfg.get("trajectories-out") or (out + ".trajectories.csv")
        tcols = ["replicate", "segment", "t_k"] + [
            f"x{i}" for i in range(1, p.d + 1)
        ]
        trows = []
        for i in range(min(n_traj, count)):
            tr = simulate_flight(p, replicate_stream(p, seed, i))
            for s in range(tr.breakpoints.shape[0]):
                trows.append(
                    [float(i), float(s), float(tr.times[s])]
                    + [float(v) for v in tr.breakpoints[s]]
                )
        _write_csv(str(traj_out), tcols, trows, cfg_echo)
        _write_sidecar(str(traj_out), cfg_echo)
    return 0


_DENSITY_FORMULAS = ("projected", "nu1", "nu1-closed", "radial-projected", "radial-nu1")


def _cmd_density(args) -> int:
    cfg = _resolved(
        args, _COMMON_KEYS + ["formula", "x", "r-min", "r-max", "r-points"]
    )
    formula = cfg.get("formula")
    if formula not in _DENSITY_FORMULAS:
        raise _UsageError(f"--formula must be one of {_DENSITY_FORMULAS}")
    need_m = formula in ("projected", "radial-projected")
    p = _flight_params(cfg, need_m=need_m)
    out = _require_out(cfg)
    cfg_echo = {
        "command": "density", "formula": formula, "d": p.d, "m": p.m,
        "n": p.n, "nu": p.nu, "c": p.c, "t": p.t,
    }
    if formula in ("radial-projected", "radial-nu1"):
        grid = _r_grid(cfg, p)
        fn = (
            analytic.radial_density_projection
            if formula == "radial-projected"
            else analytic.radial_density_nu1
        )
        rows = [[float(r), fn(p, float(r))] for r in grid]
        _write_csv(out, ["r", "density"], rows, cfg_echo)
    else:
        xs = cfg.get("x")
        if not xs:
            raise _UsageError(f"--x points are required for formula {formula}")
        if isinstance(xs, str):
            xs = [xs]
        points = [_parse_vector(v) if isinstance(v, str) else list(map(float, v)) for v in xs]
        fn = {
            "projected": analytic.density_projection,
            "nu1": analytic.density_nu1,
            "nu1-closed": analytic.density_nu1_closed,
        }[formula]
        dim = p.m if formula == "projected" else p.d
        rows = []
        for pt in points:
            if len(pt) != dim:
                raise _UsageError(f"point {pt} must have length {dim}")
            rows.append(list(pt) + [fn(p, np.array(pt))])
        cols = [f"x{i}" for i in range(1, dim + 1)] + ["density"]
        _write_csv(out, cols, rows, cfg_echo)
    _write_sidecar(out, cfg_echo)
    return 0


def _cmd_cf(args) -> int:
    cfg = _resolved(args, _COMMON_KEYS + ["formula", "alpha", "anorm"])
    formula = cfg.get("formula")
    if formula not in ("projected", "nu1"):
        raise _UsageError("--formula must be 'projected' or 'nu1'")
    p = _flight_params(cfg, need_m=(formula == "projected"))
    out = _require_out(cfg)
    cfg_echo = {
        "command": "cf", "formula": formula, "d": p.d, "m": p.m,
        "n": p.n, "nu": p.nu, "c": p.c, "t": p.t,
    }
    rows = []
    if formula == "projected":
        anorms = cfg.get("anorm")
        if not anorms:
            raise _UsageError("--anorm values are required for the projected cf")
        if isinstance(anorms, (int, float, str)):
            anorms = [anorms]
        for a in anorms:
            a = float(a)
            alpha = np.zeros(p.m)
            alpha[0] = a
            rows.append([a, analytic.cf_projection(p, alpha)])
        _write_csv(out, ["anorm", "cf"], rows, cfg_echo)
    else:
        alphas = cfg.get("alpha")
        if not alphas:
            raise _UsageError("--alpha vectors are required for the nu1 cf")
        if isinstance(alphas, str):
            alphas = [alphas]
        for raw in alphas:
            vec = _parse_vector(raw) if isinstance(raw, str) else list(map(float, raw))
            if len(vec) != p.d:
                raise _UsageError(f"alpha {vec} must have length d={p.d}")
            rows.append(vec + [analytic.cf_nu1(p, np.array(vec))])
        cols = [f"a{i}" for i in range(1, p.d + 1)] + ["cf"]
        _write_csv(out, cols, rows, cfg_echo)
    _write_sidecar(out, cfg_echo)
    return 0


def _cmd_cdf(args) -> int:
    cfg = _resolved(args, _COMMON_KEYS + ["r-min", "r-max", "r-points"])
    p = _flight_params(cfg, need_m=True)
    out = _require_out(cfg)
    cfg_echo = {
        "command": "cdf", "d": p.d, "m": p.m, "n": p.n, "nu": p.nu,
        "c": p.c, "t": p.t,
    }
    grid = _r_grid(cfg, p)
    rows = [[float(r), analytic.cdf_radial_projection(p, float(r))] for r in grid]
    _write_csv(out, ["r", "cdf"], rows, cfg_echo)
    _write_sidecar(out, cfg_echo)
    return 0


def _cmd_moments(args) -> int:
    cfg = _resolved(args, _COMMON_KEYS + ["orders"])
    p = _flight_params(cfg, need_m=True)
    out = _require_out(cfg)
    orders_raw = cfg.get("orders", "1,2,4")
    orders = (
        [int(v) for v in str(orders_raw).split(",")]
        if isinstance(orders_raw, str)
        else [int(v) for v in orders_raw]
    )
    cfg_echo = {
        "command": "moments", "d": p.d, "m": p.m, "n": p.n, "nu": p.nu,
        "c": p.c, "t": p.t, "orders": orders,
    }
    rows = [[float(k), analytic.radial_moment(p, k)] for k in orders]
    _write_csv(out, ["order", "moment"], rows, cfg_echo)
    _write_sidecar(out, cfg_echo)
    return 0


def _cmd_mixture(args) -> int:
    cfg = _resolved(args, _COMMON_KEYS + ["lam", "n-max", "x"])
    p = _flight_params(cfg, need_m=True)
    lam = cfg.get("lam")
    if lam is None:
        raise _UsageError("--lam is required")
    mp = MixtureParams(lam=float(lam), base=p, n_max=int(cfg.get("n-max", 50)))
    out = _require_out(cfg)
    xs = cfg.get("x")
    if not xs:
        raise _UsageError("--x points are required")
    if isinstance(xs, str):
        xs = [xs]
    points = [_parse_vector(v) if isinstance(v, str) else list(map(float, v)) for v in xs]
    cfg_echo = {
        "command": "mixture", "d": p.d, "m": p.m, "nu": p.nu, "c": p.c,
        "t": p.t, "lam": mp.lam, "n_max": mp.n_max,
    }
    rows = []
    for pt in points:
        if len(pt) != p.m:
            raise _UsageError(f"point {pt} must have length m={p.m}")
        rows.append(list(pt) + [analytic.unconditional_density_projection(mp, np.array(pt))])
    cols = [f"x{i}" for i in range(1, p.m + 1)] + ["density"]
    _write_csv(out, cols, rows, cfg_echo)
    _write_sidecar(out, cfg_echo, extra={"truncation_tail_bound": analytic.mixture_tail_bound(mp)})
    return 0


def _cmd_validate(args) -> int:
    cfg = _resolved(args, ["seed", "out", "profile", "only"])
    only = cfg.get("only")
    if only not in (None, "identities", "gof"):
        raise _UsageError("--only must be 'identities' or 'gof'")
    config = SuiteConfig(
        master_seed=int(cfg.get("seed", 20260808)),
        profile=str(cfg.get("profile", "quick")),
        include_identities=only in (None, "identities"),
        include_gof=only in (None, "gof"),
    )
    report = run_suite(config)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out = cfg.get("out")
    if out:
        with open(str(out), "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else VALIDATION_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="driftflight", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="simulate flights, write final positions")
    _add_common(ps)
    ps.add_argument("--trajectories", type=int, default=None,
                    help="also export breakpoints for the first K replicates")
    ps.add_argument("--trajectories-out", type=str, default=None)
    ps.set_defaults(func=_cmd_simulate)

    pd = sub.add_parser("density", help="evaluate a density formula on points or a radial grid")
    _add_common(pd)
    pd.add_argument("--formula", type=str, default=None, choices=_DENSITY_FORMULAS)
    pd.add_argument("--x", action="append", default=None,
                    help="comma-separated point, repeatable")
    pd.add_argument("--r-min", type=float, default=None)
    pd.add_argument("--r-max", type=float, default=None)
    pd.add_argument("--r-points", type=int, default=None)
    pd.set_defaults(func=_cmd_density)

    pc = sub.add_parser("cf", help="evaluate a characteristic function")
    _add_common(pc)
    pc.add_argument("--formula", type=str, default=None, choices=("projected", "nu1"))
    pc.add_argument("--alpha", action="append", default=None,
                    help="comma-separated frequency vector, repeatable")
    pc.add_argument("--anorm", action="append", default=None,
                    help="frequency norm for the projected cf, repeatable")
    pc.set_defaults(func=_cmd_cf)

    pf = sub.add_parser("cdf", help="radial CDF of the projection on a grid")
    _add_common(pf)
    pf.add_argument("--r-min", type=float, default=None)
    pf.add_argument("--r-max", type=float, default=None)
    pf.add_argument("--r-points", type=int, default=None)
    pf.set_defaults(func=_cmd_cdf)

    pm = sub.add_parser("moments", help="radial moments of the projection")
    _add_common(pm)
    pm.add_argument("--orders", type=str, default=None)
    pm.set_defaults(func=_cmd_moments)

    px = sub.add_parser("mixture", help="projected density with a random change count")
    _add_common(px)
    px.add_argument("--lam", type=float, default=None)
    px.add_argument("--n-max", type=int, default=None)
    px.add_argument("--x", action="append", default=None)
    px.set_defaults(func=_cmd_mixture)

    pv = sub.add_parser("validate", help="run the verification suite")
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--out", type=str, default=None)
    pv.add_argument("--profile", type=str, default=None, choices=("quick", "full"))
    pv.add_argument("--only", type=str, default=None, choices=("identities", "gof"))
    pv.add_argument("--config", type=str, default=None)
    pv.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
