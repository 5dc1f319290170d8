"""Command line experiments.

Every subcommand writes one JSON document: the resolved configuration, the
package version, the seed, a ``metrics`` block and a timestamp.  Subcommands
with a natural table also write a CSV series.  Values in a ``--config`` file
(``key = value`` lines) take precedence over flags.

Exit status: 0 success, 2 configuration error, 3 violated precondition,
4 solver did not converge.
"""

from __future__ import annotations

import argparse
import configparser
import datetime
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blaschke import (
    BlaschkeProduct,
    blaschke_condition,
    example1_tail_bound,
    example1_zeros,
    example2_zeros,
    frostman_terms,
    read_zeros,
    separation_products,
    thin_ratio_test,
)
from .boundary import (
    Analytic,
    circle_average,
    constant,
    cyclic_average,
    default_panel,
    disk_mesh,
    mean_value_check,
    nevanlinna_characteristic,
    panel_distance,
    polynomial,
    radial_limit,
)
from .disk import BoundaryFunction, BoundaryGrid
from .factorization import MAX_RADIUS, OuterFunction, SingularInner, SingularMeasure, inner_check
from .io import read_boundary_function, read_singular_measure, write_series
from .marshall import marshall_approximate
from .transitivity import hull_distance, orbit_sample, pairing_matrix, rotation_ops, step1_demo

GRID_ENV = "BLASCHKELAB_GRID"

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_NOT_CONVERGED = 4

ANCHORS = {
    "meanvalue": "(f o phi_a)_r(0) = f(a): mean-value mechanism of sup_a |avg f o phi_a| = 1",
    "spread": "sup_{a in D} |avg (f o phi_a)| = 1 for ||f|| = 1; lim c_n avg f o phi_{a_n} = 1",
    "frostman": "B has an angular derivative at zeta iff sum (1 - |a_n|^2) / |zeta - a_n|^2 < infinity",
    "thin": "lim (1 - |a_{n+1}|) / (1 - |a_n|) = 0 makes the Blaschke product thin",
    "average": "T_n f -> s 1: s 1 lies in the weak-star closed convex hull of the rotations of f",
    "factor": "f = B S F with S singular inner and F outer from log |f~|",
    "approx": "the norm-closed convex hull of Blaschke products is the unit ball of H^infinity",
    "orbit": "weak-star convex-transitivity: conv of the orbit under f -> psi (f o phi) fills the ball",
    "nevanlinna": "the integrals of log+ |f(r e^{it})| dt / 2 pi increase with r",
}


class ConfigError(Exception):
    pass


class NotConverged(Exception):
    def __init__(self, msg, doc):
        super().__init__(msg)
        self.doc = doc


# --- value parsing ----------------------------------------------------------

def _complex(text):
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"not a complex number: {text!r}") from None


def _float_list(text):
    if isinstance(text, list):
        return [float(x) for x in text]
    return [float(x) for x in str(text).replace(",", " ").split()]


def _int_list(text):
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(",", " ").split()]


def parse_target(spec, grid, rng=None):
    """Targets: ``const:c``, ``poly:c0,c1,...``, ``blaschke:a1,a2,...``,
    ``random-poly:deg``, ``half-indicator``, ``indicator:start:stop``,
    ``random-grid`` and ``file:path`` (CSV ``k, re, im``)."""
    kind, _, arg = str(spec).partition(":")
    if kind == "const":
        return constant(_complex(arg))
    if kind == "z":
        return Analytic(lambda z: z, 1.0, name="z")
    if kind == "poly":
        return polynomial([_complex(c) for c in arg.split(",")])
    if kind == "blaschke":
        zs = [_complex(c) for c in arg.split(",")] if arg else []
        return BlaschkeProduct(zs)
    if kind == "random-poly":
        deg = int(arg or 8)
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        return polynomial(c)
    if kind == "half-indicator":
        return BoundaryFunction.indicator(grid, 0, grid.size // 2)
    if kind == "indicator":
        start, stop = (int(x) for x in arg.split(":"))
        return BoundaryFunction.indicator(grid, start, stop)
    if kind == "random-grid":
        v = rng.uniform(0, 1, grid.size) * np.exp(2j * np.pi * rng.uniform(0, 1, grid.size))
        return BoundaryFunction(grid, v)
    if kind == "file":
        return read_boundary_function(arg)
    raise ConfigError(f"unknown target {spec!r}")


def _c(z):
    z = complex(z)
    return [z.real, z.imag]


# --- subcommands ------------------------------------------------------------

def run_meanvalue(cfg, grid, rng):
    if not 0 <= cfg.amax < 1:
        raise ValueError("amax must lie in [0, 1)")
    if cfg.count < 1 or cfg.degree < 0:
        raise ValueError("need count >= 1 and degree >= 0")
    rows = []
    for i in range(cfg.count):
        deg = int(rng.integers(0, cfg.degree + 1))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        f = polynomial(c / np.sum(np.abs(c)), bound=1.0)
        a = cfg.amax * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        rows.append((i, deg, a.real, a.imag, mean_value_check(f, a, grid)))
    errs = [r[4] for r in rows]
    metrics = {"cases": len(rows), "max_error": max(errs), "mean_error": float(np.mean(errs))}
    return metrics, (["case", "degree", "a_re", "a_im", "error"], rows)


def run_spread(cfg, grid, rng):
    f = parse_target(cfg.target, grid, rng)
    rows, records = [], []
    for h in cfg.mesh_steps:
        rep = step1_demo(f, disk_mesh(h, cfg.radius), grid)
        rows.append((h, rep.best, 1.0 - rep.best, rep.argmax.real, rep.argmax.imag))
        records.append({"h": h, "best": rep.best, "deficiency": 1.0 - rep.best, "argmax": _c(rep.argmax),
                        "corrector": _c(rep.correctors[-1]), "record_count": len(rep.values)})
    metrics = {"target": cfg.target, "records": records,
               "nondecreasing": all(b[1] >= a[1] for a, b in zip(rows, rows[1:]))}
    return metrics, (["h", "best", "deficiency", "argmax_re", "argmax_im"], rows)


def _zeros(cfg, n):
    if cfg.zeros:
        zs = read_zeros(cfg.zeros)
        if n > len(zs):
            raise ValueError(f"file has {len(zs)} zeros, asked for {n}")
        return zs
    if cfg.example == 1:
        return example1_zeros(n)
    if cfg.example == 2:
        return example2_zeros(n)
    raise ConfigError("example must be 1 or 2 (or give --zeros)")


def run_frostman(cfg, grid, rng):
    zs = _zeros(cfg, cfg.n)
    zeta = np.exp(1j * cfg.theta)
    terms = frostman_terms(zs, zeta, cfg.n)
    partial = np.cumsum(terms)
    n = np.arange(1, cfg.n + 1)
    rows = [(int(k), float(t), float(t * k * k), float(p)) for k, t, p in zip(n, terms, partial)]
    metrics = {
        "source": cfg.zeros or f"example{cfg.example}",
        "n": cfg.n,
        "theta": cfg.theta,
        "partial_sum": math.fsum(terms),
        "last_increment": float(terms[-1]),
        "blaschke_condition": blaschke_condition(zs, cfg.n),
        "term_times_n2_min": float(np.min(terms * n * n)),
        "term_times_n2_max": float(np.max(terms * n * n)),
    }
    if cfg.example == 1 and not cfg.zeros:
        metrics["tail_bound"] = example1_tail_bound(cfg.n)
    return metrics, (["n", "term", "term_times_n2", "partial_sum"], rows)


def run_thin(cfg, grid, rng):
    zs = _zeros(cfg, cfg.n)[:cfg.n]
    ratios = thin_ratio_test(zs, cfg.n)
    seps = separation_products(zs, cfg.n)
    rows = [(k + 1, float(zs.defect[k]), ratios[k] if k < len(ratios) else "", seps[k]) for k in range(cfg.n)]
    metrics = {
        "source": cfg.zeros or f"example{cfg.example}",
        "n": cfg.n,
        "ratios": ratios,
        "separation_products": seps,
        "separation_min": min(seps),
        "separation_last": seps[-1],
    }
    return metrics, (["n", "defect", "ratio_next", "separation"], rows)


def run_average(cfg, grid, rng):
    f = parse_target(cfg.target, grid, rng)
    if not isinstance(f, BoundaryFunction):
        f = BoundaryFunction.from_callable(grid, f)
    levels = cfg.levels if cfg.levels is not None else list(range(grid.log2_size + 1))
    s = circle_average(f)
    target = BoundaryFunction.constant(grid, s)
    panel = default_panel(grid)
    rows = []
    for n in levels:
        Tf = cyclic_average(f, n)
        rows.append((n, panel_distance(Tf, target, panel), (Tf - target).sup_norm(),
                     circle_average(Tf) == s))
    d = [r[1] for r in rows]
    metrics = {
        "target": cfg.target,
        "mean": _c(s),
        "levels": levels,
        "panel_distance": d,
        "sup_distance": [r[2] for r in rows],
        "mean_preserved": all(r[3] for r in rows),
        "panel_distance_nonincreasing": all(b <= a for a, b in zip(d, d[1:])),
    }
    return metrics, (["n", "panel_distance", "sup_distance", "mean_preserved"], rows)


def run_factor(cfg, grid, rng):
    if cfg.measure:
        mu = read_singular_measure(cfg.measure)
    else:
        th, ms = _float_list(cfg.atom_angles), _float_list(cfg.atom_masses)
        if len(th) != len(ms):
            raise ConfigError("atom-angles and atom-masses differ in length")
        mu = SingularMeasure.from_angles(th, ms)
    if cfg.logmod:
        logmod = read_boundary_function(cfg.logmod)
        if logmod.grid != grid:
            grid = logmod.grid
    else:
        logmod = BoundaryFunction.from_callable(grid, lambda z: np.log(np.abs(cfg.outer_shift + z)))
    F = OuterFunction(logmod)
    r = cfg.radius
    recon = np.abs(F(r * grid.nodes))
    dev = np.abs(recon - np.exp(logmod.values.real))
    S = SingularInner(mu)
    # probe the singular factor on the radius farthest from every atom
    if len(mu):
        gaps = np.angle(grid.nodes[:, None] / mu.positions[None, :])
        probe = float(grid.theta[np.argmax(np.min(np.abs(gaps), axis=1))])
    else:
        probe = math.pi
    est, inc = radial_limit(S, probe, [0.9, 0.99, 0.999, 1 - 1e-4, MAX_RADIUS])
    Sb = BoundaryFunction(grid, S(MAX_RADIUS * grid.nodes))
    far = np.ones(grid.size, dtype=bool)
    for zeta in mu.positions:
        far &= np.abs(np.angle(grid.nodes / zeta)) > cfg.atom_exclusion
    rep = inner_check(Sb, where=far) if far.any() else None
    metrics = {
        "atoms": [[float(np.angle(z) % (2 * np.pi)), float(m)] for z, m in zip(mu.positions, mu.masses)],
        "singular_at_zero": _c(S(0)),
        "singular_at_zero_error": abs(S(0) - math.exp(-mu.total_mass)),
        "radial_probe_theta": probe,
        "radial_modulus": abs(est),
        "radial_increments": inc,
        "inner_max_deviation_off_atoms": rep.max_deviation if rep else None,
        "outer_radius": r,
        "outer_max_deviation": float(np.max(dev)),
        "outer_truncation_estimate": F.truncation_estimate(r),
    }
    rows = [(k, float(t), float(lv), float(m)) for k, (t, lv, m) in
            enumerate(zip(grid.theta, logmod.values.real, recon))]
    return metrics, (["k", "theta", "logmod", "outer_modulus"], rows)


def run_approx(cfg, grid, rng):
    f = parse_target(cfg.target, grid, rng)
    if isinstance(f, BoundaryFunction):
        raise ConfigError("approx needs an analytic target")
    r = marshall_approximate(f, cfg.atoms, cfg.degree, grid=grid, starts=cfg.starts, seed=cfg.seed,
                             polish_evals=cfg.polish_evals)
    metrics = {
        "target": cfg.target,
        "K": cfg.atoms,
        "d": cfg.degree,
        "error": r.error,
        "lower_bound": r.lower_bound,
        "weights": [float(w) for w in r.combination.weights],
        "atoms": [{"lambda": _c(B.lam), "zeros": [_c(a) for a in B.zeros.points]} for B in r.combination.atoms],
        "evaluations": r.evaluations,
        "start_errors": r.history,
        "converged": r.converged,
    }
    rows = list(enumerate(r.history))
    if not r.converged:
        raise NotConverged("weight subproblem did not close its gap", (metrics, (["start", "error"], rows)))
    return metrics, (["start", "error"], rows)


def run_orbit(cfg, grid, rng):
    f = parse_target(cfg.target, grid, rng)
    if not isinstance(f, BoundaryFunction):
        f = BoundaryFunction.from_callable(grid, f)
    ops = rotation_ops(grid, cfg.rotations)
    orbit = orbit_sample(f, ops)
    s = circle_average(f)
    target = BoundaryFunction.constant(grid, s)
    panel = default_panel(grid)
    A, b = pairing_matrix(orbit, panel), pairing_matrix([target], panel)[:, 0]
    uniform = float(np.max(np.abs(A @ np.full(len(orbit), 1.0 / len(orbit)) - b)))
    res = hull_distance(target, orbit, panel)
    norms = [o.sup_norm() for o in orbit]
    metrics = {
        "target": cfg.target,
        "rotations": cfg.rotations,
        "mean": _c(s),
        "distance": res.distance,
        "lower_bound": res.lower_bound,
        "uniform_weight_bound": uniform,
        "converged": res.converged,
        "orbit_norm_spread": max(norms) - min(norms),
    }
    rows = [(j, float(w)) for j, w in enumerate(res.weights)]
    if not res.converged:
        raise NotConverged("hull distance solver did not close its gap", (metrics, (["op", "weight"], rows)))
    return metrics, (["op", "weight"], rows)


def run_nevanlinna(cfg, grid, rng):
    f = parse_target(cfg.target, grid, rng)
    vals = [nevanlinna_characteristic(f, r, grid) for r in cfg.radii]
    metrics = {
        "target": cfg.target,
        "radii": cfg.radii,
        "characteristic": vals,
        "nondecreasing_within_1e-10": all(b >= a - 1e-10 for a, b in zip(vals, vals[1:])),
    }
    return metrics, (["r", "characteristic"], list(zip(cfg.radii, vals)))


# name -> (runner, default grid, stochastic, argument adder)
def _args_meanvalue(p):
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--degree", type=int, default=16)
    p.add_argument("--amax", type=float, default=0.9)


def _args_spread(p):
    p.add_argument("--target", default="blaschke:0.3,-0.5j")
    p.add_argument("--mesh-steps", type=_float_list, default=[0.4, 0.2, 0.1, 0.05])
    p.add_argument("--radius", type=float, default=0.999)


def _args_zeros(p, n):
    p.add_argument("--example", type=int, default=1 if n > 10 else 2)
    p.add_argument("--zeros", default=None, help="text file of zeros, one 're im' per line")
    p.add_argument("--n", type=int, default=n)


def _args_frostman(p):
    _args_zeros(p, 1000)
    p.add_argument("--theta", type=float, default=0.0)


def _args_thin(p):
    _args_zeros(p, 6)


def _args_average(p):
    p.add_argument("--target", default="half-indicator")
    p.add_argument("--levels", type=_int_list, default=None)


def _args_factor(p):
    p.add_argument("--atom-angles", type=_float_list, default=[0.0])
    p.add_argument("--atom-masses", type=_float_list, default=[1.0])
    p.add_argument("--measure", default=None, help="CSV of 'theta, mass' rows")
    p.add_argument("--outer-shift", type=float, default=2.0, help="logmod = log|shift + e^{it}|")
    p.add_argument("--logmod", default=None, help="CSV 'k, re, im' of log-modulus samples")
    p.add_argument("--radius", type=float, default=1 - 1e-4)
    p.add_argument("--atom-exclusion", type=float, default=0.2)


def _args_approx(p):
    p.add_argument("--target", default="const:0.5")
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--starts", type=int, default=10)
    p.add_argument("--polish-evals", type=int, default=60)


def _args_orbit(p):
    p.add_argument("--target", default="random-grid")
    p.add_argument("--rotations", type=int, default=256)


def _args_nevanlinna(p):
    p.add_argument("--target", default="random-poly:8")
    p.add_argument("--radii", type=_float_list, default=[k / 10 for k in range(1, 10)])


COMMANDS = {
    "meanvalue": (run_meanvalue, 12, True, _args_meanvalue),
    "spread": (run_spread, 11, False, _args_spread),
    "frostman": (run_frostman, 3, False, _args_frostman),
    "thin": (run_thin, 3, False, _args_thin),
    "average": (run_average, 12, False, _args_average),
    "factor": (run_factor, 10, False, _args_factor),
    "approx": (run_approx, 6, True, _args_approx),
    "orbit": (run_orbit, 10, True, _args_orbit),
    "nevanlinna": (run_nevanlinna, 10, True, _args_nevanlinna),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="blaschkelab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, _, _, add) in COMMANDS.items():
        p = sub.add_parser(name, help=ANCHORS[name])
        p.add_argument("--grid", type=int, default=None,
                       help=f"log2 of the grid size (default ${GRID_ENV} or a per-command value)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", default=None, help="key = value file; its values override flags")
        p.add_argument("--output", default=None, help="JSON result path (default: stdout)")
        p.add_argument("--csv", default=None, help="CSV series path (default: next to --output)")
        add(p)
    return parser


def _apply_config(args, parser):
    if not args.config:
        return set()
    text = Path(args.config).read_text() if Path(args.config).exists() else None
    if text is None:
        raise ConfigError(f"config file {args.config} not found")
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text if text.lstrip().startswith("[") else "[run]\n" + text)
    except configparser.Error as e:
        raise ConfigError(f"cannot parse {args.config}: {e}") from None
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    seen = set()
    for section in cp.sections():
        if section not in ("run", args.command):
            continue
        for key, value in cp.items(section):
            dest = key.replace("-", "_")
            if dest in ("config", "help", "command"):
                continue
            if dest not in actions:
                raise ConfigError(f"unknown key {key!r} for {args.command}")
            conv = actions[dest].type
            try:
                setattr(args, dest, conv(value) if conv else value)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key!r}: {value!r}") from None
            seen.add(dest)
    return seen


def _resolve_grid(args, default, from_config):
    if "grid" in from_config:
        return args.grid, "config"
    if args.grid is not None:
        return args.grid, "flag"
    env = os.environ.get(GRID_ENV)
    if env:
        try:
            return int(env), "env"
        except ValueError:
            raise ConfigError(f"{GRID_ENV}={env!r} is not an integer") from None
    return default, "default"


def _config_echo(args):
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("output", "csv"):
            continue
        out[k] = v
    return out


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    runner, default_grid, stochastic, _ = COMMANDS[args.command]
    doc = {"tool": "blaschkelab", "version": __version__, "command": args.command,
           "anchor": ANCHORS[args.command]}
    status = 0
    table = None
    try:
        from_config = _apply_config(args, parser)
        m, grid_source = _resolve_grid(args, default_grid, from_config)
        args.grid = m
        grid = BoundaryGrid(m) if m >= 3 else None
        if grid is None:
            raise ConfigError("grid needs log2 size >= 3")
        doc["config"] = _config_echo(args)
        doc["grid_source"] = grid_source
        doc["seed"] = args.seed
        doc["stochastic"] = stochastic
        rng = np.random.default_rng(args.seed)
        try:
            metrics, table = runner(args, grid, rng)
        except NotConverged as e:
            metrics, table = e.doc
            doc["error"] = str(e)
            status = EXIT_NOT_CONVERGED
        doc["metrics"] = metrics
    except ConfigError as e:
        doc["error"] = str(e)
        status = EXIT_CONFIG
    except (ValueError, OSError) as e:
        doc["error"] = str(e)
        status = EXIT_PRECONDITION
    doc["status"] = status
    doc["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(doc, indent=2, default=_json_default) + "\n"
    if args.output:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    csv_path = args.csv or (str(Path(args.output).with_suffix(".csv")) if args.output else None)
    if table is not None and csv_path:
        write_series(csv_path, *table)
    if status:
        print(f"blaschkelab {args.command}: {doc['error']}", file=sys.stderr)
    return status


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
