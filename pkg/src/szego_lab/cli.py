"""Command-line front end: ``szego-lab <command> [options]``.

Every command resolves its settings in three layers: built-in defaults,
then the optional ``--config`` file, then explicit command-line flags.  The
resolved settings are embedded in the JSON report together with the tool
version, so a report is enough to rerun the experiment.

Config file schema (YAML or JSON)::

    domain: {kind: ball-model, n: 2}     # or the string form "ball-model:n=2"
    seed: 0
    threads: 1
    repulsion-scan:                      # one optional section per command
      levels: [-0.19, -0.1, -0.01]
      directions: 16

Keys at top level apply to every command; keys in a command section
override them.  Exit codes: 0 success, 1 a self-test or acceptance
criterion failed, 2 precondition error, 3 numerical failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys

import numpy as np

from .domains import Annulus, Ball, FeffermanModel, clearance, contains, domain_to_dict, load_domain, rho_value
from .errors import NumericalError, PreconditionError
from .experiments.rates import SAMPLERS
from .experiments import (birkhoff_shorten, boundary_repulsion_scan, classify_geodesic,
                          ellipse_loop, random_loop, rate_fit)
from .experiments.repulsion import empirical_epsilon
from .geodesics import GeodesicState, integrate_geodesic, launch_angle_state, speed, unit_speed_state
from .io import csv_text, dumps, load_config, make_report, parse_complex_vector, write_text
from .kernels import kernel_diagonal_model, szego_annulus, szego_ball
from .metric import levi_quantities, metric
from .parallel import default_threads, parallel_map
from .svg import render_svg

EXIT_OK, EXIT_FAILED, EXIT_PRECONDITION, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2, 3, 64

log = logging.getLogger(__name__)

GLOBAL_DEFAULTS = {"seed": 0, "threads": None, "out": None}

# command -> {key: (default, type)}; type None means "keep as given"
DEFAULTS = {
    "kernel": {"domain": ("annulus:r=0.5", None), "z": ("0.7", "vector"), "w": (None, "vector"),
               "tol": (1e-13, float)},
    "metric": {"domain": ("annulus:r=0.5", None), "z": (None, "vector"), "grid": (None, int)},
    "geodesic": {"domain": ("ball:n=1", None), "z": ("0", "vector"), "v": ("1", "vector"),
                 "T": (3.0, float), "tol": (1e-10, float), "unit_speed": (False, bool),
                 "samples": (None, int), "csv": (None, str), "svg": (None, str)},
    "loop-shorten": {"domain": ("annulus:r=0.5", None), "loop": ("random", str), "count": (1, int),
                     "vertices": (64, int), "winding": (1, int), "center_radius": (None, float),
                     "amplitude": (0.1, float), "max_iter": (5000, int), "tol": (1e-9, float),
                     "max_refinements": (2, int), "csv": (None, str), "svg": (None, str)},
    "repulsion-scan": {"domain": ("ball-model:n=2", None),
                       "levels": ([-0.19, -0.1, -0.01, -0.001], "floats"),
                       "directions": (16, int), "points": (8, int), "check_fd": (False, bool),
                       "csv": (None, str)},
    "rate-fit": {"domain": ("synthetic:n=2", None), "quantity": ("levi-h", str),
                 "delta_min": (1e-5, float), "delta_max": (1e-2, float), "count": (12, int),
                 "direction": (None, "vector"), "samples": (None, str), "csv": (None, str)},
    "classify": {"domain": ("annulus:r=0.5", None), "s": (None, float), "angle": (1.2, float),
                 "speed": (1.0, float), "horizon": (20.0, float), "section": (None, float),
                 "tol": (1e-4, float), "integration_tol": (1e-10, float),
                 "csv": (None, str), "svg": (None, str)},
    "selftest": {},
    "acceptance": {"criteria": (None, "strings")},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


# -- configuration -------------------------------------------------------------------

def _coerce(key, value, kind):
    if value is None or kind is None:
        return value
    try:
        if kind == "vector":
            return [complex(x) for x in parse_complex_vector(value)]
        if kind == "floats":
            if isinstance(value, str):
                value = [x for x in value.split(",") if x.strip()]
            return [float(x) for x in value]
        if kind == "strings":
            if isinstance(value, str):
                value = [x.strip() for x in value.split(",") if x.strip()]
            return [str(x) for x in value]
        if kind is bool:
            if isinstance(value, str):
                return value.lower() in ("1", "true", "yes", "on")
            return bool(value)
        return kind(value)
    except (TypeError, ValueError):
        raise PreconditionError(f"setting {key!r}: cannot interpret {value!r}") from None


def resolve_config(command, file_config, overrides):
    """Merge defaults, the config file and explicit flags for ``command``."""
    spec = DEFAULTS[command]
    known = set(spec) | set(GLOBAL_DEFAULTS)
    merged = dict(GLOBAL_DEFAULTS)
    merged.update({k: v[0] for k, v in spec.items()})
    sections = {c.replace("_", "-") for c in DEFAULTS}
    for key, value in file_config.items():
        if key.replace("_", "-") in sections:
            continue
        if key in known:
            merged[key] = value
    section = file_config.get(command, file_config.get(command.replace("-", "_"), {})) or {}
    if not isinstance(section, dict):
        raise PreconditionError(f"config section {command!r} must be a mapping")
    unknown = sorted(set(section) - known)
    if unknown:
        raise PreconditionError(f"unknown keys in config section {command!r}: {unknown}")
    merged.update(section)
    merged.update({k: v for k, v in overrides.items() if v is not None and k in known})
    for key, (_, kind) in spec.items():
        merged[key] = _coerce(key, merged[key], kind)
    merged["seed"] = _coerce("seed", merged["seed"], int)
    if merged["threads"] is None:
        merged["threads"] = default_threads()
    merged["threads"] = _coerce("threads", merged["threads"], int)
    if merged["threads"] < 1:
        raise PreconditionError("threads must be >= 1")
    for key in ("tol", "integration_tol"):
        if key in merged and merged[key] is not None and not merged[key] > 0:
            raise PreconditionError(f"{key} must be positive")
    if "domain" in merged:
        merged["domain"] = domain_to_dict(load_domain(merged["domain"]))
    return merged


# output destinations and the worker count do not change any number in a report
NOT_REPORTED = ("out", "csv", "svg", "threads")


def _reportable(config):
    """Resolved config as embedded in reports, sorted by key."""
    return {k: config[k] for k in sorted(config) if k not in NOT_REPORTED}


def _emit_report(command, config, result):
    write_text(config.get("out"), dumps(make_report(command, _reportable(config), result)))


# -- commands ------------------------------------------------------------------------

def cmd_kernel(cfg):
    domain = load_domain(cfg["domain"])
    z = np.array(cfg["z"], dtype=complex)
    w = z if cfg["w"] is None else np.array(cfg["w"], dtype=complex)
    if isinstance(domain, Ball):
        kv = szego_ball(z, w, domain.n)
    elif isinstance(domain, Annulus):
        if len(z) != 1 or len(w) != 1:
            raise PreconditionError("annulus points have one coordinate")
        kv = szego_annulus(z[0], w[0], domain.r, tol=cfg["tol"])
    else:
        if not np.array_equal(z, w):
            raise PreconditionError("model kernels are available on the diagonal only")
        kv = kernel_diagonal_model(domain, z)
    return {"value": kv.value, "terms_used": kv.terms_used,
            "truncation_bound": kv.truncation_error_bound}, EXIT_OK


def _levi_dict(model, z):
    lq = levi_quantities(model, z)
    return {"rho": lq.rho, "q_vector": lq.q_vector, "q_scalar": lq.q_scalar, "deficit": lq.deficit,
            "calQ": lq.calQ, "h_b": lq.h_b, "h_bj": lq.h_bj, "h_abj": lq.h_abj}


def _axis_extent(domain):
    """Interval of ``x`` for which ``x e_1`` lies in the domain."""
    if isinstance(domain, Annulus):
        return domain.r, 1.0
    if isinstance(domain, Ball):
        return 0.0, 1.0
    from scipy.optimize import brentq
    e1 = np.eye(domain.n, dtype=complex)[0]
    if not contains(domain, 0 * e1):
        raise PreconditionError("metric --grid needs the origin inside the model domain")
    hi = (domain.box + domain.box_margin) * (1 - 1e-12)
    if rho_value(domain, hi * e1) < 0:
        raise PreconditionError("the domain reaches the ambient box along the first axis")
    return 0.0, brentq(lambda x: rho_value(domain, x * e1), 0.0, hi, xtol=1e-15)


def metric_grid_csv(domain, points):
    """CSV of ``g_{1 1bar}`` and the eigenvalues on a grid along the first axis."""
    if points < 1:
        raise PreconditionError("grid needs at least one point")
    lo, hi = _axis_extent(domain)
    xs = lo + (hi - lo) * (np.arange(points) + 0.5) / points
    n = domain.n
    header = [f"{p}_z{j + 1}" for j in range(n) for p in ("re", "im")] + ["lambda2"] \
        + [f"eig{j + 1}" for j in range(n)]
    rows = []
    for x in xs:
        z = np.zeros(n, dtype=complex)
        z[0] = x
        form = metric(domain, z)
        coords = [c for zj in z for c in (float(zj.real), float(zj.imag))]
        rows.append(coords + [float(form.g[0, 0].real)] + [float(e) for e in form.eigenvalues])
    return csv_text(header, rows)


def cmd_metric(cfg):
    domain = load_domain(cfg["domain"])
    if cfg["grid"] is not None:
        write_text(cfg.get("out"), metric_grid_csv(domain, cfg["grid"]))
        return None, EXIT_OK
    if cfg["z"] is None:
        z = np.array([math.sqrt(domain.r)], dtype=complex) if isinstance(domain, Annulus) \
            else np.zeros(domain.n, dtype=complex)
        cfg["z"] = [complex(x) for x in z]
    z = np.array(cfg["z"], dtype=complex)
    form = metric(domain, z)
    result = {"point": z, "g": form.g, "eigenvalues": form.eigenvalues}
    if isinstance(domain, FeffermanModel):
        result["levi"] = _levi_dict(domain, z)
    return result, EXIT_OK


def trace_csv(trace):
    n = trace.z.shape[1]
    header = ["t"] + [f"{p}_z{j + 1}" for j in range(n) for p in ("re", "im")] + ["speed"]
    rows = []
    for t, z, s in zip(trace.t, trace.z, trace.speeds):
        rows.append([float(t)] + [c for zj in z for c in (float(zj.real), float(zj.imag))] + [float(s)])
    return csv_text(header, rows)


def _trace_summary(trace):
    return {"termination": trace.termination, "message": trace.message,
            "accepted_steps": trace.accepted, "rejected_steps": trace.rejected,
            "samples": len(trace), "duration": trace.duration,
            "initial_speed": float(trace.speeds[0]), "speed_drift": trace.speed_drift,
            "relative_speed_drift": trace.speed_drift / float(trace.speeds[0]),
            "final_z": trace.z[-1], "final_v": trace.v[-1]}


def cmd_geodesic(cfg):
    domain = load_domain(cfg["domain"])
    z, v = np.array(cfg["z"], dtype=complex), np.array(cfg["v"], dtype=complex)
    state = unit_speed_state(domain, z, v) if cfg["unit_speed"] else GeodesicState.of(z, v)
    t_eval = None
    if cfg["samples"]:
        t_eval = np.linspace(0, cfg["T"], cfg["samples"] + 1)[1:]
    trace = integrate_geodesic(domain, state, cfg["T"], tol=cfg["tol"], t_eval=t_eval)
    if cfg["csv"]:
        write_text(cfg["csv"], trace_csv(trace))
    if cfg["svg"]:
        write_text(cfg["svg"], render_svg(trace, domain=domain))
    return _trace_summary(trace), EXIT_OK


def _planar_to_domain(points, domain):
    if isinstance(domain, Annulus):
        return points
    out = np.zeros((len(points), domain.n), dtype=complex)
    out[:, 0] = points
    return out


def _build_loops(cfg, domain):
    rng = np.random.default_rng(cfg["seed"])
    loops = []
    for k in range(cfg["count"]):
        if cfg["loop"] == "random":
            if not isinstance(domain, Annulus):
                raise PreconditionError("random loops are defined for the annulus only; use loop: ellipse")
            loops.append(random_loop(domain.r, rng, cfg["vertices"], cfg["winding"]))
        elif cfg["loop"] == "ellipse":
            if isinstance(domain, Annulus):
                c = cfg["center_radius"] or 0.5 * (domain.r + 1)
                loop = ellipse_loop(c, cfg["amplitude"], cfg["vertices"], cfg["winding"],
                                    phase=2 * math.pi * k / max(cfg["count"], 1))
            else:
                if cfg["winding"] != 0:
                    raise PreconditionError("loops in simply connected domains have winding 0")
                c = cfg["center_radius"] if cfg["center_radius"] is not None else 0.3
                base = ellipse_loop(c, cfg["amplitude"], cfg["vertices"], 0)
                loop = type(base)(_planar_to_domain(base.points, domain), 0)
            loops.append(loop)
        else:
            raise PreconditionError(f"unknown loop kind {cfg['loop']!r} (random or ellipse)")
    return loops


def _shorten_task(args):
    domain_spec, loop, options = args
    return birkhoff_shorten(load_domain(domain_spec), loop, **options)


def cmd_loop_shorten(cfg):
    domain = load_domain(cfg["domain"])
    loops = _build_loops(cfg, domain)
    options = {"max_iter": cfg["max_iter"], "tol": cfg["tol"],
               "max_refinements": cfg["max_refinements"], "keep_history": bool(cfg["svg"])}
    results = parallel_map(_shorten_task, [(cfg["domain"], lp, options) for lp in loops],
                           cfg["threads"])
    target = math.sqrt(domain.r) if isinstance(domain, Annulus) else None
    rows, table = [], []
    for k, res in enumerate(results):
        radii = res.loop.radii()
        row = {"loop": k, "status": res.status, "iterations": res.iterations,
               "energy_monotone": res.energy_monotone,
               "initial_length": res.lengths[0][0], "final_length": res.lengths[-1][-1],
               "levels": res.levels, "min_radius": float(radii.min()), "max_radius": float(radii.max())}
        if target is not None:
            row["max_radius_deviation"] = float(np.max(np.abs(radii - target)))
        rows.append(row)
        pts = res.loop.points.reshape(len(res.loop), -1)
        for i, p in enumerate(pts):
            table.append([k, i] + [c for zj in p for c in (float(zj.real), float(zj.imag))])
    if cfg["csv"]:
        n = pts.shape[1]
        header = ["loop", "vertex"] + [f"{p}_z{j + 1}" for j in range(n) for p in ("re", "im")]
        write_text(cfg["csv"], csv_text(header, table))
    if cfg["svg"]:
        paths = []
        for res in results:
            paths.extend(res.history[:: max(1, len(res.history) // 12)])
            paths.append(res.loop)
        write_text(cfg["svg"], render_svg(paths, domain=domain,
                                          background=[target] if target else None))
    summary = {"loops": rows, "all_converged": all(r.converged for r in results)}
    if target is not None:
        summary["circle_radius"] = target
    return summary, EXIT_OK


def _scan_level(args):
    domain_spec, level, directions, points, seed, check_fd = args
    return boundary_repulsion_scan(load_domain(domain_spec), [level], directions, points,
                                   seed=seed, check_fd=check_fd)


def cmd_repulsion_scan(cfg):
    load_domain(cfg["domain"])
    tasks = [(cfg["domain"], lv, cfg["directions"], cfg["points"], cfg["seed"], cfg["check_fd"])
             for lv in cfg["levels"]]
    reports = parallel_map(_scan_level, tasks, cfg["threads"])
    grid = [e for rep in reports for e in rep.grid]
    skipped = [s for rep in reports for s in rep.skipped]
    levels = cfg["levels"]
    per_level = []
    for lv in levels:
        vals = [e.second_derivative for e in grid if e.rho_value == lv]
        per_level.append({"level": lv, "entries": len(vals), "min": min(vals) if vals else math.nan,
                          "all_positive": bool(vals) and min(vals) > 0})
    kinds = sorted({e.kind for e in grid})
    result = {"entries": len(grid), "min_second_derivative": min(e.second_derivative for e in grid),
              "all_positive": all(e.second_derivative > 0 for e in grid),
              "empirical_epsilon": empirical_epsilon(grid, levels), "levels": per_level,
              "min_by_kind": {k: min(e.second_derivative for e in grid if e.kind == k) for k in kinds},
              "skipped": skipped}
    if cfg["check_fd"]:
        errs = [abs(e.fd_second_derivative - e.second_derivative) / abs(e.second_derivative)
                for e in grid]
        result["max_relative_fd_error"] = max(errs)
    if cfg["csv"]:
        n = len(grid[0].point)
        header = ["level", "kind"] + [f"{p}_z{j + 1}" for j in range(n) for p in ("re", "im")] \
            + [f"{p}_v{j + 1}" for j in range(n) for p in ("re", "im")] + ["second_derivative"]
        rows = [[e.rho_value, e.kind] + [c for zj in e.point for c in (float(zj.real), float(zj.imag))]
                + [c for vj in e.direction for c in (float(vj.real), float(vj.imag))]
                + [e.second_derivative] for e in grid]
        write_text(cfg["csv"], csv_text(header, rows))
    return result, EXIT_OK


def _read_samples(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise PreconditionError(f"cannot read samples: {exc}") from None
    out = []
    for row in rows:
        if not row or row[0].strip().startswith("#"):
            continue
        try:
            out.append((float(row[0]), float(row[1])))
        except (ValueError, IndexError):
            if out:
                raise PreconditionError(f"bad sample row {row!r}") from None
            # a header line
    return out


def cmd_rate_fit(cfg):
    if cfg["samples"]:
        samples = _read_samples(cfg["samples"])
        source = {"file": cfg["samples"]}
    else:
        model = load_domain(cfg["domain"])
        if not isinstance(model, FeffermanModel):
            raise PreconditionError("rate-fit sampling needs a model domain")
        sampler = SAMPLERS.get(cfg["quantity"])
        if sampler is None:
            raise PreconditionError(f"unknown quantity {cfg['quantity']!r}; choose from {sorted(SAMPLERS)}")
        lo, hi = cfg["delta_min"], cfg["delta_max"]
        if not 0 < lo < hi < 1:
            raise PreconditionError("need 0 < delta_min < delta_max < 1")
        deltas = np.logspace(math.log10(lo), math.log10(hi), cfg["count"])
        direction = None if cfg["direction"] is None else np.array(cfg["direction"], dtype=complex)
        samples = sampler(model, deltas, direction)
        source = {"quantity": cfg["quantity"]}
    fit = rate_fit(samples)
    if cfg["csv"]:
        write_text(cfg["csv"], csv_text(["delta", "value"], [[float(d), float(v)] for d, v in samples]))
    return {"source": source, "fit": fit.as_dict(), "accepted": fit.accepted,
            "samples": [[float(d), float(v)] for d, v in samples]}, EXIT_OK


def cmd_classify(cfg):
    domain = load_domain(cfg["domain"])
    if not isinstance(domain, Annulus):
        raise PreconditionError("classify works on annulus domains")
    s = cfg["s"] if cfg["s"] is not None else math.sqrt(domain.r)
    section = cfg["section"] if cfg["section"] is not None else math.sqrt(domain.r)
    state = launch_angle_state(domain, s, cfg["angle"], cfg["speed"])
    # run a little past the horizon in time; the classifier cuts by arclength
    T = cfg["horizon"] / speed(domain, state.z, state.v) * 1.05
    trace = integrate_geodesic(domain, state, T, tol=cfg["integration_tol"])
    result = classify_geodesic(trace, section, cfg["horizon"], tol=cfg["tol"])
    if cfg["csv"]:
        write_text(cfg["csv"], trace_csv(trace))
    if cfg["svg"]:
        markers = [section * complex(math.cos(c.position_angle), math.sin(c.position_angle))
                   for c in result.crossings]
        write_text(cfg["svg"], render_svg(trace, domain=domain, markers=markers, background=[section]))
    out = result.as_dict()
    out["trace"] = {"termination": trace.termination, "samples": len(trace),
                    "final_clearance": float(clearance(domain, trace.z[-1]))}
    return out, EXIT_OK


def cmd_selftest(cfg):
    from .selftest import run_selftest
    checks = run_selftest()
    ok = all(c.passed for c in checks)
    for c in checks:
        log.info("%s %s", "ok  " if c.passed else "FAIL", c.name)
    return {"passed": ok, "checks": checks}, EXIT_OK if ok else EXIT_FAILED


def cmd_acceptance(cfg):
    from . import acceptance
    keys = cfg["criteria"] or list(acceptance.CRITERIA) + ["9"]
    unknown = [k for k in keys if k not in acceptance.CRITERIA and k != "9"]
    if unknown:
        raise PreconditionError(f"unknown criteria {unknown}")
    results = acceptance.run_all([k for k in keys if k != "9"])
    if "9" in keys:
        results.append(acceptance.criterion_9(first=results))
    for r in results:
        sys.stderr.write(r.line() + "\n")
    ok = all(r.passed for r in results)
    return {"criteria": [{"key": r.key, "title": r.title, "passed": r.numeric_ok,
                          "report": r.report, "notes": r.notes} for r in results]}, \
        EXIT_OK if ok else EXIT_FAILED


COMMANDS = {"kernel": cmd_kernel, "metric": cmd_metric, "geodesic": cmd_geodesic,
            "loop-shorten": cmd_loop_shorten, "repulsion-scan": cmd_repulsion_scan,
            "rate-fit": cmd_rate_fit, "classify": cmd_classify, "selftest": cmd_selftest,
            "acceptance": cmd_acceptance}

HELP = {
    "kernel": "Szego kernel value with its truncation bound",
    "metric": "metric coefficients (JSON) or a radial grid (CSV with --grid)",
    "geodesic": "integrate a geodesic; CSV trace and SVG projection",
    "loop-shorten": "Birkhoff curve shortening towards a closed geodesic",
    "repulsion-scan": "sign of (rho o c)'' for tangential geodesics near the boundary",
    "rate-fit": "fit the decay exponent of a boundary quantity",
    "classify": "classify an annulus geodesic from its Poincare section",
    "selftest": "run the built-in elementary checks",
    "acceptance": "run the acceptance criteria (slow)",
}


def build_parser():
    parser = _Parser(prog="szego-lab", description="Szego metric and geodesic experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name], description=HELP[name])
        p.add_argument("--config", help="YAML/JSON config file")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, help="worker processes (default: $SZEGO_LAB_THREADS or 1)")
        p.add_argument("-v", "--verbose", action="store_true")
        for key, (default, kind) in DEFAULTS[name].items():
            flag = "--" + key.replace("_", "-")
            if kind is bool:
                p.add_argument(flag, dest=key, action="store_const", const=True, default=None)
            elif kind in (int, float):
                p.add_argument(flag, dest=key, type=kind, metavar=key.upper())
            else:
                p.add_argument(flag, dest=key, metavar=key.upper())
    return parser


def _version():
    from .io import tool_version
    return tool_version()


def dispatch(argv=None):
    """Run the CLI and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:       # --help and --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        file_config = load_config(args.config) if args.config else {}
        overrides = {k: v for k, v in vars(args).items()
                     if k not in ("command", "config", "verbose") and not k.startswith("_")}
        cfg = resolve_config(args.command, file_config, overrides)
        result, code = COMMANDS[args.command](cfg)
        if result is not None:
            _emit_report(args.command, cfg, result)
        return code
    except PreconditionError as exc:
        sys.stderr.write(f"szego-lab: precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except NumericalError as exc:
        sys.stderr.write(f"szego-lab: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
