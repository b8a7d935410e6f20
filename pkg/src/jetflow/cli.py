"""Scenario-file front end: ``jetflow <subcommand> --scenario FILE [--out DIR] [--seed N] [--jobs K]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import errors as E
from .charts import ChartTransform
from .expr import JetPoint, TangentPoint, evaluate_fields
from .frames import ReferenceFrame, frame_connection, pushforward_trajectory, pushforward_vertical, \
    relative_acceleration, relative_acceleration_general, relative_acceleration_proper, \
    transform_frame, vertical_covariant_residual
from .integrate import IntegratorConfig, compare_trajectories, geodesic_header, integrate_geodesic, \
    integrate_sode, jet_projection, sode_header, write_csv
from .jet import DynamicConnection, DynamicEquation, NotQuadratic, as_quadratic, connection_from_sode, \
    sode_from_connection, transform_connection, transform_sode
from .parser import parse_field
from .relativistic import NotLorentzType, PseudoMetric, QuadraticLagrangian, christoffel, \
    hyperboloid_check, lagrange_sode, levi_civita, metric_from_lagrangian, nonrel_limit_compare, \
    relativize
from .sampling import DEFAULT_SAMPLES, domain_samples, field_residual, sample_points
from .tangent import TangentConnection, is_free_motion_candidate, lift_to_tangent, linear_lift, \
    transform_tangent_connection
from .vectorfields import vhat_oracle

EXIT_OK, EXIT_USAGE, EXIT_VERDICT, EXIT_NUMERIC = 0, 1, 2, 3
COVARIANCE_TOL = 1e-8
CHECK_COMMANDS = {"lift", "transform", "frames", "flatness", "relativize"}


class ScenarioError(E.JetflowError):
    pass


@dataclass
class Scenario:
    name: str
    dim: int
    raw: dict
    xi: DynamicEquation | None = None
    connection: DynamicConnection | None = None
    tangent_connection: TangentConnection | None = None
    frame: ReferenceFrame | None = None
    chart: ChartTransform | None = None
    lagrangian: QuadraticLagrangian | None = None
    metric: PseudoMetric | None = None
    initial: JetPoint | None = None
    tangent_initial: TangentPoint | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    limit: dict = field(default_factory=dict)
    seed: int | None = None
    samples: int = DEFAULT_SAMPLES


# ---------------------------------------------------------------------------
# parsing

_KNOWN = {"name", "dim", "seed", "samples", "xi", "connection", "tangent_connection", "frame", "chart",
          "lagrangian", "metric", "initial", "tangent_initial", "integrator", "limit", "description"}


def _locate(text: str, expr: str, column: int) -> tuple:
    """File line/column of ``column`` inside the first occurrence of the string literal ``expr``."""
    lit = json.dumps(expr)
    pos = text.find(lit)
    if pos < 0:
        return 1, 1
    pos += column  # opening quote shifts the 1-based column onto the character
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise E.ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise E.ParseError("scenario must be a JSON object")
    unknown = set(raw) - _KNOWN
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    if "dim" not in raw:
        raise ScenarioError("scenario needs 'dim'")
    m = raw["dim"]
    if not isinstance(m, int) or m < 1:
        raise E.DimensionMismatch("'dim' must be a positive integer")

    def fld(s, tangent=False):
        if isinstance(s, (int, float)):
            s = repr(float(s))
        if not isinstance(s, str):
            raise ScenarioError(f"expected an expression string, got {s!r}")
        try:
            return parse_field(s, m, tangent=tangent)
        except E.ParseError as exc:
            line, col = _locate(text, s, exc.column)
            cls = type(exc)
            msg = str(exc).rsplit(" (line", 1)[0]
            raise cls(msg, line, col) from None

    def vec(key, data, n=m, tangent=False):
        if not isinstance(data, list) or len(data) != n:
            raise E.DimensionMismatch(f"'{key}' needs {n} entries")
        return tuple(fld(s, tangent) for s in data)

    def mat(key, data, rows, cols, tangent=False):
        if not isinstance(data, list) or len(data) != rows:
            raise E.DimensionMismatch(f"'{key}' needs {rows} rows")
        return tuple(vec(key, r, cols, tangent) for r in data)

    def nums(key, data, n):
        if not isinstance(data, list) or len(data) != n:
            raise E.DimensionMismatch(f"'{key}' needs {n} numbers")
        return tuple(float(x) for x in data)

    sc = Scenario(name=str(raw.get("name", name)), dim=m, raw=raw)
    if "xi" in raw:
        sc.xi = DynamicEquation(vec("xi", raw["xi"]))
    if "connection" in raw:
        c = raw["connection"]
        sc.connection = DynamicConnection.from_parts(vec("connection.gamma0", c.get("gamma0")),
                                                     mat("connection.gammaj", c.get("gammaj"), m, m))
    if "tangent_connection" in raw:
        sc.tangent_connection = TangentConnection(mat("tangent_connection", raw["tangent_connection"],
                                                      m + 1, m + 1, tangent=True))
    if "frame" in raw:
        sc.frame = ReferenceFrame(vec("frame", raw["frame"]))
    if "chart" in raw:
        c = raw["chart"]
        sc.chart = ChartTransform(vec("chart.forward", c.get("forward")), vec("chart.inverse", c.get("inverse")),
                                  float(c.get("time_shift", 0.0)), name=str(c.get("name", "")))
    if "lagrangian" in raw:
        c = raw["lagrangian"]
        sc.lagrangian = QuadraticLagrangian(mat("lagrangian.mass", c.get("mass"), m, m),
                                            vec("lagrangian.k", c.get("k", ["0"] * m)), fld(c.get("f", "0")))
    if "metric" in raw:
        sc.metric = PseudoMetric(mat("metric", raw["metric"], m + 1, m + 1))
    if "initial" in raw:
        c = raw["initial"]
        sc.initial = JetPoint(float(c.get("t", 0.0)), nums("initial.q", c.get("q"), m), nums("initial.v", c.get("v"), m))
    if "tangent_initial" in raw:
        c = raw["tangent_initial"]
        sc.tangent_initial = TangentPoint(nums("tangent_initial.x", c.get("x"), m + 1),
                                          nums("tangent_initial.xdot", c.get("xdot"), m + 1))
    if "integrator" in raw:
        c = dict(raw["integrator"])
        try:
            sc.integrator = IntegratorConfig(**c)
        except TypeError as exc:
            raise ScenarioError(f"bad integrator block: {exc}") from None
    if "limit" in raw:
        sc.limit = dict(raw["limit"])
    if "seed" in raw:
        sc.seed = int(raw["seed"])
    if "samples" in raw:
        sc.samples = int(raw["samples"])
    return sc


# ---------------------------------------------------------------------------
# deterministic output


def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.17g}"


def dumps(obj: Any, indent: int = 0) -> str:
    """JSON text with sorted keys and floats at 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        obj = list(obj)
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _texts(fields):
    return [str(f) for f in fields]


@dataclass
class Outcome:
    report: dict
    files: dict = field(default_factory=dict)
    code: int = EXIT_OK


def _report(sc: Scenario, command: str, seed, verdicts, residuals, ids, **extra) -> dict:
    echo = {"subcommand": command, "scenario": sc.raw, "seed": seed, "samples": sc.samples}
    return {"verdicts": verdicts, "residuals": residuals, "equation_ids": ids, "config_echo": echo, **extra}


def _need(sc: Scenario, *names):
    for n in names:
        if getattr(sc, n) is None:
            raise ScenarioError(f"this subcommand needs a '{n}' section")


def _equation(sc: Scenario) -> DynamicEquation:
    if sc.xi is not None:
        return sc.xi
    if sc.connection is not None:
        return sode_from_connection(sc.connection)
    raise ScenarioError("this subcommand needs 'xi' or 'connection'")


def _samples(sc, seed, fields, tangent=False):
    return domain_samples(list(fields), sc.dim, sc.samples, seed, tangent=tangent)


# ---------------------------------------------------------------------------
# subcommands


def cmd_integrate(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    _need(sc, "initial")
    try:
        tr = integrate_sode(xi, sc.initial, sc.integrator)
        code, status = EXIT_OK, "ok"
    except E.StepFailure as exc:
        if exc.trajectory is None:
            raise
        tr, code, status = exc.trajectory, EXIT_NUMERIC, f"StepFailure: {exc}"
    rep = _report(sc, "integrate", seed, {"status": status},
                  {"final_t": tr.t1, "final_state": list(tr.final), "steps": tr.meta.get("steps", 0)},
                  ["dynamic-equation"])
    return Outcome(rep, {"trajectory.csv": write_csv(tr, sode_header(sc.dim))}, code)


def cmd_lift(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    g = connection_from_sode(xi) if sc.connection is None else sc.connection
    X = _samples(sc, seed, [*xi.xi, *g.fields()])
    K = lift_to_tangent(g)
    ids = ["connection-from-equation", "equation-from-connection", "geodesic-lift"]
    residuals = {
        "round_trip": field_residual(sode_from_connection(connection_from_sode(xi)).xi, xi.xi, X),
        "symmetry_defect": g.symmetry_defect(X),
        "restriction": field_residual(K.restrict().fields(), g.fields(), X),
    }
    if sc.connection is None:
        residuals["vhat_oracle"] = field_residual(vhat_oracle(xi).fields(), g.fields(), X)
        ids.append("vhat-projector-oracle")
    out = {"gamma": [_texts(r) for r in g.components], "K_substitution": [_texts(r) for r in K.K]}
    try:
        L = linear_lift(g, X)
        out["K_linear"] = [[_texts(r) for r in p] for p in L.coeffs]
        ids.append("quadratic-linear-dictionary")
    except E.NotAffine:
        out["K_linear"] = None
    vals = g.fields()
    table = np.vstack([X[:, : 1 + 2 * sc.dim].T, evaluate_fields(vals, X)]).T
    header = [*sode_header(sc.dim), *(f"gamma{i + 1}_{lam}" for i in range(sc.dim) for lam in range(sc.dim + 1))]
    csv = ",".join(header) + "\n" + "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in table)
    verdicts = {"symmetric": residuals["symmetry_defect"] < 1e-9}
    return Outcome(_report(sc, "lift", seed, verdicts, residuals, ids, expressions=out), {"samples.csv": csv})


def cmd_geodesic(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    _need(sc, "initial")
    cfg = sc.integrator
    K = sc.tangent_connection if sc.tangent_connection is not None else lift_to_tangent(connection_from_sode(xi))
    a = integrate_sode(xi, sc.initial, cfg)
    tp = sc.tangent_initial or TangentPoint.from_jet(sc.initial)
    b = integrate_geodesic(K, tp, cfg)
    dev = compare_trajectories(a, b, jet_projection(sc.dim))
    drift = float(np.max(np.abs(b.states[:, sc.dim + 1] - 1.0)))
    ok = dev <= 10 * cfg.tol and drift <= 1e-10
    rep = _report(sc, "geodesic", seed, {"equivalent": ok},
                  {"deviation": dev, "time_fibre_drift": drift, "tolerance": 10 * cfg.tol},
                  ["geodesic-lift", "geodesic-equation"])
    files = {"trajectory.csv": write_csv(a, sode_header(sc.dim)),
             "geodesic.csv": write_csv(b, geodesic_header(sc.dim))}
    return Outcome(rep, files, EXIT_OK if ok else EXIT_VERDICT)


def cmd_transform(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    _need(sc, "chart")
    ch = sc.chart
    X = _samples(sc, seed, [*xi.xi, *ch.forward])
    Xp = ch.pushforward_jets(X)
    xip = transform_sode(xi, ch, X)
    g = connection_from_sode(xi)
    sq = field_residual(transform_connection(g, ch, X).fields(), connection_from_sode(xip).fields(), Xp)
    tan = field_residual(transform_tangent_connection(lift_to_tangent(g), ch).restrict().fields(),
                         transform_connection(g, ch, X).fields(), Xp)
    residuals = {"round_trip": ch.round_trip_error(X), "equation_connection_square": sq,
                 "tangent_square": tan}
    ok = sq <= COVARIANCE_TOL and tan <= COVARIANCE_TOL
    rep = _report(sc, "transform", seed, {"covariant": ok}, residuals,
                  ["equation-transformation-law", "connection-transformation-law",
                   "tangent-connection-transformation-law"],
                  expressions={"xi_primed": _texts(xip.xi),
                               "gamma_primed": [_texts(r) for r in transform_connection(g, ch, X).components]})
    return Outcome(rep, {}, EXIT_OK if ok else EXIT_VERDICT)


def cmd_frames(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    _need(sc, "frame")
    fr = sc.frame
    X = _samples(sc, seed, [*xi.xi, *fr.Gamma])
    acc = relative_acceleration(xi, fr, X)
    residuals, verdicts = {}, {}
    ids = ["frame-connection", "frame-lift", "relative-acceleration"]
    if fr.is_proper(X):
        residuals["proper_form_vs_general"] = field_residual(relative_acceleration_proper(xi),
                                                             relative_acceleration_general(xi, fr), X)
        verdicts["proper_form_agrees"] = residuals["proper_form_vs_general"] <= 1e-12
        ids.append("proper-chart-relative-acceleration")
    if sc.chart is not None:
        ch = sc.chart
        Xp = ch.pushforward_jets(X)
        native = relative_acceleration(transform_sode(xi, ch, X), transform_frame(fr, ch), Xp)
        residuals["acceleration_covariance"] = field_residual(native, pushforward_vertical(ch, acc), Xp)
        verdicts["covariant"] = residuals["acceleration_covariance"] <= 1e-7
    if sc.initial is not None:
        tr = integrate_sode(xi, sc.initial, sc.integrator)
        residuals["vertical_covariant"] = vertical_covariant_residual(xi, fr, tr)
        verdicts["vertical_covariant_ok"] = residuals["vertical_covariant"] <= 1e-5
        ids.append("vertical-covariant-differential")
        if sc.chart is not None:
            ch = sc.chart
            pushed = pushforward_trajectory(tr, ch)
            residuals["vertical_covariant_pushed"] = vertical_covariant_residual(
                transform_sode(xi, ch, X), transform_frame(fr, ch), pushed)
            verdicts["vertical_covariant_pushed_ok"] = residuals["vertical_covariant_pushed"] <= 1e-5
    fc = frame_connection(connection_from_sode(xi), fr)
    rep = _report(sc, "frames", seed, verdicts, residuals, ids,
                  expressions={"relative_acceleration": _texts(acc),
                               "frame_connection": [_texts(r) for r in fc.components]})
    return Outcome(rep, {}, EXIT_OK if all(verdicts.values()) else EXIT_VERDICT)


def cmd_flatness(sc: Scenario, seed) -> Outcome:
    xi = _equation(sc)
    X = domain_samples(list(xi.xi), sc.dim, max(sc.samples, 500), seed)
    r = is_free_motion_candidate(xi, X)
    verdicts = {"verdict": r.verdict(), "quadratic": r.quadratic, "flat": r.flat, "candidate": r.candidate}
    residuals = {"max_curvature": r.max_curvature if r.quadratic else float("nan"),
                 "max_third_derivative": r.max_third_derivative}
    rep = _report(sc, "flatness", seed, verdicts, residuals,
                  ["quadratic-equation", "quadratic-linear-dictionary", "curvature", "free-motion-criterion"])
    return Outcome(rep, {}, EXIT_OK if r.candidate else EXIT_VERDICT)


def _metric(sc: Scenario) -> PseudoMetric:
    if sc.metric is not None:
        return sc.metric
    if sc.lagrangian is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return metric_from_lagrangian(sc.lagrangian)
    raise ScenarioError("this subcommand needs 'metric' or 'lagrangian'")


def cmd_relativize(sc: Scenario, seed) -> Outcome:
    g = _metric(sc)
    xi = sc.xi if sc.xi is not None else (lagrange_sode(sc.lagrangian) if sc.lagrangian else None)
    if xi is None:
        raise ScenarioError("relativize needs 'xi' or 'lagrangian'")
    X = _samples(sc, seed, [*xi.xi, *g.fields()])
    Xt = sample_points(sc.dim, sc.samples, seed, tangent=True)
    ids = ["metric-from-lagrangian", "christoffel-symbols", "relativization", "hyperboloid-condition"]
    residuals = {"levi_civita_hyperboloid": hyperboloid_check(levi_civita(g, X), g, Xt)}
    if sc.lagrangian is not None:
        residuals["lagrange_equation_vs_source"] = field_residual(lagrange_sode(sc.lagrangian, X).xi, xi.xi, X)
        ids.append("lagrange-equation")
    qs = as_quadratic(xi, X)
    if isinstance(qs, NotQuadratic):
        raise E.NotQuadraticResidual("the dynamic equation is not quadratic")
    res = relativize(qs, g, X)
    exprs = {"metric": [_texts(r) for r in g.g],
             "christoffel": [[_texts(r) for r in p] for p in christoffel(g)]}
    if isinstance(res, NotLorentzType):
        verdicts = {"verdict": "NotLorentzType", "lorentz_type": False}
        residuals["max_symmetric_part"] = res.max_symmetric_part
        code = EXIT_VERDICT
    else:
        verdicts = {"verdict": "LorentzType", "lorentz_type": True}
        residuals["relativized_hyperboloid"] = hyperboloid_check(res.K, g, Xt)
        exprs["sigma"] = [_texts(r) for r in res.sigma.K]
        code = EXIT_OK
    return Outcome(_report(sc, "relativize", seed, verdicts, residuals, ids, expressions=exprs), {}, code)


def cmd_limit(sc: Scenario, seed) -> Outcome:
    g = _metric(sc)
    lim = sc.limit
    scales = [float(v) for v in lim.get("v_scales", [0.1, 0.05])]
    window = float(lim.get("window", 2 * math.pi))
    cfg = sc.integrator if "integrator" in sc.raw else IntegratorConfig(abs_tol=1e-12, rel_tol=1e-12)
    reports = [nonrel_limit_compare(g, s, lim.get("direction"), lim.get("q0"), window, cfg) for s in scales]
    errs = [r.max_position_error for r in reports]
    rel = [r.relative_error for r in reports]
    ratios = [rel[k + 1] / rel[k] if rel[k] > 0 else float("nan") for k in range(len(rel) - 1)]
    verdicts = {"converging": all(b <= a or a < 1e-9 for a, b in zip(errs, errs[1:]))}
    residuals = {"v_scales": scales, "position_error": errs, "relative_error": rel, "relative_error_ratios": ratios}
    rows = "v_scale,position_error,relative_error\n" + "".join(
        f"{s:.17g},{e:.17g},{r:.17g}\n" for s, e, r in zip(scales, errs, rel))
    rep = _report(sc, "limit", seed, verdicts, residuals, ["non-relativistic-limit", "geodesic-equation"])
    return Outcome(rep, {"limit.csv": rows})


COMMANDS = {
    "integrate": cmd_integrate,
    "lift": cmd_lift,
    "geodesic": cmd_geodesic,
    "transform": cmd_transform,
    "frames": cmd_frames,
    "flatness": cmd_flatness,
    "relativize": cmd_relativize,
    "limit": cmd_limit,
}

_VERDICT_ERRORS = (E.ChartNotAdapted, E.NotQuadraticResidual, E.NotAffine, E.InvariantViolation)
_NUMERIC_ERRORS = (E.StepFailure, E.DomainError, E.SingularJacobian, E.NoHyperboloidPoint, E.NoOverlap)
_USAGE_ERRORS = (E.ParseError, E.DimensionMismatch, ScenarioError, E.TrajectoryMismatch)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, _USAGE_ERRORS):
        return EXIT_USAGE
    if isinstance(exc, _VERDICT_ERRORS):
        return EXIT_VERDICT
    if isinstance(exc, _NUMERIC_ERRORS):
        return EXIT_NUMERIC
    if isinstance(exc, (ValueError, KeyError, TypeError)):
        return EXIT_USAGE
    return EXIT_NUMERIC


def run(command: str, scenario_path: str, out_dir: str, seed: int | None = None) -> int:
    """Run one subcommand on one scenario file; writes report.json (or error.json) and CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        text = Path(scenario_path).read_text(encoding="utf-8")
        sc = parse_scenario(text, Path(scenario_path).stem)
        seed = seed if seed is not None else sc.seed
        if command in CHECK_COMMANDS and seed is None:
            raise ScenarioError(f"'{command}' needs a sampling seed (scenario 'seed' or --seed)")
        outcome = COMMANDS[command](sc, seed)
    except (E.JetflowError, ValueError, KeyError, TypeError, OSError) as exc:
        code = EXIT_USAGE if isinstance(exc, OSError) else exit_code_for(exc)
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        if isinstance(exc, E.ParseError):
            err.update(line=exc.line, column=exc.column)
        text = dumps(err) + "\n"
        (out / "error.json").write_text(text, encoding="utf-8")
        sys.stderr.write(text)
        return code
    (out / "report.json").write_text(dumps(outcome.report) + "\n", encoding="utf-8")
    for name, body in outcome.files.items():
        (out / name).write_text(body, encoding="utf-8")
    return outcome.code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _job(args):
    return run(*args)


def main(argv=None) -> int:
    p = _Parser(prog="jetflow", description="Dynamic equations, connections and geodesics from scenario files.")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--scenario", action="append", required=True, help="scenario JSON file (repeatable)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (overrides the scenario)")
    p.add_argument("--jobs", type=int, default=1, help="run several scenarios concurrently")
    a = p.parse_args(argv)
    if a.jobs < 1:
        p.error("--jobs must be >= 1")
    paths = a.scenario
    if len(paths) == 1:
        return run(a.subcommand, paths[0], a.out, a.seed)
    jobs = [(a.subcommand, s, str(Path(a.out) / Path(s).stem), a.seed) for s in paths]
    if a.jobs == 1:
        codes = [_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=a.jobs) as ex:
            codes = list(ex.map(_job, jobs))
    return max(codes)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
