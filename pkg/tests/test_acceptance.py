"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import filecmp
import time
from pathlib import Path

import numpy as np
import pytest

from jetflow.charts import galilean_boost, rotating_chart
from jetflow.cli import COMMANDS, run
from jetflow.expr import JetPoint, TangentPoint, evaluate_fields
from jetflow.frames import (ReferenceFrame, pushforward_vertical, relative_acceleration,
                            relative_acceleration_general, relative_acceleration_proper, transform_frame)
from jetflow.generators import asymmetric_connection, bounded_equation, random_chart, random_equation, random_field
from jetflow.integrate import IntegratorConfig, compare_trajectories, integrate_geodesic, integrate_sode, jet_projection
from jetflow.jet import (DynamicEquation, as_quadratic, connection_from_sode, resymmetrize, sode_from_connection,
                         transform_connection, transform_sode)
from jetflow.relativistic import (NotLorentzType, PseudoMetric, QuadraticLagrangian, lagrange_sode, levi_civita,
                                  metric_from_lagrangian, nonrel_limit_compare, relativize)
from jetflow.sampling import field_residual, max_abs, sample_points
from jetflow.tangent import (curvature, is_free_motion_candidate, lift_to_tangent, quadratic_to_linear,
                             transform_tangent_connection)
from jetflow.vectorfields import vhat_oracle

from conftest import record, seeded

ROOT = Path(__file__).resolve().parents[1]
N_POINTS = 200


def generated_suite(n=50, offset=0):
    """(equation, samples) pairs with m <= 3 and polynomial/trig fields."""
    out = []
    for k in range(offset, offset + n):
        xi = random_equation(seeded(k), 1 + k % 3)
        out.append((xi, sample_points(xi.dim, N_POINTS, seed=k)))
    return out


def test_criterion_1_round_trip():
    start = time.perf_counter()
    worst = 0.0
    for xi, X in generated_suite():
        worst = max(worst, field_residual(sode_from_connection(connection_from_sode(xi)).xi, xi.xi, X))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 30
    assert record(1, ok, f"max err {worst:.2e} <= 1e-12, {elapsed:.1f} s < 30 s")


def test_criterion_2_symmetry_fixed_point():
    sym = 0.0
    for xi, X in generated_suite(20, 1000):
        g = connection_from_sode(xi)
        sym = max(sym, field_residual(resymmetrize(g).fields(), g.fields(), X))
    changed, induced = [], 0.0
    for k in range(20):
        g = asymmetric_connection(seeded(2000 + k), 2 + k % 2)
        X = sample_points(g.dim, N_POINTS, seed=k)
        r = resymmetrize(g)
        changed.append(field_residual(r.fields(), g.fields(), X))
        induced = max(induced, field_residual(sode_from_connection(r).xi, sode_from_connection(g).xi, X))
    ok = sym <= 1e-10 and min(changed) > 1e-6 and induced <= 1e-10
    assert record(2, ok, f"symmetric {sym:.2e}, min change {min(changed):.2e} on 20 asymmetric, "
                         f"induced SODE {induced:.2e}")


def test_criterion_3_oracle():
    worst = 0.0
    for xi, X in generated_suite(50) + [(bounded_equation(seeded(k)), None) for k in range(10)]:
        X = sample_points(xi.dim, N_POINTS) if X is None else X
        worst = max(worst, field_residual(vhat_oracle(xi).fields(), connection_from_sode(xi).fields(), X))
    assert record(3, worst <= 1e-9, f"max err {worst:.2e} <= 1e-9 on 60 systems")


def acceptance_charts():
    fixed = [(2, galilean_boost([1.0, -0.5])), (2, rotating_chart(1.0)), (2, rotating_chart(0.7, 0.3)),
             (1, galilean_boost([2.0]))]
    kinds = ["boost", "rotation", "linear", "wobble", "shear"]
    rest = [(2 + k % 2, random_chart(seeded(3000 + k), 2 + k % 2, kinds[k % 5])) for k in range(16)]
    return fixed + rest


def test_criterion_4_covariance():
    jet_sq = tan_sq = 0.0
    for k, (m, ch) in enumerate(acceptance_charts()):
        xi = random_equation(seeded(4000 + k), m, terms=3)
        X = sample_points(m, N_POINTS, seed=k)
        Xp = ch.pushforward_jets(X)
        g = connection_from_sode(xi)
        lhs = transform_connection(g, ch, X)
        jet_sq = max(jet_sq, field_residual(lhs.fields(), connection_from_sode(transform_sode(xi, ch, X)).fields(), Xp))
        restricted = transform_tangent_connection(lift_to_tangent(g), ch).restrict()
        tan_sq = max(tan_sq, field_residual(restricted.fields(), lhs.fields(), Xp))
    ok = max(jet_sq, tan_sq) <= 1e-8
    assert record(4, ok, f"jet square {jet_sq:.2e}, tangent square {tan_sq:.2e} <= 1e-8 on 20 pairs")


def test_criterion_5_geodesic_equivalence():
    tol = 1e-10
    cfg = IntegratorConfig(abs_tol=tol, rel_tol=tol, window=5.0)
    dev = fibre = 0.0
    for k in range(20):
        rng = seeded(5000 + k)
        xi = bounded_equation(rng)
        m = xi.dim
        p0 = JetPoint(0.0, tuple(rng.uniform(-1, 1, m)), tuple(rng.uniform(-1, 1, m)))
        a = integrate_sode(xi, p0, cfg)
        b = integrate_geodesic(lift_to_tangent(connection_from_sode(xi)), TangentPoint.from_jet(p0), cfg)
        dev = max(dev, compare_trajectories(a, b, jet_projection(m)))
        fibre = max(fibre, float(np.max(np.abs(b.states[:, m + 1] - 1.0))))
    osc = integrate_sode(DynamicEquation.from_text(["-q1"]), JetPoint(0.0, (1.0,), (0.0,)),
                         IntegratorConfig(abs_tol=1e-12, rel_tol=1e-12, window=np.pi / 2))
    q_end = abs(osc.final[0])
    ok = dev <= 10 * tol and fibre <= 1e-10 and q_end <= 1e-8
    assert record(5, ok, f"deviation {dev:.2e} <= {10 * tol:.0e}, tdot drift {fibre:.1e}, |q(pi/2)| {q_end:.1e}")


def test_criterion_6_free_motion():
    images = [transform_sode(DynamicEquation.zero(2), rotating_chart(1.0))]
    images += [transform_sode(DynamicEquation.zero(m), ch) for m, ch in acceptance_charts()]
    flat = max(curvature(quadratic_to_linear(as_quadratic(xi))).max_abs() for xi in images)
    flat = max(flat, is_free_motion_candidate(DynamicEquation.zero(3)).max_curvature)
    osc = curvature(quadratic_to_linear(as_quadratic(DynamicEquation.from_text(["-q1"])))).max_abs()
    ok = flat < 1e-8 and abs(osc - 1.0) <= 1e-9
    assert record(6, ok, f"free images max|R| {flat:.1e} < 1e-8, oscillator max|R| {osc:.12f}")


def test_criterion_7_relative_acceleration():
    proper = 0.0
    for xi, X in generated_suite(20, 7000):
        proper = max(proper, field_residual(relative_acceleration_proper(xi),
                                            relative_acceleration_general(xi, ReferenceFrame.rest(xi.dim)), X))
    cov = 0.0
    for k in range(10):
        rng = seeded(7500 + k)
        m = 1 + k % 3
        xi = random_equation(rng, m, terms=3)
        fr = ReferenceFrame(tuple(random_field(rng, m, 3, max_v_degree=0) for _ in range(m)))
        ch = random_chart(rng, m)
        X = sample_points(m, N_POINTS, seed=k)
        Xp = ch.pushforward_jets(X)
        native = relative_acceleration(transform_sode(xi, ch, X), transform_frame(fr, ch), Xp)
        cov = max(cov, field_residual(native, pushforward_vertical(ch, relative_acceleration(xi, fr, X)), Xp))
    free = max_abs(relative_acceleration(DynamicEquation.zero(2), ReferenceFrame.rest(2)), sample_points(2))
    ok = proper <= 1e-12 and cov <= 1e-7 and free == 0.0
    assert record(7, ok, f"proper vs general {proper:.1e}, covariance {cov:.1e} on 10 charts, free {free:.1e}")


def test_criterion_8_relativistic_bridge():
    X1 = sample_points(1)
    L = QuadraticLagrangian.from_text([["1"]], ["0"], "-(1 + 0.5*q1^2)")
    osc = field_residual(lagrange_sode(L).xi, DynamicEquation.from_text(["-q1"]).xi, X1)

    g = metric_from_lagrangian(L)
    x0, v = np.array([0.0, 0.5]), np.array([0.3])
    tdot = 1 / np.sqrt(evaluate_fields([g.norm()], np.array([[*x0, *v, 1.0]]))[0, 0])
    tr = integrate_geodesic(levi_civita(g), TangentPoint(tuple(x0), (tdot, *(tdot * v))),
                            IntegratorConfig(abs_tol=1e-10, rel_tol=1e-10, window=10.0))
    rows = np.column_stack([tr.states[:, :2], tr.states[:, 3:], tr.states[:, 2]])
    drift = float(np.max(np.abs(evaluate_fields([g.norm()], rows)[0] - 1.0)))

    mink = PseudoMetric.minkowski(2)
    magnetic = relativize(as_quadratic(DynamicEquation.from_text(["0.8*v2", "-0.8*v1"])), mink)
    friction = relativize(as_quadratic(DynamicEquation.from_text(["-0.2*v1"])), PseudoMetric.minkowski(1))
    accepted = bool(magnetic) and not isinstance(magnetic, NotLorentzType)
    rejected = isinstance(friction, NotLorentzType)

    a = nonrel_limit_compare(g, 0.1, [1.0])
    b = nonrel_limit_compare(g, 0.05, [1.0])
    ratio = b.relative_error / a.relative_error
    ok = osc <= 1e-9 and drift <= 1e-7 and accepted and rejected and 0.15 <= ratio <= 0.4
    assert record(8, ok, f"oscillator {osc:.1e}, hyperboloid drift {drift:.1e}, magnetic "
                         f"{'accepted' if accepted else 'REJECTED'}, friction {'rejected' if rejected else 'ACCEPTED'}, "
                         f"limit ratio {ratio:.4f}")


def test_criterion_9_golden_files(tmp_path):
    golden = ROOT / "tests" / "golden"
    mismatched, total = [], 0
    for path in sorted((ROOT / "scenarios").glob("*.json")):
        for cmd in sorted(COMMANDS):
            out = tmp_path / path.stem / cmd
            run(cmd, str(path), str(out))
            ref = golden / path.stem / cmd
            names = {p.name for p in out.iterdir()} | {p.name for p in ref.iterdir()}
            for n in sorted(names):
                total += 1
                if not ((out / n).exists() and (ref / n).exists() and filecmp.cmp(out / n, ref / n, shallow=False)):
                    mismatched.append(f"{path.stem}/{cmd}/{n}")
    assert record(9, not mismatched, f"{total - len(mismatched)}/{total} files byte-identical"), mismatched


@pytest.mark.parametrize("scenario", ["oscillator", "free_particle"])
def test_golden_integrate_values(scenario):
    # the golden CSVs also carry the expected numbers, not just stable bytes
    data = np.loadtxt(ROOT / "tests" / "golden" / scenario / "integrate" / "trajectory.csv", delimiter=",", skiprows=1)
    t, q = data[:, 0], data[:, 1]
    exact = np.cos(t) if scenario == "oscillator" else 1.0 + 2.0 * t
    assert np.max(np.abs(q - exact)) <= 1e-8
