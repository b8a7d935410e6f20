import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from jetflow.errors import DomainError, NoOverlap, StepFailure, TrajectoryMismatch
from jetflow.expr import JetPoint, TangentPoint
from jetflow.generators import bounded_equation
from jetflow.integrate import (IntegratorConfig, Trajectory, compare_trajectories, geodesic_header, integrate,
                               integrate_geodesic, integrate_sode, jet_projection, sode_header, sode_rhs,
                               write_csv)
from jetflow.jet import DynamicEquation, connection_from_sode
from jetflow.relativistic import PseudoMetric, hyperboloid_samples, levi_civita
from jetflow.tangent import TangentConnection, lift_to_tangent

from conftest import seeded

OSC = DynamicEquation.from_text(["-q1"])
TOL = 1e-10
RK45 = IntegratorConfig(abs_tol=TOL, rel_tol=TOL)


def test_free_particle_straight_line():
    tr = integrate_sode(DynamicEquation.zero(1), JetPoint(0, (1,), (2,)), RK45)
    assert tr.t1 == 1.0
    assert abs(tr.final[0] - 3.0) <= 1e-10
    assert np.allclose(tr.states[:, 0], 1 + 2 * tr.times, atol=1e-12)


def test_oscillator_quarter_period():
    cfg = IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=np.pi / 2)
    tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), cfg)
    assert abs(tr.final[0]) <= 1e-8
    assert np.allclose(tr.states[:, 0], np.cos(tr.times), atol=1e-9)


def test_rk4_quarter_period_and_order():
    errs = []
    for step in (np.pi / 50, np.pi / 100, np.pi / 200):
        cfg = IntegratorConfig(method="rk4", step=step, window=np.pi / 2)
        tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), cfg)
        errs.append(np.max(np.abs(tr.states[:, 0] - np.cos(tr.times))))
    assert errs[-1] <= 1e-8
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders > 3.8) & (orders < 4.2))


def test_rk4_uses_exact_node_grid():
    cfg = IntegratorConfig(method="rk4", step=0.3, window=1.0)
    tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), cfg)
    assert np.allclose(np.diff(tr.times), 1 / 3) and tr.t1 == 1.0


def test_blow_up_reports_step_failure_with_partial_trajectory():
    xi = DynamicEquation.from_text(["v1^2"])
    with pytest.raises(StepFailure) as info:
        integrate_sode(xi, JetPoint(0, (0,), (1,)), IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=2.0))
    part = info.value.trajectory
    assert part is not None
    assert 0.999 < part.t1 < 1.0
    # closed form q = -log(1 - t), v = 1 / (1 - t) on the accepted part
    t = part.times[part.times < 0.99]
    assert np.allclose(part.at(t)[:, 0], -np.log1p(-t), rtol=1e-7)


def test_domain_errors_propagate():
    xi = DynamicEquation.from_text(["log(q1)"])
    with pytest.raises(DomainError):
        integrate_sode(xi, JetPoint(0, (1,), (-5,)), RK45)


def test_agrees_with_scipy_reference():
    xi = bounded_equation(seeded(1), 3)
    p0 = JetPoint(0, (0.3, -0.5, 1.0), (0.2, 0.0, -0.4))
    cfg = IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=5.0)
    tr = integrate_sode(xi, p0, cfg)
    f = sode_rhs(xi)
    ref = solve_ivp(f, (0, 5), [*p0.q, *p0.v], method="DOP853", rtol=1e-13, atol=1e-13, dense_output=True)
    assert np.max(np.abs(tr.states - ref.sol(tr.times).T)) < 1e-8


def test_energy_is_conserved_over_a_hundred_periods():
    cfg = IntegratorConfig(abs_tol=1e-10, rel_tol=1e-10, window=200 * np.pi)
    tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), cfg)
    energy = 0.5 * tr.states[:, 1] ** 2 + 0.5 * tr.states[:, 0] ** 2
    assert np.max(np.abs(energy - 0.5)) <= 1e-6


def test_hermite_dense_output():
    cfg = IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=3.0)
    tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), cfg)
    t = np.linspace(0, 3, 997)
    assert np.max(np.abs(tr.at(t)[:, 0] - np.cos(t))) < 1e-6
    assert np.array_equal(tr.at(tr.times), tr.states)
    with pytest.raises(NoOverlap):
        tr.at(3.5)


def test_trajectory_shape_checks():
    with pytest.raises(TrajectoryMismatch):
        Trajectory(np.array([0.0, 1.0]), np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(TrajectoryMismatch):
        Trajectory(np.array([1.0, 0.0]), np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")


def test_stop_condition():
    tr = integrate(lambda t, y: np.array([1.0]), 0.0, [0.0], IntegratorConfig(window=10.0, max_step=0.1),
                   stop=lambda t, y: y[0] >= 2)
    assert 2.0 <= tr.final[0] < 2.1 and tr.t1 < 2.1


# ---------------------------------------------------------------- geodesics

def test_zero_connection_geodesics_are_straight():
    tr = integrate_geodesic(TangentConnection.zero(2), TangentPoint((0, 1, 2), (1, 0.5, -1)), RK45)
    s = tr.times
    assert np.allclose(tr.states[:, :3], np.column_stack([s, 1 + 0.5 * s, 2 - s]), atol=1e-12)


def test_oscillator_geodesic_matches_sode():
    K = lift_to_tangent(connection_from_sode(OSC))
    cfg = IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=5.0)
    p0 = JetPoint(0, (1,), (0,))
    a = integrate_sode(OSC, p0, cfg)
    b = integrate_geodesic(K, TangentPoint.from_jet(p0), cfg)
    assert compare_trajectories(a, b, jet_projection(1)) <= 1e-8
    assert b.meta["time_fibre_drift"] == 0.0
    assert np.all(b.derivs[:, 2] == 0.0)


def test_minkowski_geodesic_keeps_its_norm():
    g = PseudoMetric.minkowski(2)
    row = hyperboloid_samples(g, 1)[0]
    tp = TangentPoint((row[0], row[1], row[2]), (row[5], row[3], row[4]))
    tr = integrate_geodesic(levi_civita(g), tp, IntegratorConfig(window=10.0))
    xd = tr.states[:, 3:]
    norm = xd[:, 0] ** 2 - xd[:, 1] ** 2 - xd[:, 2] ** 2
    assert np.max(np.abs(norm - 1.0)) <= 1e-10


@settings(max_examples=10)
@given(k=st.integers(0, 10**6))
def test_geodesic_sode_equivalence_on_generated_systems(k):
    rng = seeded(k)
    xi = bounded_equation(rng)
    m = xi.dim
    p0 = JetPoint(0.0, rng.uniform(-1, 1, m), rng.uniform(-1, 1, m))
    cfg = IntegratorConfig(abs_tol=TOL, rel_tol=TOL, window=5.0)
    a = integrate_sode(xi, p0, cfg)
    b = integrate_geodesic(lift_to_tangent(connection_from_sode(xi)), TangentPoint.from_jet(p0), cfg)
    assert compare_trajectories(a, b, jet_projection(m)) <= 10 * TOL
    assert np.max(np.abs(b.states[:, m + 1] - 1.0)) <= 1e-10


# ---------------------------------------------------------------- comparison and output

def test_compare_with_itself_and_with_free_particle():
    p0 = JetPoint(0, (1,), (0,))
    a = integrate_sode(OSC, p0, RK45)
    assert compare_trajectories(a, a) == 0.0
    b = integrate_sode(DynamicEquation.zero(1), p0, RK45)
    assert compare_trajectories(a, b, [0]) == pytest.approx(1 - np.cos(1.0), abs=1e-9)


def test_compare_without_overlap():
    a = integrate_sode(OSC, JetPoint(0, (1,), (0,)), RK45)
    b = integrate_sode(OSC, JetPoint(5, (1,), (0,)), RK45)
    with pytest.raises(NoOverlap):
        compare_trajectories(a, b)


def test_csv_layout():
    tr = integrate_sode(OSC, JetPoint(0, (1,), (0,)), IntegratorConfig(method="rk4", step=0.5, window=1.0))
    text = write_csv(tr, sode_header(1))
    lines = text.splitlines()
    assert lines[0] == "t,q1,v1"
    assert len(lines) == 4
    assert [float(v) for v in lines[1].split(",")] == [0.0, 1.0, 0.0]
    assert geodesic_header(2) == ["t", "x0", "x1", "x2", "xdot0", "xdot1", "xdot2"]
