import numpy as np
import pytest
from hypothesis import given, strategies as st

from jetflow.charts import galilean_boost, identity_chart, rotating_chart
from jetflow.errors import DimensionMismatch
from jetflow.expr import JetPoint, Vars
from jetflow.frames import pushforward_trajectory
from jetflow.generators import asymmetric_connection, bounded_equation, random_chart, random_equation
from jetflow.integrate import IntegratorConfig, compare_trajectories, integrate_sode
from jetflow.jet import (DynamicConnection, DynamicEquation, NotQuadratic, as_quadratic, connection_from_sode,
                         resymmetrize, sode_from_connection, transform_connection, transform_sode)
from jetflow.sampling import field_residual, max_abs, sample_points

from conftest import seeded

X1 = sample_points(1)
X2 = sample_points(2)


def fields_close(a, b, X, tol):
    return field_residual(a, b, X) <= tol


# ---------------------------------------------------------------- conversions

def test_zero_connection_gives_free_particle():
    assert max_abs(sode_from_connection(DynamicConnection.zero(2)).xi, X2) == 0.0


def test_oscillator_connection_to_equation():
    g = DynamicConnection.from_text(["-q1"], [["0"]])
    assert fields_close(sode_from_connection(g).xi, DynamicEquation.from_text(["-q1"]).xi, X1, 0)


def test_damped_connection_to_equation():
    g = DynamicConnection.from_text(["-q1 - 0.1*v1"], [["-0.1"]])
    expect = DynamicEquation.from_text(["-q1 - 0.2*v1"])
    assert fields_close(sode_from_connection(g).xi, expect.xi, X1, 1e-15)


def test_oscillator_equation_to_connection():
    g = connection_from_sode(DynamicEquation.from_text(["-q1"]))
    assert fields_close(g.fields(), DynamicConnection.from_text(["-q1"], [["0"]]).fields(), X1, 0)


def test_damped_equation_to_connection_against_finite_differences():
    xi = DynamicEquation.from_text(["-q1 - 0.2*v1"])
    g = connection_from_sode(xi)
    # half the finite-difference velocity derivative of xi
    h = 1e-5
    Xp, Xm = X1.copy(), X1.copy()
    Xp[:, 2] += h
    Xm[:, 2] -= h
    half = 0.5 * (xi.evaluate(Xp)[0] - xi.evaluate(Xm)[0]) / (2 * h)
    assert np.allclose(g.gammaj[0][0].evaluate(X1), half, atol=1e-9)
    assert np.allclose(g.gammaj[0][0].evaluate(X1), -0.1, atol=1e-15)
    assert fields_close([g.gamma0[0]], DynamicEquation.from_text(["-q1 - 0.1*v1"]).xi, X1, 1e-15)


def test_free_particle_both_ways():
    assert max_abs(connection_from_sode(DynamicEquation.zero(3)).fields(), sample_points(3)) == 0.0


@given(k=st.integers(0, 10**6))
def test_round_trip_and_symmetry(k):
    xi = random_equation(seeded(k))
    X = sample_points(xi.dim, 200, seed=k)
    g = connection_from_sode(xi)
    assert field_residual(sode_from_connection(g).xi, xi.xi, X) <= 1e-12
    assert g.symmetry_defect(X) < 1e-9


# ---------------------------------------------------------------- symmetry

def test_resymmetrize_fixes_symmetric_connections():
    xi = random_equation(seeded(3), 2)
    g = connection_from_sode(xi)
    assert field_residual(resymmetrize(g).fields(), g.fields(), X2) <= 1e-10


def test_resymmetrize_zero():
    assert max_abs(resymmetrize(DynamicConnection.zero(2)).fields(), X2) == 0.0


def test_resymmetrize_listed_example_is_already_a_fixed_point():
    # gamma^1_2 = v2 satisfies gamma^k_i = d_i gamma^k_0 + v^j d_i gamma^k_j, so it is left alone
    g = DynamicConnection.from_text(["0", "0"], [["0", "v2"], ["0", "0"]])
    h = resymmetrize(g)
    assert h.symmetry_defect(X2) < 1e-12
    assert field_residual(sode_from_connection(h).xi, sode_from_connection(g).xi, X2) <= 1e-12
    assert field_residual(h.fields(), g.fields(), X2) <= 1e-12


def test_resymmetrize_asymmetric_example():
    g = DynamicConnection.from_text(["0", "0"], [["v2", "0"], ["0", "0"]])
    assert g.symmetry_defect(X2) == pytest.approx(1.0)
    h = resymmetrize(g)
    assert h.symmetry_defect(X2) < 1e-12
    assert field_residual(sode_from_connection(h).xi, sode_from_connection(g).xi, X2) <= 1e-12
    assert field_residual(h.fields(), g.fields(), X2) > 0.1


def test_derivative_symmetry_alone_is_not_a_fixed_point():
    # m = 1 passes the derivative test trivially, yet gamma^1_1 = -0.1 != d_v gamma^1_0
    g = DynamicConnection.from_text(["0"], [["-0.1"]])
    assert g.is_symmetric(X1)
    assert field_residual(resymmetrize(g).fields(), g.fields(), X1) > 0.04


@given(k=st.integers(0, 10**6))
def test_resymmetrize_idempotent_and_preserves_equation(k):
    g = asymmetric_connection(seeded(k))
    X = sample_points(g.dim, 200, seed=k)
    h = resymmetrize(g)
    assert h.symmetry_defect(X) < 1e-9
    assert field_residual(resymmetrize(h).fields(), h.fields(), X) <= 1e-10
    assert field_residual(sode_from_connection(h).xi, sode_from_connection(g).xi, X) <= 1e-10


def test_resymmetrize_equals_connection_of_induced_equation():
    g = asymmetric_connection(seeded(11), 3)
    X = sample_points(3)
    assert field_residual(resymmetrize(g).fields(), connection_from_sode(sode_from_connection(g)).fields(),
                          X) <= 1e-10


# ---------------------------------------------------------------- transformations

def test_identity_transform():
    xi = random_equation(seeded(5), 2)
    assert field_residual(transform_sode(xi, identity_chart(2)).xi, xi.xi, X2) <= 1e-14
    g = connection_from_sode(xi)
    assert field_residual(transform_connection(g, identity_chart(2)).fields(), g.fields(), X2) <= 1e-14


def test_boost_preserves_free_motion():
    ch = galilean_boost([1.0])
    assert max_abs(transform_sode(DynamicEquation.zero(1), ch).xi, X1) == 0.0
    assert max_abs(transform_connection(DynamicConnection.zero(1), ch).fields(), X1) == 0.0


def test_rotating_free_motion_has_coriolis_and_centrifugal_terms():
    xi = transform_sode(DynamicEquation.zero(2), rotating_chart(1.0))
    expect = DynamicEquation.from_text(["q1 + 2*v2", "q2 - 2*v1"])
    assert field_residual(xi.xi, expect.xi, X2) <= 1e-13


@given(k=st.integers(0, 10**6), kind=st.sampled_from(["boost", "linear", "rotation", "wobble", "shear"]))
def test_transformation_laws_commute(k, kind):
    rng = seeded(k)
    xi = random_equation(rng, 2)
    ch = random_chart(rng, 2, kind)
    X = sample_points(2, 200, seed=k)
    Xp = ch.pushforward_jets(X)
    lhs = transform_connection(connection_from_sode(xi), ch, X)
    rhs = connection_from_sode(transform_sode(xi, ch, X))
    assert field_residual(lhs.fields(), rhs.fields(), Xp) <= 1e-8


@pytest.mark.parametrize("kind", ["boost", "linear", "rotation", "wobble", "shear"])
def test_transformed_equation_against_pushed_trajectories(kind):
    # independent oracle: integrate, push the solution curve through the chart
    rng = seeded(100)
    xi = bounded_equation(rng, 2)
    ch = random_chart(rng, 2, kind)
    cfg = IntegratorConfig(abs_tol=1e-11, rel_tol=1e-11, window=2.0)
    p0 = JetPoint(0.0, (0.5, -0.3), (0.2, 0.4))
    pushed = pushforward_trajectory(integrate_sode(xi, p0, cfg), ch)
    native = integrate_sode(transform_sode(xi, ch), ch.pushforward_jet(p0), cfg)
    assert compare_trajectories(pushed, native) < 1e-7


def test_transform_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        transform_sode(DynamicEquation.zero(1), rotating_chart())


# ---------------------------------------------------------------- quadratic equations

def test_velocity_free_equation_is_quadratic():
    qs = as_quadratic(DynamicEquation.from_text(["-q1"]))
    assert max_abs([qs.a[0][0][0], qs.b[0][0]], X1) == 0.0
    assert fields_close(qs.f, DynamicEquation.from_text(["-q1"]).xi, X1, 0)


def test_geodesic_type_quadratic_coefficients():
    qs = as_quadratic(DynamicEquation.from_text(["v1^2/q1"]))
    X = X1[np.abs(X1[:, 1]) > 0.1]
    assert fields_close([qs.a[0][0][0]], [DynamicEquation.from_text(["1/q1"]).xi[0]], X, 1e-14)
    assert max_abs([qs.b[0][0], qs.f[0]], X) == 0.0


def test_sin_velocity_is_not_quadratic():
    r = as_quadratic(DynamicEquation.from_text(["sin(v1)"]))
    assert isinstance(r, NotQuadratic) and not r
    assert r.max_third_derivative > 0.5


def test_quadratic_split_reassembles():
    x = Vars(2)
    xi = DynamicEquation((x.q[0] * x.v[0] * x.v[1] - x.t * x.v[1] + x.q[1], x.v[1] ** 2 + 3 * x.v[0]))
    qs = as_quadratic(xi)
    assert field_residual(qs.to_equation().xi, xi.xi, X2) <= 1e-14
    assert qs.asymmetry(X2) == 0.0


def test_zero_dimensional_bundles_rejected():
    with pytest.raises(DimensionMismatch):
        DynamicEquation(())
    with pytest.raises(DimensionMismatch):
        DynamicConnection(())
