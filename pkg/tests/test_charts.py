import numpy as np
import pytest
from hypothesis import given, strategies as st

from jetflow.charts import chart_from_text, galilean_boost, identity_chart, linear_chart, rotating_chart
from jetflow.errors import DimensionMismatch, SingularJacobian
from jetflow.expr import JetPoint, TangentPoint, Vars
from jetflow.generators import random_chart
from jetflow.sampling import sample_points

from conftest import seeded

KINDS = ["boost", "linear", "wobble", "shear", "rotation"]


def test_identity_leaves_point_unchanged():
    p = JetPoint(0.3, (1.0, -2.0), (0.5, 4.0))
    assert identity_chart(2).pushforward_jet(p) == p


def test_galilean_boost_point():
    p = galilean_boost([1.0]).pushforward_jet(JetPoint(0, (1,), (2,)))
    assert p == JetPoint(0, (1,), (1,))


def test_rotation_round_trip_point():
    ch = rotating_chart(1.0)
    p = JetPoint(0.7, (1.2, -0.4), (0.3, 2.0))
    back = ch.inverted().pushforward_jet(ch.pushforward_jet(p))
    assert np.allclose([back.t, *back.q, *back.v], [p.t, *p.q, *p.v], atol=1e-10, rtol=0)


def test_rotation_velocity_has_frame_term():
    # a point at rest on the q1 axis moves clockwise in the rotating chart
    p = rotating_chart(2.0).pushforward_jet(JetPoint(0, (1.0, 0.0), (0.0, 0.0)))
    assert p.v == pytest.approx((0.0, -2.0), abs=1e-15)


@given(k=st.integers(0, 10**6), m=st.integers(1, 3), kind=st.sampled_from(KINDS))
def test_chart_round_trip(k, m, kind):
    if kind == "rotation" and m == 1:
        kind = "boost"
    ch = random_chart(seeded(k), m, kind)
    assert ch.round_trip_error(sample_points(m, 100, seed=k)) < 1e-10


def test_time_shift_carried_to_points():
    x = Vars(1)
    from jetflow.charts import ChartTransform
    ch = ChartTransform((x.q[0] + x.t,), (x.q[0] - (x.t - 2.0),), time_shift=2.0)
    p = ch.pushforward_jet(JetPoint(1.0, (0.5,), (1.0,)))
    assert p == JetPoint(3.0, (1.5,), (2.0,))
    assert ch.round_trip_error(sample_points(1, 50)) < 1e-14


def test_tangent_pushforward_agrees_on_jet_slice():
    ch = rotating_chart(0.8, 0.1)
    p = JetPoint(0.4, (1.0, 2.0), (-1.0, 0.5))
    a = ch.pushforward_jet(p)
    b = ch.pushforward_tangent(TangentPoint.from_jet(p))
    assert b.xdot[0] == 1.0
    assert np.allclose(b.x[1:], a.q, atol=1e-14) and np.allclose(b.xdot[1:], a.v, atol=1e-14)


def test_tangent_velocity_scales_with_tdot():
    ch = galilean_boost([2.0])
    p = ch.pushforward_tangent(TangentPoint((0.0, 1.0), (3.0, 1.0)))
    assert p.xdot == (3.0, 1.0 - 2.0 * 3.0)


def test_linear_chart_inverse_is_exact():
    A = [[2.0, 1.0], [0.5, 1.0]]
    ch = linear_chart(A, [1.0, -1.0], [0.2, 0.0])
    assert ch.round_trip_error(sample_points(2, 100)) < 1e-13


def test_singular_jacobian_detected():
    ch = chart_from_text(["q1^3"], ["q1^(1/3)"])
    with pytest.raises(SingularJacobian):
        ch.pushforward_jet(JetPoint(0, (0.0,), (1.0,)))


def test_chart_rejects_velocity_dependence():
    x = Vars(1)
    from jetflow.charts import ChartTransform
    with pytest.raises(ValueError):
        ChartTransform((x.q[0] + x.v[0],), (x.q[0],))
    with pytest.raises(DimensionMismatch):
        ChartTransform((x.q[0],), ())
