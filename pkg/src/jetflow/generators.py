"""Seeded generators of random test systems: fields, equations, connections and charts."""

from __future__ import annotations

import numpy as np

from .charts import ChartTransform, galilean_boost, linear_chart, rotating_chart
from .expr import ScalarField, Vars, const, cos, sin
from .jet import DynamicConnection, DynamicEquation, connection_from_sode


def _monomial(rng, x: Vars, max_v_degree: int) -> ScalarField:
    m = x.m
    e = x.one
    for _ in range(rng.integers(0, 3)):
        e = e * x.q[rng.integers(m)]
    for _ in range(rng.integers(0, max_v_degree + 1)):
        e = e * x.v[rng.integers(m)]
    r = rng.random()
    if r < 0.2:
        e = e * sin(x.t)
    elif r < 0.4:
        e = e * cos(x.q[rng.integers(m)])
    elif r < 0.5:
        e = e * x.t
    return e


def random_field(rng: np.random.Generator, m: int, terms: int = 4, max_v_degree: int = 3) -> ScalarField:
    """Polynomial/trig field, at most cubic in the velocities."""
    x = Vars(m)
    e = const(round(float(rng.normal()), 3), m)
    for _ in range(terms):
        e = e + round(float(rng.normal()), 3) * _monomial(rng, x, max_v_degree)
    return e


def random_equation(rng: np.random.Generator, m: int | None = None, terms: int = 4) -> DynamicEquation:
    m = int(rng.integers(1, 4)) if m is None else m
    return DynamicEquation(tuple(random_field(rng, m, terms) for _ in range(m)))


def bounded_equation(rng: np.random.Generator, m: int | None = None) -> DynamicEquation:
    """Damped oscillators with small bounded couplings; solutions stay O(1) over long windows."""
    m = int(rng.integers(1, 4)) if m is None else m
    x = Vars(m)
    xi = []
    for i in range(m):
        w2 = float(rng.uniform(0.5, 2.0))
        c = float(rng.uniform(0.0, 0.3))
        e = -w2 * x.q[i] - c * x.v[i]
        j = int(rng.integers(m))
        e = e + float(rng.uniform(-0.2, 0.2)) * sin(x.q[j])
        e = e + float(rng.uniform(-0.2, 0.2)) * cos(x.t) * x.v[int(rng.integers(m))]
        e = e + float(rng.uniform(-0.1, 0.1)) * sin(x.q[j]) * x.v[j] * x.v[i] / (1.0 + x.v[i] * x.v[i])
        xi.append(e)
    return DynamicEquation(tuple(xi))


def asymmetric_connection(rng: np.random.Generator, m: int | None = None) -> DynamicConnection:
    """A symmetric connection plus a velocity-linear term that breaks symmetry (m >= 2)."""
    m = int(rng.integers(2, 4)) if m is None else m
    x = Vars(m)
    base = connection_from_sode(random_equation(rng, m, terms=3))
    comps = [list(r) for r in base.components]
    k = int(rng.integers(m))
    i, j = (int(a) for a in rng.choice(m, size=2, replace=False))
    comps[k][1 + i] = comps[k][1 + i] + float(rng.uniform(0.5, 2.0)) * x.v[j]
    return DynamicConnection(tuple(tuple(r) for r in comps))


def random_chart(rng: np.random.Generator, m: int, kind: str | None = None) -> ChartTransform:
    kinds = ["boost", "linear", "wobble", "shear"] + (["rotation"] if m >= 2 else [])
    kind = kind or kinds[int(rng.integers(len(kinds)))]
    x = Vars(m)
    if kind == "boost":
        return galilean_boost(list(np.round(rng.uniform(-2, 2, m), 3)), list(np.round(rng.uniform(-1, 1, m), 3)))
    if kind == "linear":
        A = np.eye(m) + 0.3 * rng.uniform(-1, 1, (m, m))
        return linear_chart(np.round(A, 3), np.round(rng.uniform(-1, 1, m), 3), np.round(rng.uniform(-1, 1, m), 3))
    if kind == "rotation":
        omega, phase = float(rng.uniform(0.5, 2.0)), float(rng.uniform(0, 1))
        if m == 2:
            return rotating_chart(omega, phase)
        c, s = cos(omega * x.t + phase), sin(omega * x.t + phase)
        fwd = (c * x.q[0] + s * x.q[1], -s * x.q[0] + c * x.q[1], *x.q[2:])
        inv = (c * x.q[0] - s * x.q[1], s * x.q[0] + c * x.q[1], *x.q[2:])
        return ChartTransform(fwd, inv, name="rotation")
    if kind == "wobble":
        eps = float(rng.uniform(0.1, 0.5))
        shift = 0.5
        fwd = tuple(q + eps * sin(x.t) for q in x.q)
        # the inverse is written in primed time t' = t + shift
        inv = tuple(q - eps * sin(x.t - shift) for q in x.q)
        return ChartTransform(fwd, inv, time_shift=shift, name="wobble")
    if kind == "shear":
        eps = float(rng.uniform(0.1, 0.3))
        if m == 1:
            fwd = (x.q[0] + eps * x.t * x.t,)
            inv = (x.q[0] - eps * x.t * x.t,)
        else:
            fwd = (x.q[0] + eps * x.q[1] * x.q[1], *x.q[1:])
            inv = (x.q[0] - eps * x.q[1] * x.q[1], *x.q[1:])
        return ChartTransform(fwd, inv, name="shear")
    raise ValueError(f"unknown chart kind {kind!r}")
