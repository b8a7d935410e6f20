"""Reference frames, frame connections and relative accelerations.

A reference frame is a connection Gamma = d_t + Gamma^i d_i on Q -> R.  The
frame connection of a dynamic connection gamma is

    gG^i_0 = d_t Gamma^i - gamma^i_k Gamma^k - Gamma^k (d_k Gamma^i - gamma^i_k o Gamma)
    gG^i_k = gamma^i_k + d_k Gamma^i - gamma^i_k o Gamma

where ``o Gamma`` substitutes v := Gamma(t, q) and d_t Gamma^i is the total
derivative dt Gamma^i + v^j dj Gamma^i on J^1Q.  Its induced dynamic
equation xi_Gamma is the frame lift, and a_Gamma = xi - xi_Gamma with
gamma = gamma_xi is the relative acceleration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .charts import ChartTransform
from .errors import DimensionMismatch, TrajectoryMismatch
from .expr import Q, T, V, JetPoint, ScalarField, Vars, const, evaluate_fields
from .jet import DynamicConnection, DynamicEquation, connection_from_sode, samples_for
from .parser import parse_field
from .sampling import max_abs

PROPER_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ReferenceFrame:
    Gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "Gamma", tuple(self.Gamma))
        m = len(self.Gamma)
        if m == 0:
            raise DimensionMismatch("a reference frame needs m >= 1 components")
        for f in self.Gamma:
            if f.dim != m:
                raise DimensionMismatch("frame component dimension mismatch")
            if f.uses("v") or f.uses("tdot"):
                raise ValueError("reference frame components must be velocity-independent")

    @property
    def dim(self) -> int:
        return len(self.Gamma)

    @classmethod
    def from_text(cls, exprs: Sequence[str]) -> "ReferenceFrame":
        m = len(exprs)
        return cls(tuple(parse_field(e, m) for e in exprs))

    @classmethod
    def rest(cls, m: int) -> "ReferenceFrame":
        return cls((const(0.0, m),) * m)

    @classmethod
    def along_motion(cls, velocity: Sequence[ScalarField]) -> "ReferenceFrame":
        """Proper frame of a motion: the q-constant extension Gamma^i(t, q) = cdot^i(t)."""
        for f in velocity:
            if f.uses("q") or f.uses("v"):
                raise ValueError("motion velocity must be a function of t only")
        return cls(tuple(velocity))

    def substitution(self) -> dict:
        """v := Gamma(t, q), the composition ``o Gamma``."""
        return {V(i): g for i, g in enumerate(self.Gamma)}

    def total_derivative(self) -> tuple:
        """d_t Gamma^i = dt Gamma^i + v^j dj Gamma^i (a field on J^1Q)."""
        x = Vars(self.dim)
        out = []
        for g in self.Gamma:
            e = g.partial(T)
            for j in range(self.dim):
                e = e + x.v[j] * g.partial(Q(j))
            out.append(e)
        return tuple(out)

    def is_proper(self, samples=None, tol: float = PROPER_TOL) -> bool:
        """True when Gamma vanishes on the samples (the chart is proper for this frame)."""
        X = samples_for(self.Gamma, self.dim, samples)
        return max_abs(self.Gamma, X) < tol


def relative_velocity(fr: ReferenceFrame, p: JetPoint) -> np.ndarray:
    """v^i - Gamma^i(t, q)."""
    G = evaluate_fields(fr.Gamma, p.row()[None, :])[:, 0]
    return np.asarray(p.v) - G


def transform_frame(fr: ReferenceFrame, chart: ChartTransform) -> ReferenceFrame:
    """Gamma'^i = dt q'^i + Gamma^j dj q'^i, in primed variables."""
    sub = fr.substitution()
    return ReferenceFrame(tuple(chart.to_primed(w.subs(sub)) for w in chart.velocity_forward))


def frame_connection(g: DynamicConnection, fr: ReferenceFrame) -> DynamicConnection:
    m = g.dim
    if fr.dim != m:
        raise DimensionMismatch("frame and connection dimensions differ")
    G = fr.Gamma
    dtG = fr.total_derivative()
    sub = fr.substitution()
    comps = []
    for i in range(m):
        gk = g.components[i][1:]
        gk_on_frame = [f.subs(sub) for f in gk]
        nabla = [G[i].partial(Q(k)) - gk_on_frame[k] for k in range(m)]
        g0 = dtG[i]
        for k in range(m):
            g0 = g0 - gk[k] * G[k] - G[k] * nabla[k]
        row = [g0] + [gk[k] + nabla[k] for k in range(m)]
        comps.append(tuple(row))
    return DynamicConnection(tuple(comps))


def frame_lift(g: DynamicConnection, fr: ReferenceFrame) -> DynamicEquation:
    """xi_Gamma^i = d_t Gamma^i + (dk Gamma^i + gamma^i_k - gamma^i_k o Gamma)(v^k - Gamma^k)."""
    m = g.dim
    x = Vars(m)
    G = fr.Gamma
    dtG = fr.total_derivative()
    sub = fr.substitution()
    out = []
    for i in range(m):
        e = dtG[i]
        for k in range(m):
            gk = g.components[i][1 + k]
            e = e + (G[i].partial(Q(k)) + gk - gk.subs(sub)) * (x.v[k] - G[k])
        out.append(e)
    return DynamicEquation(tuple(out))


def relative_acceleration(xi: DynamicEquation, fr: ReferenceFrame, samples=None,
                          fast_path: bool = True) -> tuple:
    """a_Gamma = xi - xi_Gamma with gamma = gamma_xi.

    In a chart proper for ``fr`` (Gamma = 0 on the samples) the closed form
    a^i = xi^i - 1/2 v^k (d_vk xi^i - d_vk xi^i|_{v=0}) is used when ``fast_path``.
    """
    if fast_path and fr.is_proper(samples_for(xi.xi, xi.dim, samples)):
        return relative_acceleration_proper(xi)
    return relative_acceleration_general(xi, fr)


def relative_acceleration_general(xi: DynamicEquation, fr: ReferenceFrame) -> tuple:
    lift = frame_lift(connection_from_sode(xi), fr)
    return tuple(a - b for a, b in zip(xi.xi, lift.xi))


def relative_acceleration_proper(xi: DynamicEquation) -> tuple:
    m = xi.dim
    x = Vars(m)
    zero_v = {V(j): 0.0 for j in range(m)}
    out = []
    for f in xi.xi:
        e = f
        for k in range(m):
            d = f.partial(V(k))
            e = e - 0.5 * x.v[k] * (d - d.subs(zero_v))
        out.append(e)
    return tuple(out)


def pushforward_vertical(chart: ChartTransform, a: Sequence[ScalarField]) -> tuple:
    """a'^i = dj q'^i a^j, expressed in primed variables."""
    m = chart.dim
    out = []
    for i in range(m):
        e = const(0.0, m)
        for j in range(m):
            e = e + chart.jacobian[i][j] * a[j]
        out.append(chart.to_primed(e))
    return tuple(out)


def geodesic_defect(xi: DynamicEquation, fr: ReferenceFrame) -> tuple:
    """d_t Gamma^i - xi^i along the frame (both composed with Gamma); zero for geodesic frames."""
    sub = fr.substitution()
    return tuple(d.subs(sub) - f.subs(sub) for d, f in zip(fr.total_derivative(), xi.xi))


def vertical_covariant_residual(xi: DynamicEquation, fr: ReferenceFrame, traj, h: float = 1e-4) -> float:
    """max |d_t v^i - xi_Gamma^i - a_Gamma^i| along a jet trajectory.

    ``d_t v`` is a central difference (step ``h``) of the trajectory's dense
    output, taken at interior nodes.
    """
    m = xi.dim
    if traj.states.shape[1] != 2 * m:
        raise TrajectoryMismatch(f"trajectory state has {traj.states.shape[1]} columns, expected {2 * m}")
    lift = frame_lift(connection_from_sode(xi), fr)
    acc = relative_acceleration(xi, fr)
    t = traj.times
    inner = t[(t - h > t[0]) & (t + h < t[-1])]
    if inner.size == 0:
        raise TrajectoryMismatch("trajectory too short for differencing")
    plus, minus = traj.at(inner + h), traj.at(inner - h)
    dv = (plus[:, m:] - minus[:, m:]) / (2 * h)
    states = traj.at(inner)
    X = np.column_stack([inner, states, np.full(inner.size, np.nan)])
    rhs = evaluate_fields([*lift.xi, *acc], X)
    resid = dv.T - rhs[:m] - rhs[m:]
    return float(np.max(np.abs(resid)))


def pushforward_trajectory(traj, chart: ChartTransform):
    """Map a jet trajectory through a chart; derivatives by the chain rule from stored ones."""
    from .integrate import Trajectory

    m = chart.dim
    if traj.states.shape[1] != 2 * m:
        raise TrajectoryMismatch("trajectory and chart dimensions differ")
    t = traj.times
    X = np.column_stack([t, traj.states, np.full(t.size, np.nan)])
    w = chart.velocity_forward
    # d_t w = dt w + v^j dj w + a^j d_vj w, with a = stored acceleration
    dw = [[f.partial(T) for f in w], [[f.partial(Q(j)) for j in range(m)] for f in w],
          [[f.partial(V(j)) for j in range(m)] for f in w]]
    flat = [*chart.forward, *w, *dw[0], *(c for r in dw[1] for c in r), *(c for r in dw[2] for c in r)]
    vals = evaluate_fields(flat, X)
    qp, vp = vals[:m].T, vals[m : 2 * m].T
    dt_w = vals[2 * m : 3 * m].T
    dq_w = vals[3 * m : 3 * m + m * m].T.reshape(-1, m, m)
    dv_w = vals[3 * m + m * m :].T.reshape(-1, m, m)
    v, a = traj.states[:, m:], traj.derivs[:, m:]
    accp = dt_w + np.einsum("nij,nj->ni", dq_w, v) + np.einsum("nij,nj->ni", dv_w, a)
    meta = {**traj.meta, "chart": chart.name}
    return Trajectory(t + chart.time_shift, np.hstack([qp, vp]), np.hstack([vp, accp]), meta)
