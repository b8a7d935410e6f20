"""Time-preserving chart changes t' = t + c, q' = q'(t, q) and their jet/tangent lifts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, SingularJacobian
from .expr import JetPoint, Q, T, TangentPoint, V, ScalarField, Vars, cos, sin, \
    evaluate_fields, jet_matrix
from .parser import parse_field


@dataclass(frozen=True, eq=False)
class ChartTransform:
    """A chart change of the configuration bundle.

    ``forward[i]`` is q'^i as a field of (t, q); ``inverse[i]`` is q^i as a
    field of the *primed* variables (its symbols t, q stand for t', q').
    """

    forward: tuple
    inverse: tuple
    time_shift: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "forward", tuple(self.forward))
        object.__setattr__(self, "inverse", tuple(self.inverse))
        if len(self.forward) != len(self.inverse) or not self.forward:
            raise DimensionMismatch("forward and inverse must have the same positive length")
        m = len(self.forward)
        for f in (*self.forward, *self.inverse):
            if f.dim != m:
                raise DimensionMismatch("chart components must have dim equal to their count")
            if f.uses("v") or f.uses("tdot"):
                raise ValueError("transition functions must not depend on velocities")

    @property
    def dim(self) -> int:
        return len(self.forward)

    # ------------------------------------------------------------------ derived fields
    @cached_property
    def jacobian(self):
        """J[i][j] = d q'^i / d q^j in unprimed variables."""
        return tuple(tuple(f.partial(Q(j)) for j in range(self.dim)) for f in self.forward)

    @cached_property
    def inverse_jacobian(self):
        """d q^i / d q'^j in primed variables."""
        return tuple(tuple(f.partial(Q(j)) for j in range(self.dim)) for f in self.inverse)

    @cached_property
    def velocity_forward(self):
        """q'^i_t = d_t q'^i = dt q'^i + v^j dj q'^i (unprimed variables)."""
        x = Vars(self.dim)
        return tuple(_total_dt(f, x.v) for f in self.forward)

    @cached_property
    def velocity_inverse(self):
        x = Vars(self.dim)
        return tuple(_total_dt(f, x.v) for f in self.inverse)

    @cached_property
    def tangent_velocity_forward(self):
        """xdot'^i = dt q'^i xdot^0 + dj q'^i xdot^j."""
        x = Vars(self.dim)
        return tuple(_tangent_push(f, x) for f in self.forward)

    @cached_property
    def tangent_velocity_inverse(self):
        x = Vars(self.dim)
        return tuple(_tangent_push(f, x) for f in self.inverse)

    def inverted(self) -> "ChartTransform":
        return ChartTransform(self.inverse, self.forward, -self.time_shift,
                              name=f"inverse({self.name})" if self.name else "")

    # ------------------------------------------------------------------ re-expression
    def _to_primed_map(self, tangent=False):
        x = Vars(self.dim)
        mp = {T: x.t - self.time_shift}
        vel = self.tangent_velocity_inverse if tangent else self.velocity_inverse
        for j in range(self.dim):
            mp[Q(j)] = self.inverse[j]
            mp[V(j)] = vel[j]
        return mp

    def _from_primed_map(self, tangent=False):
        x = Vars(self.dim)
        mp = {T: x.t + self.time_shift}
        vel = self.tangent_velocity_forward if tangent else self.velocity_forward
        for j in range(self.dim):
            mp[Q(j)] = self.forward[j]
            mp[V(j)] = vel[j]
        return mp

    def to_primed(self, f: ScalarField, *, tangent: bool = False) -> ScalarField:
        """Re-express a field given in unprimed variables in the primed chart.

        With ``tangent=True`` the velocity symbols are read as tangent-vector
        components (v0, v1..vm) and transformed accordingly.
        """
        return f.subs(self._to_primed_map(tangent))

    def from_primed(self, f: ScalarField, *, tangent: bool = False) -> ScalarField:
        return f.subs(self._from_primed_map(tangent))

    # ------------------------------------------------------------------ points
    def check_jacobian(self, X, tol: float = 1e-12) -> None:
        J = evaluate_fields([c for row in self.jacobian for c in row], X)
        m = self.dim
        dets = np.linalg.det(J.T.reshape(-1, m, m))
        if np.any(np.abs(dets) <= tol):
            raise SingularJacobian(f"|det J| <= {tol} at a sampled point")

    def pushforward_jet(self, p: JetPoint) -> JetPoint:
        """(t, q, v) -> (t + c, q'(t, q), d_t q')."""
        if p.dim != self.dim:
            raise DimensionMismatch("point dimension differs from chart")
        X = p.row()[None, :]
        self.check_jacobian(X)
        vals = evaluate_fields([*self.forward, *self.velocity_forward], X)[:, 0]
        m = self.dim
        return JetPoint(p.t + self.time_shift, vals[:m], vals[m:])

    def pushforward_jets(self, X) -> np.ndarray:
        """Vectorised jet push-forward of the rows of a sample matrix."""
        self.check_jacobian(X)
        vals = evaluate_fields([*self.forward, *self.velocity_forward], X)
        m = self.dim
        return jet_matrix(X[:, 0] + self.time_shift, vals[:m].T, vals[m:].T)

    def pushforward_tangent(self, p: TangentPoint) -> TangentPoint:
        X = p.row()[None, :]
        self.check_jacobian(X)
        vals = evaluate_fields([*self.forward, *self.tangent_velocity_forward], X)[:, 0]
        m = self.dim
        return TangentPoint((p.x[0] + self.time_shift, *vals[:m]), (p.xdot[0], *vals[m:]))

    def round_trip_error(self, X) -> float:
        """max |inverse(forward(p)) - p| over jet sample rows (q and v parts)."""
        Y = self.pushforward_jets(X)
        Z = self.inverted().pushforward_jets(Y)
        m = self.dim
        return float(np.max(np.abs(Z[:, : 1 + 2 * m] - X[:, : 1 + 2 * m])))


def _total_dt(f: ScalarField, v) -> ScalarField:
    out = f.partial(T)
    for j, vj in enumerate(v):
        out = out + vj * f.partial(Q(j))
    return out


def _tangent_push(f: ScalarField, x: Vars) -> ScalarField:
    out = f.partial(T) * x.tdot
    for j in range(f.dim):
        out = out + f.partial(Q(j)) * x.v[j]
    return out


# ---------------------------------------------------------------------- stock charts


def identity_chart(m: int) -> ChartTransform:
    x = Vars(m)
    return ChartTransform(x.q, x.q, name="identity")


def galilean_boost(u: Sequence[float], offset: Sequence[float] | None = None) -> ChartTransform:
    """q' = q - u t - offset."""
    m = len(u)
    x = Vars(m)
    off = offset or [0.0] * m
    fwd = tuple(x.q[i] - u[i] * x.t - off[i] for i in range(m))
    inv = tuple(x.q[i] + u[i] * x.t + off[i] for i in range(m))
    return ChartTransform(fwd, inv, name=f"boost{tuple(u)}")


def rotating_chart(omega: float = 1.0, phase: float = 0.0) -> ChartTransform:
    """Coordinates of a plane frame rotating by angle omega*t + phase (m = 2)."""
    x = Vars(2)
    th = omega * x.t + phase
    c, s = cos(th), sin(th)
    q1, q2 = x.q
    fwd = (c * q1 + s * q2, -s * q1 + c * q2)
    inv = (c * q1 - s * q2, s * q1 + c * q2)
    return ChartTransform(fwd, inv, name=f"rotation(omega={omega})")


def linear_chart(A, b=None, velocity=None) -> ChartTransform:
    """q' = A q + b + velocity*t with constant invertible A."""
    A = np.asarray(A, float)
    m = A.shape[0]
    Ainv = np.linalg.inv(A)
    b = np.zeros(m) if b is None else np.asarray(b, float)
    w = np.zeros(m) if velocity is None else np.asarray(velocity, float)
    x = Vars(m)

    def affine(M, shift):
        out = []
        for i in range(m):
            e = shift[i]
            for j in range(m):
                e = e + float(M[i, j]) * x.q[j]
            out.append(e)
        return out

    fwd = [e + float(w[i]) * x.t for i, e in enumerate(affine(A, b))]
    # q = A^-1 (q' - b - w t)
    shifted = [x.q[i] - float(b[i]) - float(w[i]) * x.t for i in range(m)]
    inv = []
    for i in range(m):
        e = x.zero
        for j in range(m):
            e = e + float(Ainv[i, j]) * shifted[j]
        inv.append(e)
    return ChartTransform(tuple(fwd), tuple(inv), name="linear")


def chart_from_text(forward: Sequence[str], inverse: Sequence[str], time_shift: float = 0.0,
                    name: str = "") -> ChartTransform:
    m = len(forward)
    return ChartTransform(tuple(parse_field(s, m) for s in forward),
                          tuple(parse_field(s, m) for s in inverse), float(time_shift), name=name)
