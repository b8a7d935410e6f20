"""Vector fields on J^1Q and the endomorphism route to the connection of a dynamic equation.

Components are ordered on the holonomic frame (d_t, d_1..d_m, d^t_1..d^t_m).
This module rebuilds the symmetric connection of a dynamic equation from Lie
brackets and projectors only, without the closed-form expression used in
:mod:`jetflow.jet`, so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import Q, T, V, ScalarField, Vars, const
from .jet import DynamicConnection, DynamicEquation


def _syms(m):
    return [T, *(Q(i) for i in range(m)), *(V(i) for i in range(m))]


@dataclass(frozen=True, eq=False)
class JetVectorField:
    comps: tuple  # 2m + 1 fields

    @property
    def dim(self) -> int:
        return (len(self.comps) - 1) // 2

    def apply(self, f: ScalarField) -> ScalarField:
        """Directional derivative X(f)."""
        out = const(0.0, f.dim)
        for c, s in zip(self.comps, _syms(self.dim)):
            if c.is_zero:
                continue
            out = out + c * f.partial(s)
        return out

    def __add__(self, other):
        return JetVectorField(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return JetVectorField(tuple(a - b for a, b in zip(self.comps, other.comps)))

    def scale(self, s):
        return JetVectorField(tuple(s * a for a in self.comps))

    @property
    def dt(self):
        return self.comps[0]

    @property
    def dq(self):
        return self.comps[1 : 1 + self.dim]

    @property
    def dv(self):
        return self.comps[1 + self.dim :]


def basis(m: int, slot: int) -> JetVectorField:
    return JetVectorField(tuple(const(1.0 if k == slot else 0.0, m) for k in range(2 * m + 1)))


def bracket(X: JetVectorField, Y: JetVectorField) -> JetVectorField:
    return JetVectorField(tuple(X.apply(b) - Y.apply(a) for a, b in zip(X.comps, Y.comps)))


def vhat(u: JetVectorField) -> JetVectorField:
    """v^(d_t) = -v^i d^t_i, v^(d_i) = d^t_i, v^(d^t_i) = 0 (pointwise linear)."""
    m = u.dim
    x = Vars(m)
    zero = const(0.0, m)
    dv = tuple(u.dq[i] - u.dt * x.v[i] for i in range(m))
    return JetVectorField((zero, *(zero,) * m, *dv))


def holonomic_field(xi: DynamicEquation) -> JetVectorField:
    x = Vars(xi.dim)
    return JetVectorField((x.one, *x.v, *xi.xi))


def I_xi(xi_field: JetVectorField, u: JetVectorField) -> JetVectorField:
    """I(u) = [xi, v^(u)] - v^([xi, u]) for vertical u."""
    return bracket(xi_field, vhat(u)) - vhat(bracket(xi_field, u))


def vhat_oracle(xi: DynamicEquation) -> DynamicConnection:
    """Connection of ``xi`` assembled from J o xi^ with J = (I + Id)/2.

    The connection form is (qdot^i_t - gamma^i_lam qdot^lam) d^t_i, so the
    components are read off as minus the images of d_t and d_j.
    """
    m = xi.dim
    x = Vars(m)
    Xi = holonomic_field(xi)
    # I on the vertical frame; it is C-infinity linear there
    I_cols = [I_xi(Xi, basis(m, 1 + k)) for k in range(2 * m)]

    def J(u: JetVectorField) -> JetVectorField:
        out = u
        comps = list(u.comps[1:])
        acc = None
        for c, col in zip(comps, I_cols):
            if c.is_zero:
                continue
            term = col.scale(c)
            acc = term if acc is None else acc + term
        if acc is not None:
            out = out + acc
        return out.scale(0.5)

    def xi_hat(w: JetVectorField) -> JetVectorField:
        zero = const(0.0, m)
        dq = tuple(w.dq[i] - w.dt * x.v[i] for i in range(m))
        dv = tuple(w.dv[i] - w.dt * xi.xi[i] for i in range(m))
        return JetVectorField((zero, *dq, *dv))

    comps = [[None] * (m + 1) for _ in range(m)]
    for lam in range(m + 1):
        image = J(xi_hat(basis(m, lam)))
        for i in range(m):
            comps[i][lam] = -image.dv[i]
    return DynamicConnection(tuple(tuple(r) for r in comps))
