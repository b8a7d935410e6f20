"""Dynamic equations on Q -> R and dynamic connections on J^1Q -> Q.

A dynamic equation is q^i_tt = xi^i(t, q, v).  A dynamic connection has
components gamma^i_lam(t, q, v), lam = 0..m (lam = 0 is the time slot); it
induces the dynamic equation xi^i = gamma^i_0 + v^j gamma^i_j, and every
dynamic equation determines the symmetric connection

    gamma^i_0 = xi^i - 1/2 v^j d_vj xi^i,   gamma^i_j = 1/2 d_vj xi^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .charts import ChartTransform
from .errors import DimensionMismatch, NotAffine
from .expr import Q, T, V, Vars, const, evaluate_fields
from .parser import parse_field
from .sampling import DEFAULT_SAMPLES, DEFAULT_SEED, domain_samples, max_abs

QUADRATIC_TOL = 1e-9
SYMMETRY_TOL = 1e-9


def _check_jet_fields(fields, m):
    for f in fields:
        if f.dim != m:
            raise DimensionMismatch(f"component has dim {f.dim}, expected {m}")
        if f.uses("tdot"):
            raise ValueError("jet fields cannot depend on v0")


def samples_for(fields, m, samples=None, seed=DEFAULT_SEED, n=DEFAULT_SAMPLES):
    if samples is not None:
        return samples
    return domain_samples(list(fields), m, n, seed)


@dataclass(frozen=True, eq=False)
class DynamicEquation:
    """q^i_tt = xi^i(t, q, v)."""

    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))
        if not self.xi:
            raise DimensionMismatch("a dynamic equation needs m >= 1 components")
        _check_jet_fields(self.xi, len(self.xi))

    @property
    def dim(self) -> int:
        return len(self.xi)

    @classmethod
    def from_text(cls, exprs: Sequence[str]) -> "DynamicEquation":
        m = len(exprs)
        return cls(tuple(parse_field(e, m) for e in exprs))

    @classmethod
    def zero(cls, m: int) -> "DynamicEquation":
        return cls((const(0.0, m),) * m)

    def evaluate(self, X) -> np.ndarray:
        return evaluate_fields(self.xi, X)

    def __str__(self):
        return "; ".join(f"q{i + 1}_tt = {f}" for i, f in enumerate(self.xi))


@dataclass(frozen=True, eq=False)
class DynamicConnection:
    """Components gamma[i][lam] = gamma^i_lam(t, q, v), lam = 0..m."""

    components: tuple

    def __post_init__(self):
        comps = tuple(tuple(row) for row in self.components)
        object.__setattr__(self, "components", comps)
        m = len(comps)
        if m == 0:
            raise DimensionMismatch("a dynamic connection needs m >= 1")
        for row in comps:
            if len(row) != m + 1:
                raise DimensionMismatch("each row needs m + 1 components")
            _check_jet_fields(row, m)

    @classmethod
    def from_parts(cls, gamma0, gammaj) -> "DynamicConnection":
        return cls(tuple((g0, *gj) for g0, gj in zip(gamma0, gammaj)))

    @classmethod
    def zero(cls, m: int) -> "DynamicConnection":
        return cls(tuple((const(0.0, m),) * (m + 1) for _ in range(m)))

    @classmethod
    def from_text(cls, gamma0: Sequence[str], gammaj: Sequence[Sequence[str]]):
        m = len(gamma0)
        return cls.from_parts([parse_field(e, m) for e in gamma0],
                              [[parse_field(e, m) for e in row] for row in gammaj])

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def gamma0(self) -> tuple:
        return tuple(row[0] for row in self.components)

    @property
    def gammaj(self) -> tuple:
        return tuple(row[1:] for row in self.components)

    def fields(self) -> list:
        return [f for row in self.components for f in row]

    def symmetry_defect(self, samples=None) -> float:
        """max over samples of |d_vj gamma^k_i - d_vi gamma^k_j|."""
        m = self.dim
        diffs = []
        for k in range(m):
            for i in range(m):
                for j in range(i + 1, m):
                    diffs.append(self.components[k][1 + i].partial(V(j))
                                 - self.components[k][1 + j].partial(V(i)))
        if not diffs:
            return 0.0
        X = samples_for(self.fields(), m, samples)
        return max_abs(diffs, X)

    def is_symmetric(self, samples=None, tol: float = SYMMETRY_TOL) -> bool:
        return self.symmetry_defect(samples) < tol


@dataclass(frozen=True, eq=False)
class AffineDynamicConnection:
    """gamma^i_lam = coeffs[i][lam][0] + coeffs[i][lam][j] v^j, coefficients free of v."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(tuple(tuple(r) for r in plane) for plane in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        m = len(c)
        for plane in c:
            if len(plane) != m + 1 or any(len(r) != m + 1 for r in plane):
                raise DimensionMismatch("affine coefficients must be m x (m+1) x (m+1)")
            for r in plane:
                _check_jet_fields(r, m)
                if any(f.uses("v") for f in r):
                    raise ValueError("affine coefficients must be velocity-free")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def to_connection(self) -> DynamicConnection:
        x = Vars(self.dim)
        comps = []
        for plane in self.coeffs:
            row = []
            for lam_row in plane:
                g = lam_row[0]
                for j in range(self.dim):
                    g = g + lam_row[1 + j] * x.v[j]
                row.append(g)
            comps.append(tuple(row))
        return DynamicConnection(tuple(comps))

    def symmetry_defect(self, samples=None) -> float:
        m = self.dim
        diffs = [self.coeffs[i][a][b] - self.coeffs[i][b][a]
                 for i in range(m) for a in range(m + 1) for b in range(a + 1, m + 1)]
        X = samples_for([f for p in self.coeffs for r in p for f in r], m, samples)
        return max_abs(diffs, X)

    def is_symmetric(self, samples=None, tol: float = SYMMETRY_TOL) -> bool:
        return self.symmetry_defect(samples) < tol


def affine_part(g: DynamicConnection, samples=None, tol: float = QUADRATIC_TOL) -> AffineDynamicConnection:
    """Read off gamma^i_{lam mu}; raises NotAffine if some component is not affine in v."""
    m = g.dim
    second = [f.partial(V(j)).partial(V(k)) for f in g.fields()
              for j in range(m) for k in range(j, m)]
    X = samples_for(g.fields(), m, samples)
    worst = max_abs(second, X)
    if worst > tol:
        raise NotAffine(f"second velocity derivative reaches {worst:.3g}")
    zero_v = {V(j): 0.0 for j in range(m)}
    coeffs = []
    for row in g.components:
        plane = []
        for f in row:
            plane.append((f.subs(zero_v), *(f.partial(V(j)).subs(zero_v) for j in range(m))))
        coeffs.append(tuple(plane))
    return AffineDynamicConnection(tuple(coeffs))


@dataclass(frozen=True, eq=False)
class QuadraticSODE:
    """xi^i = a^i_jk v^j v^k + b^i_j v^j + f^i with coefficients in (t, q)."""

    a: tuple
    b: tuple
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(tuple(tuple(r) for r in p) for p in self.a))
        object.__setattr__(self, "b", tuple(tuple(r) for r in self.b))
        object.__setattr__(self, "f", tuple(self.f))
        m = len(self.f)
        for fld in self.fields():
            if fld.dim != m or fld.uses("v") or fld.uses("tdot"):
                raise ValueError("quadratic coefficients must be velocity-free fields of dim m")

    @property
    def dim(self) -> int:
        return len(self.f)

    def fields(self):
        return [*(x for p in self.a for r in p for x in r), *(x for r in self.b for x in r), *self.f]

    def asymmetry(self, samples=None) -> float:
        m = self.dim
        diffs = [self.a[i][j][k] - self.a[i][k][j] for i in range(m) for j in range(m) for k in range(m)]
        X = samples_for(self.fields(), m, samples)
        return max_abs(diffs, X)

    def to_equation(self) -> DynamicEquation:
        m = self.dim
        x = Vars(m)
        xi = []
        for i in range(m):
            e = self.f[i]
            for j in range(m):
                e = e + self.b[i][j] * x.v[j]
                for k in range(m):
                    e = e + self.a[i][j][k] * x.v[j] * x.v[k]
            xi.append(e)
        return DynamicEquation(tuple(xi))


@dataclass(frozen=True)
class NotQuadratic:
    """Value returned by :func:`as_quadratic` for non-quadratic equations."""

    max_third_derivative: float

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# operations


def sode_from_connection(g: DynamicConnection) -> DynamicEquation:
    x = Vars(g.dim)
    xi = []
    for row in g.components:
        e = row[0]
        for j in range(g.dim):
            e = e + x.v[j] * row[1 + j]
        xi.append(e)
    return DynamicEquation(tuple(xi))


def connection_from_sode(xi: DynamicEquation) -> DynamicConnection:
    m = xi.dim
    x = Vars(m)
    comps = []
    for f in xi.xi:
        dv = [0.5 * f.partial(V(j)) for j in range(m)]
        g0 = f
        for j in range(m):
            g0 = g0 - x.v[j] * dv[j]
        comps.append((g0, *dv))
    return DynamicConnection(tuple(comps))


def resymmetrize(g: DynamicConnection) -> DynamicConnection:
    """The connection of the dynamic equation induced by ``g``; identity on symmetric ``g``."""
    m = g.dim
    x = Vars(m)
    xi = sode_from_connection(g).xi
    comps = []
    for k, row in enumerate(g.components):
        gi = []
        for i in range(m):
            e = row[1 + i] + row[0].partial(V(i))
            for j in range(m):
                e = e + x.v[j] * row[1 + j].partial(V(i))
            gi.append(0.5 * e)
        g0 = xi[k]
        for i in range(m):
            g0 = g0 - x.v[i] * gi[i]
        comps.append((g0, *gi))
    return DynamicConnection(tuple(comps))


def transform_sode(xi: DynamicEquation, chart: ChartTransform, samples=None) -> DynamicEquation:
    """Express the dynamic equation in the primed chart.

    xi'^i = (xi^j dj + v^j v^k dj dk + 2 v^j dj dt + dt^2) q'^i, re-expressed
    through the inverse chart.
    """
    m = xi.dim
    if chart.dim != m:
        raise DimensionMismatch("chart and equation dimensions differ")
    x = Vars(m)
    chart.check_jacobian(samples_for(xi.xi, m, samples))
    out = []
    for qp in chart.forward:
        dq = [qp.partial(Q(j)) for j in range(m)]
        e = qp.partial(T).partial(T)
        for j in range(m):
            e = e + xi.xi[j] * dq[j] + 2.0 * x.v[j] * dq[j].partial(T)
            for k in range(m):
                e = e + x.v[j] * x.v[k] * dq[j].partial(Q(k))
        out.append(chart.to_primed(e))
    return DynamicEquation(tuple(out))


def transform_connection(g: DynamicConnection, chart: ChartTransform, samples=None) -> DynamicConnection:
    """gamma'^i_lam = (dj q'^i gamma^j_mu + d_mu q'^i_t) dq^mu/dq'^lam."""
    m = g.dim
    if chart.dim != m:
        raise DimensionMismatch("chart and connection dimensions differ")
    chart.check_jacobian(samples_for(g.fields(), m, samples))
    J = chart.jacobian
    A = []
    for i in range(m):
        row = []
        for mu in range(m + 1):
            sym = T if mu == 0 else Q(mu - 1)
            e = chart.velocity_forward[i].partial(sym)
            for j in range(m):
                e = e + J[i][j] * g.components[j][mu]
            row.append(chart.to_primed(e))
        A.append(row)
    # dq^mu / dq'^lam in primed variables; mu = 0 is time
    Jinv = [[const(1.0 if lam == 0 else 0.0, m) for lam in range(m + 1)]]
    for j in range(m):
        inv = chart.inverse[j]
        Jinv.append([inv.partial(T)] + [inv.partial(Q(k)) for k in range(m)])
    comps = []
    for i in range(m):
        row = []
        for lam in range(m + 1):
            e = const(0.0, m)
            for mu in range(m + 1):
                if Jinv[mu][lam].is_zero:
                    continue
                e = e + A[i][mu] * Jinv[mu][lam]
            row.append(e)
        comps.append(tuple(row))
    return DynamicConnection(tuple(comps))


def as_quadratic(xi: DynamicEquation, samples=None, tol: float = QUADRATIC_TOL):
    """Split a quadratic dynamic equation into (a, b, f), or return :class:`NotQuadratic`."""
    m = xi.dim
    X = samples_for(xi.xi, m, samples)
    third = [f.partial(V(j)).partial(V(k)).partial(V(l)) for f in xi.xi
             for j in range(m) for k in range(j, m) for l in range(k, m)]
    worst = max_abs(third, X)
    if worst > tol:
        return NotQuadratic(worst)
    zero_v = {V(j): 0.0 for j in range(m)}
    a = tuple(tuple(tuple((0.5 * f.partial(V(j)).partial(V(k))).subs(zero_v) for k in range(m))
                    for j in range(m)) for f in xi.xi)
    b = tuple(tuple(f.partial(V(j)).subs(zero_v) for j in range(m)) for f in xi.xi)
    fv = tuple(f.subs(zero_v) for f in xi.xi)
    return QuadraticSODE(a, b, fv)
