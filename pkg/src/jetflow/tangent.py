"""Connections on the tangent bundle TQ -> Q and their dictionary with dynamic equations.

Tangent-bundle fields reuse the jet symbols: x^0 = t, x^k = q^k, xdot^k = v^k,
with the extra slot ``v0`` = xdot^0.  A :class:`TangentConnection` stores
K[mu][lam] = K^mu_lam(x, xdot); a :class:`LinearTangentConnection` stores
coeffs[mu][alpha][nu] = K_mu^alpha_nu(x), so that K^alpha_mu = K_mu^alpha_nu xdot^nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


from .charts import ChartTransform
from .errors import DimensionMismatch
from .expr import TDOT, ScalarField, Vars, const, xdotsym, xsym
from .jet import DynamicConnection, DynamicEquation, NotQuadratic, QuadraticSODE, \
    affine_part, as_quadratic
from .parser import parse_field
from .sampling import DEFAULT_SAMPLES, DEFAULT_SEED, domain_samples, field_residual, max_abs

FLATNESS_TOL = 1e-8
FLATNESS_SAMPLES = 500
TRIVIAL_TOL = 1e-12


def tangent_samples(fields, m, samples=None, n=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    if samples is not None:
        return samples
    return domain_samples(list(fields), m, n, seed, tangent=True)


def _check(fields, m):
    for f in fields:
        if f.dim != m:
            raise DimensionMismatch(f"component has dim {f.dim}, expected {m}")


def _on_jet(m: int) -> dict:
    return {TDOT: const(1.0, m)}


@dataclass(frozen=True, eq=False)
class TangentConnection:
    K: tuple

    def __post_init__(self):
        K = tuple(tuple(r) for r in self.K)
        object.__setattr__(self, "K", K)
        n = len(K)
        if n < 2 or any(len(r) != n for r in K):
            raise DimensionMismatch("K must be (m+1) x (m+1) with m >= 1")
        _check([f for r in K for f in r], n - 1)

    @property
    def dim(self) -> int:
        return len(self.K) - 1

    @classmethod
    def zero(cls, m: int) -> "TangentConnection":
        return cls(tuple((const(0.0, m),) * (m + 1) for _ in range(m + 1)))

    @classmethod
    def from_text(cls, rows: Sequence[Sequence[str]]) -> "TangentConnection":
        m = len(rows) - 1
        return cls(tuple(tuple(parse_field(e, m, tangent=True) for e in r) for r in rows))

    def fields(self) -> list:
        return [f for r in self.K for f in r]

    def temporal_defect(self, samples=None) -> float:
        X = tangent_samples(self.K[0], self.dim, samples)
        return max_abs(self.K[0], X)

    def is_temporally_trivial(self, samples=None, tol: float = TRIVIAL_TOL) -> bool:
        return all(f.is_zero for f in self.K[0]) or self.temporal_defect(samples) < tol

    def restrict(self) -> DynamicConnection:
        """gamma^i_mu = K^i_mu o lambda (xdot^0 = 1, xdot^j = v^j)."""
        sub = _on_jet(self.dim)
        return DynamicConnection(tuple(tuple(f.subs(sub) for f in r) for r in self.K[1:]))

    def __add__(self, other: "TangentConnection") -> "TangentConnection":
        return TangentConnection(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.K, other.K)))


@dataclass(frozen=True, eq=False)
class LinearTangentConnection:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(tuple(tuple(r) for r in p) for p in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        n = len(c)
        if n < 2 or any(len(p) != n or any(len(r) != n for r in p) for p in c):
            raise DimensionMismatch("coefficients must be (m+1)^3")
        flat = [f for p in c for r in p for f in r]
        _check(flat, n - 1)
        if any(f.uses("v") or f.uses("tdot") for f in flat):
            raise ValueError("linear connection coefficients must be velocity-free")

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    def fields(self) -> list:
        return [f for p in self.coeffs for r in p for f in r]

    def symmetry_defect(self, samples=None) -> float:
        n = self.dim + 1
        c = self.coeffs
        diffs = [c[mu][a][nu] - c[nu][a][mu] for a in range(n) for mu in range(n) for nu in range(mu + 1, n)]
        X = tangent_samples(self.fields(), self.dim, samples)
        return max_abs(diffs, X)

    def is_symmetric(self, samples=None, tol: float = 1e-9) -> bool:
        return self.symmetry_defect(samples) < tol

    def to_tangent(self) -> TangentConnection:
        n = self.dim + 1
        x = Vars(self.dim)
        K = []
        for a in range(n):
            row = []
            for mu in range(n):
                e = const(0.0, self.dim)
                for nu in range(n):
                    cf = self.coeffs[mu][a][nu]
                    if not cf.is_zero:
                        e = e + cf * x.xdot(nu)
                row.append(e)
            K.append(tuple(row))
        return TangentConnection(tuple(K))


@dataclass(frozen=True, eq=False)
class SolderingPatch:
    """Local functions h[i][lam] = h^i_lam(x), i = 1..m."""

    h: tuple

    def __post_init__(self):
        h = tuple(tuple(r) for r in self.h)
        object.__setattr__(self, "h", h)
        m = len(h)
        if m == 0 or any(len(r) != m + 1 for r in h):
            raise DimensionMismatch("h must be m x (m+1)")
        _check([f for r in h for f in r], m)

    @property
    def dim(self) -> int:
        return len(self.h)


@dataclass(frozen=True, eq=False)
class ManifoldSODE:
    """xddot^lam = Xi^lam(x, xdot) on an n = m + 1 dimensional manifold."""

    Xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "Xi", tuple(self.Xi))
        if len(self.Xi) < 2:
            raise DimensionMismatch("manifold SODEs are stored with n >= 2 (x^0 plus m >= 1)")
        _check(self.Xi, len(self.Xi) - 1)

    @property
    def n(self) -> int:
        return len(self.Xi)

    @property
    def dim(self) -> int:
        return len(self.Xi) - 1

    @classmethod
    def from_text(cls, exprs: Sequence[str]) -> "ManifoldSODE":
        m = len(exprs) - 1
        return cls(tuple(parse_field(e, m, tangent=True) for e in exprs))

    def restrict(self) -> DynamicEquation:
        sub = _on_jet(self.dim)
        return DynamicEquation(tuple(f.subs(sub) for f in self.Xi[1:]))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """R[lam][mu][alpha][nu] = R_{lam mu}^alpha_nu(x)."""

    R: tuple
    dim: int

    def fields(self) -> list:
        return [f for a in self.R for b in a for c in b for f in c]

    def max_abs(self, samples=None) -> float:
        n = self.dim + 1
        upper = [self.R[l][u][a][v] for l in range(n) for u in range(l + 1, n) for a in range(n) for v in range(n)]
        X = samples if samples is not None else domain_samples(upper, self.dim, FLATNESS_SAMPLES)
        return max_abs(upper, X)

    def antisymmetry_defect(self, samples) -> float:
        n = self.dim + 1
        diffs = [self.R[l][u][a][v] + self.R[u][l][a][v] for l in range(n) for u in range(n)
                 for a in range(n) for v in range(n)]
        return max_abs(diffs, samples)


@dataclass(frozen=True)
class FreeMotionReport:
    quadratic: bool
    flat: bool
    max_curvature: float
    max_third_derivative: float = 0.0

    @property
    def candidate(self) -> bool:
        return self.quadratic and self.flat

    def verdict(self) -> str:
        if not self.quadratic:
            return "quadratic: no, flat: n/a, maxR: n/a"
        f = "yes" if self.flat else "no"
        return f"quadratic: yes, flat: {f}, maxR: {float(f'{self.max_curvature:.6g}')!r}"


# ---------------------------------------------------------------------------
# operations


def lift_to_tangent(g: DynamicConnection, mode: str = "substitution", samples=None) -> TangentConnection:
    """A temporally trivial K with K^i_mu o lambda = gamma^i_mu.

    ``substitution`` reads gamma^i_mu(t, q, v) directly as K^i_mu(x, xdot),
    ignoring xdot^0; ``linear`` reads the affine coefficients as a linear
    connection and raises NotAffine for non-affine ``g``.
    """
    if mode == "linear":
        return linear_lift(g, samples).to_tangent()
    if mode != "substitution":
        raise ValueError(f"unknown lift mode {mode!r}")
    m = g.dim
    zero_row = (const(0.0, m),) * (m + 1)
    return TangentConnection((zero_row, *g.components))


def linear_lift(g: DynamicConnection, samples=None) -> LinearTangentConnection:
    """K_lam^i_nu = gamma^i_{lam nu}; K_lam^0_nu = 0."""
    aff = affine_part(g, samples)
    m = g.dim
    n = m + 1
    zero = const(0.0, m)
    coeffs = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for lam in range(n):
            for nu in range(n):
                coeffs[lam][1 + i][nu] = aff.coeffs[i][lam][nu]
    return LinearTangentConnection(coeffs)


def geodesic_field(K: TangentConnection) -> ManifoldSODE:
    x = Vars(K.dim)
    out = []
    for row in K.K:
        e = const(0.0, K.dim)
        for lam, k in enumerate(row):
            if not k.is_zero:
                e = e + k * x.xdot(lam)
        out.append(e)
    return ManifoldSODE(tuple(out))


def induced_equation(K: TangentConnection) -> DynamicEquation:
    """Spatial part of the geodesic field on the xdot^0 = 1 slice."""
    return geodesic_field(K).restrict()


def sode_connection_on_manifold(Xi: ManifoldSODE) -> tuple:
    """K^mu_lam = 1/2 d_xdot^lam Xi^mu and the remainder e^mu = Xi^mu - K^mu_lam xdot^lam."""
    n, m = Xi.n, Xi.dim
    x = Vars(m)
    K, e = [], []
    for f in Xi.Xi:
        row = tuple(0.5 * f.partial(xdotsym(lam)) for lam in range(n))
        K.append(row)
        r = f
        for lam in range(n):
            r = r - row[lam] * x.xdot(lam)
        e.append(r)
    return TangentConnection(tuple(K)), tuple(e)


def liouville_defect(Xi: ManifoldSODE, samples=None) -> float:
    """max |([v, Xi] - Xi)^mu| = max |xdot^lam d_xdot^lam Xi^mu - 2 Xi^mu|."""
    m = Xi.dim
    x = Vars(m)
    d = []
    for f in Xi.Xi:
        e = -2.0 * f
        for lam in range(Xi.n):
            e = e + x.xdot(lam) * f.partial(xdotsym(lam))
        d.append(e)
    return max_abs(d, tangent_samples(Xi.Xi, m, samples))


def is_spray(Xi: ManifoldSODE, samples=None, tol: float = 1e-9) -> bool:
    return liouville_defect(Xi, samples) < tol


def quadratic_to_linear(qs: QuadraticSODE) -> LinearTangentConnection:
    m = qs.dim
    n = m + 1
    zero = const(0.0, m)
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(m):
        a = 1 + i
        c[0][a][0] = qs.f[i]
        for j in range(m):
            half_b = 0.5 * qs.b[i][j]
            c[0][a][1 + j] = half_b
            c[1 + j][a][0] = half_b
            for k in range(m):
                c[1 + k][a][1 + j] = qs.a[i][k][j]
    return LinearTangentConnection(c)


def soldering_form(patch: SolderingPatch) -> TangentConnection:
    m = patch.dim
    x = Vars(m)
    rows = [(const(0.0, m),) * (m + 1)]
    for i in range(m):
        h = patch.h[i]
        s0 = h[0] - h[0] * x.tdot
        for k in range(m):
            s0 = s0 - 0.5 * h[1 + k] * x.v[k]
        sk = tuple(h[1 + k] - 0.5 * h[1 + k] * x.tdot for k in range(m))
        rows.append((s0, *sk))
    return TangentConnection(tuple(rows))


def soldering_alternative(L: LinearTangentConnection, patch: SolderingPatch) -> TangentConnection:
    if patch.dim != L.dim:
        raise DimensionMismatch("patch and connection dimensions differ")
    return L.to_tangent() + soldering_form(patch)


def curvature(L: LinearTangentConnection) -> CurvatureTensor:
    n = L.dim + 1
    c = L.coeffs
    zero = const(0.0, L.dim)
    R = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for u in range(l + 1, n):
            for a in range(n):
                for v in range(n):
                    e = c[u][a][v].partial(xsym(l)) - c[l][a][v].partial(xsym(u))
                    for b in range(n):
                        if not (c[l][b][v].is_zero or c[u][a][b].is_zero):
                            e = e + c[l][b][v] * c[u][a][b]
                        if not (c[u][b][v].is_zero or c[l][a][b].is_zero):
                            e = e - c[u][b][v] * c[l][a][b]
                    R[l][u][a][v] = e
                    R[u][l][a][v] = -e
    return CurvatureTensor(tuple(tuple(tuple(tuple(r) for r in p) for p in s) for s in R), L.dim)


def is_free_motion_candidate(xi: DynamicEquation, samples=None, tol: float = FLATNESS_TOL) -> FreeMotionReport:
    """Necessary test for free motion: quadratic, with a curvature-free linear connection."""
    qs = as_quadratic(xi, samples)
    if isinstance(qs, NotQuadratic):
        return FreeMotionReport(False, False, float("nan"), qs.max_third_derivative)
    R = curvature(quadratic_to_linear(qs))
    worst = R.max_abs(samples)
    return FreeMotionReport(True, worst < tol, worst)


def frame_shift(K: TangentConnection, fr) -> TangentConnection:
    """Ktilde^0 = 0, Ktilde^i_lam = K^i_lam - Gamma^i K^0_lam."""
    m = K.dim
    if fr.dim != m:
        raise DimensionMismatch("frame and connection dimensions differ")
    rows = [(const(0.0, m),) * (m + 1)]
    for i in range(m):
        rows.append(tuple(K.K[1 + i][lam] - fr.Gamma[i] * K.K[0][lam] for lam in range(m + 1)))
    return TangentConnection(tuple(rows))


def frame_equation(K: TangentConnection, fr) -> DynamicEquation:
    """Dynamic equation defined by an arbitrary K together with a reference frame."""
    return induced_equation(frame_shift(K, fr))


def lift_fibre_connection(Kbar: Sequence[Sequence[ScalarField]]) -> DynamicConnection:
    """gamma^i_0 = 0, gamma^i_k = Kbar^i_k(q, v) in an adapted chart."""
    m = len(Kbar)
    rows = []
    for r in Kbar:
        if len(r) != m:
            raise DimensionMismatch("fibre connection must be m x m")
        _check(r, m)
        for f in r:
            if f.uses("t") or f.uses("tdot"):
                raise ValueError("fibre connection components must be time-independent")
        rows.append((const(0.0, m), *r))
    return DynamicConnection(tuple(rows))


def transform_tangent_connection(K: TangentConnection, chart: ChartTransform) -> TangentConnection:
    """K'^nu_lam = (d_beta x'^nu K^beta_mu + d_mu xdot'^nu) dx^mu/dx'^lam, in primed variables."""
    m = K.dim
    if chart.dim != m:
        raise DimensionMismatch("chart and connection dimensions differ")
    n = m + 1
    one, zero = const(1.0, m), const(0.0, m)
    # d x'^nu / d x^beta (unprimed) and d x^mu / d x'^lam (primed)
    fwd = [[one if b == 0 else zero for b in range(n)]]
    fwd += [[f.partial(xsym(b)) for b in range(n)] for f in chart.forward]
    inv = [[one if b == 0 else zero for b in range(n)]]
    inv += [[f.partial(xsym(b)) for b in range(n)] for f in chart.inverse]
    xdotp = [zero, *chart.tangent_velocity_forward]
    A = []
    for nu in range(n):
        row = []
        for mu in range(n):
            e = xdotp[nu].partial(xsym(mu))
            for b in range(n):
                if not fwd[nu][b].is_zero:
                    e = e + fwd[nu][b] * K.K[b][mu]
            row.append(chart.to_primed(e, tangent=True))
        A.append(row)
    out = []
    for nu in range(n):
        row = []
        for lam in range(n):
            e = zero
            for mu in range(n):
                if not inv[mu][lam].is_zero:
                    e = e + A[nu][mu] * inv[mu][lam]
            row.append(e)
        out.append(tuple(row))
    return TangentConnection(tuple(out))


def restriction_residual(K: TangentConnection, g: DynamicConnection, samples) -> float:
    """Scaled max |K^i_mu o lambda - gamma^i_mu| on jet samples."""
    return field_residual(K.restrict().fields(), g.fields(), samples)
