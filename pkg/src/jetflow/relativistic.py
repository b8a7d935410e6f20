"""Pseudo-metrics from quadratic Lagrangians, the Lagrange equation, and relativization.

Christoffel symbols carry an overall minus sign,

    {_lam mu nu} = -1/2 (d_lam g_mu nu + d_nu g_mu lam - d_mu g_lam nu),

so the Levi-Civita geodesic equation reads xddot^mu = {_lam^mu_nu} xdot^lam xdot^nu.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .charts import ChartTransform
from .errors import ChartNotAdapted, DimensionMismatch, NoHyperboloidPoint, NotQuadraticResidual, \
    SingularMass, SingularMetric
from .expr import JetPoint, TangentPoint, V, ScalarField, Vars, const, evaluate_fields, xsym
from .frames import ReferenceFrame
from .integrate import IntegratorConfig, Trajectory, compare_trajectories, integrate_geodesic, \
    integrate_sode
from .jet import DynamicEquation, QuadraticSODE, samples_for
from .parser import parse_field
from .sampling import DEFAULT_SAMPLES, DEFAULT_SEED, Box, max_abs, sample_points
from .tangent import LinearTangentConnection, TangentConnection, geodesic_field

DET_TOL = 1e-10
LORENTZ_TOL = 1e-9
ADAPTED_TOL = 1e-12


class DegenerateMetric(UserWarning):
    """The metric determinant vanishes at some sampled points."""


# ---------------------------------------------------------------------------
# small symbolic linear algebra


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    out = const(0.0, M[0][0].dim)
    for j in range(n):
        if M[0][j].is_zero:
            continue
        term = M[0][j] * _det([row[:j] + row[j + 1 :] for row in M[1:]])
        out = out + term if j % 2 == 0 else out - term
    return out


def symbolic_inverse(M):
    """(adjugate / det, det) for a small square matrix of fields."""
    n = len(M)
    M = [list(r) for r in M]
    det = _det(M)
    if n == 1:
        return [[1.0 / det]], det
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1 :] for k, row in enumerate(M) if k != j]
            c = _det(minor)
            inv[i][j] = (c if (i + j) % 2 == 0 else -c) / det
    return inv, det


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class PseudoMetric:
    """g[lam][mu] = g_{lam mu}(x), lam, mu = 0..m."""

    g: tuple
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = tuple(tuple(r) for r in self.g)
        object.__setattr__(self, "g", g)
        n = len(g)
        if n < 2 or any(len(r) != n for r in g):
            raise DimensionMismatch("metric must be (m+1) x (m+1) with m >= 1")
        for r in g:
            for f in r:
                if f.dim != n - 1:
                    raise DimensionMismatch("metric component dimension mismatch")
                if f.uses("v") or f.uses("tdot"):
                    raise ValueError("metric components must be velocity-free")

    @property
    def dim(self) -> int:
        return len(self.g) - 1

    @classmethod
    def from_text(cls, rows: Sequence[Sequence[str]]) -> "PseudoMetric":
        m = len(rows) - 1
        return cls(tuple(tuple(parse_field(e, m) for e in r) for r in rows))

    @classmethod
    def minkowski(cls, m: int) -> "PseudoMetric":
        return cls(tuple(tuple(const((1.0 if a == 0 else -1.0) if a == b else 0.0, m)
                               for b in range(m + 1)) for a in range(m + 1)))

    def fields(self) -> list:
        return [f for r in self.g for f in r]

    def symmetry_defect(self, samples=None) -> float:
        n = self.dim + 1
        d = [self.g[a][b] - self.g[b][a] for a in range(n) for b in range(a + 1, n)]
        return max_abs(d, samples_for(self.fields(), self.dim, samples)) if d else 0.0

    @cached_property
    def _inverse_and_det(self):
        inv, det = symbolic_inverse([list(r) for r in self.g])
        return tuple(tuple(r) for r in inv), det

    @property
    def determinant(self) -> ScalarField:
        return self._inverse_and_det[1]

    @property
    def inverse(self):
        return self._inverse_and_det[0]

    def check_nondegenerate(self, samples, tol: float = DET_TOL) -> None:
        d = evaluate_fields([self.determinant], samples)[0]
        if np.any(np.abs(d) <= tol):
            raise SingularMetric(f"|det g| <= {tol} at a sampled point")

    def degenerate_fraction(self, samples, tol: float = DET_TOL) -> float:
        d = evaluate_fields([self.determinant], samples)[0]
        return float(np.mean(np.abs(d) <= tol))

    def is_adapted(self, samples=None, tol: float = ADAPTED_TOL) -> bool:
        g0i = list(self.g[0][1:])
        return max_abs(g0i, samples_for(self.fields(), self.dim, samples)) < tol

    def norm(self) -> ScalarField:
        """g_{lam mu} xdot^lam xdot^mu as a tangent field."""
        x = Vars(self.dim)
        n = self.dim + 1
        e = const(0.0, self.dim)
        for a in range(n):
            for b in range(n):
                if not self.g[a][b].is_zero:
                    e = e + self.g[a][b] * x.xdot(a) * x.xdot(b)
        return e


@dataclass(frozen=True, eq=False)
class QuadraticLagrangian:
    """L = 1/2 m_ij v^i v^j + k_i v^i + f, coefficients in (t, q)."""

    mass: tuple
    k: tuple
    f: ScalarField

    def __post_init__(self):
        object.__setattr__(self, "mass", tuple(tuple(r) for r in self.mass))
        object.__setattr__(self, "k", tuple(self.k))
        m = len(self.k)
        if len(self.mass) != m or any(len(r) != m for r in self.mass):
            raise DimensionMismatch("mass tensor must be m x m")
        for x in self.fields():
            if x.dim != m or x.uses("v") or x.uses("tdot"):
                raise ValueError("Lagrangian coefficients must be velocity-free fields of dim m")

    @property
    def dim(self) -> int:
        return len(self.k)

    def fields(self) -> list:
        return [*(x for r in self.mass for x in r), *self.k, self.f]

    @classmethod
    def from_text(cls, mass, k, f) -> "QuadraticLagrangian":
        m = len(k)
        return cls(tuple(tuple(parse_field(e, m) for e in r) for r in mass),
                   tuple(parse_field(e, m) for e in k), parse_field(f, m))

    @classmethod
    def from_field(cls, L: ScalarField) -> "QuadraticLagrangian":
        """Read m, k, f off a Lagrangian field that is quadratic in v."""
        m = L.dim
        zero_v = {V(j): 0.0 for j in range(m)}
        mass = tuple(tuple(L.partial(V(i)).partial(V(j)).subs(zero_v) for j in range(m)) for i in range(m))
        k = tuple(L.partial(V(i)).subs(zero_v) for i in range(m))
        return cls(mass, k, L.subs(zero_v))

    def as_field(self) -> ScalarField:
        x = Vars(self.dim)
        e = self.f
        for i in range(self.dim):
            e = e + self.k[i] * x.v[i]
            for j in range(self.dim):
                e = e + 0.5 * self.mass[i][j] * x.v[i] * x.v[j]
        return e

    def mass_defect(self, samples) -> float:
        """Smallest eigenvalue of m over samples (positive for a Riemannian mass tensor)."""
        m = self.dim
        vals = evaluate_fields([x for r in self.mass for x in r], samples)
        mats = vals.T.reshape(-1, m, m)
        return float(np.min(np.linalg.eigvalsh(0.5 * (mats + mats.transpose(0, 2, 1)))))


@dataclass(frozen=True, eq=False)
class ExternalForce:
    """b[i][mu] = b^i_mu(x): b^i_0 potential part, b^i_k velocity coupling."""

    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(tuple(r) for r in self.b))

    @property
    def dim(self) -> int:
        return len(self.b)

    def fields(self) -> list:
        return [f for r in self.b for f in r]


@dataclass(frozen=True, eq=False)
class RelativisticEquation:
    metric: PseudoMetric
    force: ExternalForce
    sigma: TangentConnection
    K: TangentConnection

    def field(self):
        return geodesic_field(self.K)


@dataclass(frozen=True)
class NotLorentzType:
    max_symmetric_part: float

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# operations


def metric_from_lagrangian(L: QuadraticLagrangian, samples=None) -> PseudoMetric:
    """g_00 = -2f, g_0i = -k_i, g_ij = -m_ij; warns DegenerateMetric where det g vanishes."""
    m = L.dim
    rows = [(-2.0 * L.f, *(-1.0 * k for k in L.k))]
    for i in range(m):
        rows.append((-1.0 * L.k[i], *(-1.0 * L.mass[i][j] for j in range(m))))
    g = PseudoMetric(tuple(rows))
    X = samples_for(L.fields(), m, samples)
    frac = g.degenerate_fraction(X)
    if frac > 0:
        warnings.warn(f"metric determinant vanishes at {frac:.1%} of samples", DegenerateMetric)
        g = PseudoMetric(g.g, degenerate=True)
    return g


def christoffel(g: PseudoMetric) -> tuple:
    """C[lam][mu][nu] = {_lam mu nu}, symmetric in lam and nu."""
    n = g.dim + 1
    d = [[[g.g[a][b].partial(xsym(c)) for c in range(n)] for b in range(n)] for a in range(n)]
    # d[a][b][c] = d_c g_ab
    C = [[[None] * n for _ in range(n)] for _ in range(n)]
    for lam in range(n):
        for mu in range(n):
            for nu in range(lam, n):
                e = -0.5 * (d[mu][nu][lam] + d[mu][lam][nu] - d[lam][nu][mu])
                C[lam][mu][nu] = C[nu][mu][lam] = e
    return tuple(tuple(tuple(r) for r in p) for p in C)


def raised_christoffel(g: PseudoMetric, samples=None) -> tuple:
    """{_lam^mu_nu} = g^{mu beta} {_lam beta nu}; SingularMetric on a degenerate sample."""
    g.check_nondegenerate(samples_for(g.fields(), g.dim, samples))
    C = christoffel(g)
    ginv = g.inverse
    n = g.dim + 1
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for lam in range(n):
        for mu in range(n):
            for nu in range(lam, n):
                e = const(0.0, g.dim)
                for b in range(n):
                    if not (ginv[mu][b].is_zero or C[lam][b][nu].is_zero):
                        e = e + ginv[mu][b] * C[lam][b][nu]
                out[lam][mu][nu] = out[nu][mu][lam] = e
    return tuple(tuple(tuple(r) for r in p) for p in out)


def levi_civita_linear(g: PseudoMetric, samples=None) -> LinearTangentConnection:
    return LinearTangentConnection(raised_christoffel(g, samples))


def levi_civita(g: PseudoMetric, samples=None) -> TangentConnection:
    """K^mu_lam = {_lam^mu_nu} xdot^nu."""
    return levi_civita_linear(g, samples).to_tangent()


def lagrange_sode(L: QuadraticLagrangian, samples=None) -> DynamicEquation:
    """xi^i = -(m^-1)^{ik} {_lam k nu} xdot^lam xdot^nu on xdot^0 = 1."""
    m = L.dim
    X = samples_for(L.fields(), m, samples)
    minv, det = symbolic_inverse([list(r) for r in L.mass])
    if np.any(np.abs(evaluate_fields([det], X)[0]) <= DET_TOL):
        raise SingularMass("mass tensor is singular at a sampled point")
    C = christoffel(_metric_quiet(L))
    x = Vars(m)
    xd = [x.one, *x.v]
    out = []
    for i in range(m):
        e = const(0.0, m)
        for k in range(m):
            if minv[i][k].is_zero:
                continue
            s = const(0.0, m)
            for lam in range(m + 1):
                for nu in range(m + 1):
                    c = C[lam][1 + k][nu]
                    if not c.is_zero:
                        s = s + c * xd[lam] * xd[nu]
            e = e - minv[i][k] * s
        out.append(e)
    return DynamicEquation(tuple(out))


def _metric_quiet(L: QuadraticLagrangian) -> PseudoMetric:
    m = L.dim
    rows = [(-2.0 * L.f, *(-1.0 * k for k in L.k))]
    for i in range(m):
        rows.append((-1.0 * L.k[i], *(-1.0 * L.mass[i][j] for j in range(m))))
    return PseudoMetric(tuple(rows))


def hyperboloid_samples(g: PseudoMetric, n: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                        box: Box = Box()) -> np.ndarray:
    """Tangent samples rescaled onto g(xdot, xdot) = 1; rows where that is impossible are dropped."""
    m = g.dim
    X = sample_points(m, 4 * n, seed, box=box, tangent=True)
    nrm, bad = evaluate_fields([g.norm()], X, guard=True)
    nrm = nrm[0]
    ok = (~bad) & (nrm > 1e-6)
    X = X[ok]
    s = 1.0 / np.sqrt(nrm[ok])
    X[:, 1 + m : 1 + 2 * m] *= s[:, None]
    X[:, -1] *= s
    if len(X) == 0:
        raise NoHyperboloidPoint("no sampled tangent vector admits g(xdot, xdot) = 1")
    return X[:n]


def is_definite(g: PseudoMetric, samples) -> bool:
    n = g.dim + 1
    vals = evaluate_fields(g.fields(), samples).T.reshape(-1, n, n)
    ev = np.linalg.eigvalsh(vals)
    return bool(np.all(ev > 0) or np.all(ev < 0))


def hyperboloid_residual_field(K: TangentConnection, g: PseudoMetric) -> ScalarField:
    """(d_lam g_mu nu xdot^mu + 2 g_mu nu K^mu_lam) xdot^lam xdot^nu."""
    m = g.dim
    n = m + 1
    x = Vars(m)
    e = const(0.0, m)
    for lam in range(n):
        for mu in range(n):
            for nu in range(n):
                d = g.g[mu][nu].partial(xsym(lam))
                if not d.is_zero:
                    e = e + d * x.xdot(mu) * x.xdot(lam) * x.xdot(nu)
                if not (g.g[mu][nu].is_zero or K.K[mu][lam].is_zero):
                    e = e + 2.0 * g.g[mu][nu] * K.K[mu][lam] * x.xdot(lam) * x.xdot(nu)
    return e


def hyperboloid_check(K: TangentConnection, g: PseudoMetric, samples=None) -> float:
    """Max violation of the hyperboloid condition over points of W_g.

    ``samples`` are tangent rows; they are rescaled onto W_g.  Returns nan
    for definite (Riemannian) metrics, where the check is not applied.
    """
    if samples is None:
        X = hyperboloid_samples(g)
    else:
        X = _rescale(g, samples)
    if is_definite(g, X):
        return float("nan")
    return float(np.max(np.abs(evaluate_fields([hyperboloid_residual_field(K, g)], X)[0])))


def _rescale(g, samples):
    m = g.dim
    X = np.array(samples, float)
    nrm = evaluate_fields([g.norm()], X)[0]
    ok = nrm > 1e-6
    if not np.any(ok):
        raise NoHyperboloidPoint("no sampled tangent vector admits g(xdot, xdot) = 1")
    X = X[ok]
    s = 1.0 / np.sqrt(nrm[ok])
    X[:, 1 + m : 1 + 2 * m] *= s[:, None]
    X[:, -1] *= s
    return X


def lorentz_condition(g: PseudoMetric, b: Sequence[Sequence[ScalarField]]) -> list:
    """Symmetric part of the lowered coupling, 1/2 (g_ik b^i_j + g_ij b^i_k), for j <= k."""
    m = g.dim
    lowered = [[sum((g.g[1 + i][1 + k] * b[i][1 + j] for i in range(m)), const(0.0, m))
                for j in range(m)] for k in range(m)]
    return [0.5 * (lowered[k][j] + lowered[j][k]) for j in range(m) for k in range(j, m)]


def extract_force(qs: QuadraticSODE, g: PseudoMetric, samples=None) -> ExternalForce:
    """b^i_mu from the residual of xi after removing the Christoffel part."""
    m = g.dim
    xi = qs.to_equation()
    X = samples_for([*qs.fields(), *g.fields()], m, samples)
    LC = raised_christoffel(g, X)
    x = Vars(m)
    xd = [x.one, *x.v]
    resid = []
    for i in range(m):
        e = xi.xi[i]
        for lam in range(m + 1):
            for nu in range(m + 1):
                c = LC[lam][1 + i][nu]
                if not c.is_zero:
                    e = e - c * xd[lam] * xd[nu]
        resid.append(e)
    second = [r.partial(V(j)).partial(V(k)) for r in resid for j in range(m) for k in range(j, m)]
    worst = max_abs(second, X)
    if worst > LORENTZ_TOL:
        raise NotQuadraticResidual(f"force residual is not velocity-affine ({worst:.3g})")
    zero_v = {V(j): 0.0 for j in range(m)}
    b = tuple((r.subs(zero_v), *(r.partial(V(k)).subs(zero_v) for k in range(m))) for r in resid)
    return ExternalForce(b)


def relativize(qs: QuadraticSODE, g: PseudoMetric, samples=None, tol: float = LORENTZ_TOL):
    """Relativistic equation for a quadratic dynamic equation, or NotLorentzType.

    sigma^0_0 = 0, sigma^0_k = -g^00 g_kj b^j_0, sigma^j_0 = b^j_0, sigma^j_k = b^j_k.
    """
    m = g.dim
    if qs.dim != m:
        raise DimensionMismatch("equation and metric dimensions differ")
    X = samples_for([*qs.fields(), *g.fields()], m, samples)
    if not g.is_adapted(X):
        raise ChartNotAdapted("relativize needs a chart with g_0i = 0")
    force = extract_force(qs, g, X)
    b = force.b
    sym = lorentz_condition(g, b)
    worst = max_abs(sym, X) if sym else 0.0
    if worst > tol:
        return NotLorentzType(worst)
    g00inv = g.inverse[0][0]
    zero = const(0.0, m)
    rows = [(zero, *(sum((-1.0 * g00inv * g.g[1 + k][1 + j] * b[j][0] for j in range(m)), zero)
                     for k in range(m)))]
    for j in range(m):
        rows.append((b[j][0], *b[j][1:]))
    sigma = TangentConnection(tuple(rows))
    K = levi_civita(g, X) + sigma
    return RelativisticEquation(g, force, sigma, K)


# ---------------------------------------------------------------------------
# frame form and the non-relativistic limit


def transform_lagrangian(L: QuadraticLagrangian, chart: ChartTransform) -> QuadraticLagrangian:
    """L'(t', q', v') = L(t, q(q'), v(q', v')), read back as m', k', f'."""
    return QuadraticLagrangian.from_field(chart.to_primed(L.as_field()))


def frame_form(L: QuadraticLagrangian) -> tuple:
    """Complete the square: L = 1/2 m (v - Gamma)(v - Gamma) + f'.

    Returns (Gamma, f') with Gamma = -m^-1 k and f' = f - 1/2 k m^-1 k.
    """
    m = L.dim
    minv, _ = symbolic_inverse([list(r) for r in L.mass])
    Gamma = tuple(sum((-1.0 * minv[i][j] * L.k[j] for j in range(m)), const(0.0, m)) for i in range(m))
    fp = L.f
    for i in range(m):
        for j in range(m):
            fp = fp - 0.5 * L.k[i] * minv[i][j] * L.k[j]
    return ReferenceFrame(Gamma), fp


def frame_form_metric(L: QuadraticLagrangian, chart: ChartTransform) -> PseudoMetric:
    """Metric in a chart adapted to the frame of L (g_0i = 0 there)."""
    return _metric_quiet(transform_lagrangian(L, chart))


def nonrelativistic_equation(g: PseudoMetric) -> DynamicEquation:
    """Lagrange equation of m_ij = -g_ij, k = 0, f' = -g_00 / 2."""
    m = g.dim
    mass = tuple(tuple(-1.0 * g.g[1 + i][1 + j] for j in range(m)) for i in range(m))
    L = QuadraticLagrangian(mass, (const(0.0, m),) * m, -0.5 * g.g[0][0])
    return lagrange_sode(L)


@dataclass(frozen=True)
class LimitReport:
    v_scale: float
    max_position_error: float
    max_nonrel_amplitude: float

    @property
    def relative_error(self) -> float:
        return self.max_position_error / max(self.max_nonrel_amplitude, 1e-300)


def coordinate_time_trajectory(geo: Trajectory, m: int) -> Trajectory:
    """Reparametrise a geodesic by t = x^0: states (q, dq/dt), chain-rule derivatives."""
    n = m + 1
    x, xd = geo.states[:, :n], geo.states[:, n:]
    xdd = geo.derivs[:, n:]
    t = x[:, 0]
    v = xd[:, 1:] / xd[:, :1]
    a = (xdd[:, 1:] - v * xdd[:, :1]) / xd[:, :1] ** 2
    return Trajectory(t, np.hstack([x[:, 1:], v]), np.hstack([v, a]), {"name": "coordinate-time"})


def nonrel_limit_compare(g: PseudoMetric, v_scale: float, direction: Sequence[float] | None = None,
                         q0: Sequence[float] | None = None, window: float = 2 * np.pi,
                         cfg: IntegratorConfig | None = None) -> LimitReport:
    """Integrate the Levi-Civita geodesic and the non-relativistic Lagrange equation from matched data."""
    m = g.dim
    if not g.is_adapted():
        raise ChartNotAdapted("the limit comparison needs g_0i = 0")
    u = np.ones(m) / np.sqrt(m) if direction is None else np.asarray(direction, float)
    q0 = np.zeros(m) if q0 is None else np.asarray(q0, float)
    vel = v_scale * u
    cfg = cfg or IntegratorConfig(abs_tol=1e-12, rel_tol=1e-12)
    cfg = IntegratorConfig(cfg.method, cfg.abs_tol, cfg.rel_tol, window, cfg.step, cfg.max_step)
    nr = integrate_sode(nonrelativistic_equation(g), JetPoint(0.0, q0, vel), cfg)
    # xdot^0 normalises g(xdot, xdot) = 1 with spatial part xdot^0 * vel
    row = np.array([[0.0, *q0, *vel, 1.0]])
    nrm = evaluate_fields([g.norm()], row)[0, 0]
    if nrm <= 0:
        raise NoHyperboloidPoint("initial velocity is not timelike")
    tdot = 1.0 / np.sqrt(nrm)
    K = levi_civita(g)
    geo_cfg = IntegratorConfig(cfg.method, cfg.abs_tol, cfg.rel_tol, 10.0 * window / tdot + window,
                               cfg.step, cfg.max_step)
    geo = integrate_geodesic(K, TangentPoint((0.0, *q0), (tdot, *(tdot * vel))), geo_cfg,
                             stop=lambda s, y: y[0] >= window)
    rel = coordinate_time_trajectory(geo, m)
    err = compare_trajectories(nr, rel, list(range(m)))
    amp = float(np.max(np.abs(nr.states[:, :m] - q0)))
    return LimitReport(v_scale, err, amp)
