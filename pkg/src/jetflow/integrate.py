"""Integration of dynamic equations on J^1Q and geodesic equations on TQ."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvariantViolation, NoOverlap, NonFiniteValue, StepFailure, TrajectoryMismatch
from .expr import JetPoint, TangentPoint, evaluate_fields
from .jet import DynamicEquation
from .tangent import TangentConnection, geodesic_field

TIME_FIBRE_TOL = 1e-10

# Dormand-Prince 5(4)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk45"  # "rk45" (adaptive) or "rk4" (fixed step)
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    window: float = 1.0
    step: float = 1e-2  # rk4 step, rk45 initial step
    max_step: float = np.inf

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.window <= 0 or self.step <= 0:
            raise ValueError("window and step must be positive")

    @property
    def tol(self) -> float:
        return max(self.abs_tol, self.rel_tol)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Accepted nodes (t_k, y_k, y'_k) with cubic Hermite dense output."""

    times: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, float)
        y = np.atleast_2d(np.asarray(self.states, float))
        d = np.atleast_2d(np.asarray(self.derivs, float))
        if y.shape != d.shape or y.shape[0] != t.size:
            raise TrajectoryMismatch("times, states and derivatives disagree in shape")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise TrajectoryMismatch("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", y)
        object.__setattr__(self, "derivs", d)

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def at(self, t) -> np.ndarray:
        """Hermite-interpolated states, shape (len(t), d) (or (d,) for scalar t)."""
        scalar = np.ndim(t) == 0
        tq = np.atleast_1d(np.asarray(t, float))
        if np.any(tq < self.t0 - 1e-12) or np.any(tq > self.t1 + 1e-12):
            raise NoOverlap("query time outside the trajectory window")
        if self.times.size == 1:
            out = np.repeat(self.states[:1], tq.size, axis=0)
            return out[0] if scalar else out
        k = np.clip(np.searchsorted(self.times, tq, side="right") - 1, 0, self.times.size - 2)
        ta, tb = self.times[k], self.times[k + 1]
        h = (tb - ta)[:, None]
        s = ((tq - ta) / (tb - ta))[:, None]
        ya, yb = self.states[k], self.states[k + 1]
        da, db = self.derivs[k], self.derivs[k + 1]
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        out = h00 * ya + h10 * h * da + h01 * yb + h11 * h * db
        return out[0] if scalar else out


def _rk4(rhs, t0, y0, cfg, stop):
    n = max(1, int(round(cfg.window / cfg.step)))
    h = cfg.window / n
    ts, ys, ds = [t0], [y0], [rhs(t0, y0)]
    t, y = t0, y0
    for k in range(n):
        k1 = ds[-1]
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (k + 1) * h
        ts.append(t)
        ys.append(y)
        ds.append(rhs(t, y))
        if stop is not None and stop(t, y):
            break
    return ts, ys, ds, {"steps": len(ts) - 1, "rejected": 0, "step": h}


def _error_norm(err, y, ynew, cfg):
    scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(ynew))
    return float(np.max(np.abs(err) / scale))


def _rk45(rhs, t0, y0, cfg, stop):
    t_end = t0 + cfg.window
    h_min = 1e-12 * cfg.window
    h = min(cfg.step, cfg.max_step, cfg.window)
    t, y = t0, y0
    f = rhs(t, y)
    ts, ys, ds = [t], [y], [f]
    rejected = 0
    K = np.empty((7, y0.size))
    while t < t_end:
        h = min(h, t_end - t)
        if h < h_min and t_end - t > h_min:
            partial = Trajectory(np.array(ts), np.array(ys), np.array(ds), {"method": "rk45", "failed_at": t})
            raise StepFailure(f"step size underflow at t = {t:.17g}", partial)
        K[0] = f
        try:
            for s in range(1, 7):
                ys_ = y + h * (np.asarray(_A[s]) @ K[:s])
                K[s] = rhs(t + _C[s] * h, ys_)
            ynew = ys_  # row 6 of _A equals _B5 (FSAL)
            err = _error_norm(h * (_E @ K), y, ynew, cfg)
            finite = np.all(np.isfinite(ynew))
        except NonFiniteValue:
            err, finite = np.inf, False
        if finite and err <= 1.0:
            t = t + h
            if abs(t_end - t) <= 1e-14 * max(1.0, abs(t_end)):
                t = t_end
            y, f = ynew, K[6].copy()
            ts.append(t)
            ys.append(y)
            ds.append(f)
            if stop is not None and stop(t, y):
                break
            fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            rejected += 1
            fac = 0.2 if not np.isfinite(err) else max(0.1, 0.9 * err ** -0.2)
        h = min(h * fac, cfg.max_step)
    return ts, ys, ds, {"steps": len(ts) - 1, "rejected": rejected}


def integrate(rhs: Callable, t0: float, y0, cfg: IntegratorConfig, stop=None, name: str = "") -> Trajectory:
    """Integrate y' = rhs(t, y) over [t0, t0 + cfg.window]."""
    y0 = np.asarray(y0, float)
    if not np.all(np.isfinite(y0)):
        raise ValueError("initial data must be finite")
    run = _rk4 if cfg.method == "rk4" else _rk45
    ts, ys, ds, stats = run(rhs, float(t0), y0, cfg, stop)
    meta = {"method": cfg.method, "abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol, "name": name, **stats}
    return Trajectory(np.array(ts), np.array(ys), np.array(ds), meta)


def sode_rhs(xi: DynamicEquation):
    m = xi.dim
    fields = list(xi.xi)
    row = np.full((1, 2 * m + 2), np.nan)

    def rhs(t, y):
        row[0, 0] = t
        row[0, 1 : 1 + 2 * m] = y
        acc = evaluate_fields(fields, row)[:, 0]
        return np.concatenate([y[m:], acc])

    return rhs


def geodesic_rhs(K: TangentConnection):
    m = K.dim
    n = m + 1
    fields = list(geodesic_field(K).Xi)
    row = np.empty((1, 2 * m + 2))

    def rhs(_s, y):
        x, xd = y[:n], y[n:]
        row[0, 0] = x[0]
        row[0, 1 : 1 + m] = x[1:]
        row[0, 1 + m : 1 + 2 * m] = xd[1:]
        row[0, -1] = xd[0]
        acc = evaluate_fields(fields, row)[:, 0]
        return np.concatenate([xd, acc])

    return rhs


def integrate_sode(xi: DynamicEquation, p0: JetPoint, cfg: IntegratorConfig) -> Trajectory:
    if p0.dim != xi.dim:
        raise TrajectoryMismatch("initial point dimension differs from the equation")
    return integrate(sode_rhs(xi), p0.t, [*p0.q, *p0.v], cfg, name="sode")


def integrate_geodesic(K: TangentConnection, tp0: TangentPoint, cfg: IntegratorConfig,
                       stop=None) -> Trajectory:
    """Geodesic flow of K; the curve parameter starts at x^0(0).

    For temporally trivial K with xdot^0(0) = 1 the time fibre invariant
    |xdot^0 - 1| <= 1e-10 is asserted along the whole trajectory.
    """
    if tp0.dim != K.dim:
        raise TrajectoryMismatch("initial point dimension differs from the connection")
    tr = integrate(geodesic_rhs(K), tp0.x[0], [*tp0.x, *tp0.xdot], cfg, stop=stop, name="geodesic")
    if tp0.xdot[0] == 1.0 and all(f.is_zero for f in K.K[0]):
        drift = float(np.max(np.abs(tr.states[:, K.dim + 1] - 1.0)))
        if drift > TIME_FIBRE_TOL:
            raise InvariantViolation(f"xdot^0 drifted by {drift:.3g}")
        tr.meta["time_fibre_drift"] = drift
    return tr


def jet_projection(m: int):
    """Index maps that align a jet trajectory (q, v) with a geodesic one (x, xdot)."""
    return list(range(2 * m)), [*range(1, m + 1), *range(m + 2, 2 * m + 2)]


def compare_trajectories(a: Trajectory, b: Trajectory, projection=None) -> float:
    """Max-norm deviation of projected states at the union of nodes in the common window.

    ``projection`` is None (full state), a list of indices used for both, or a
    pair of index lists (for a, for b).
    """
    lo, hi = max(a.t0, b.t0), min(a.t1, b.t1)
    if hi < lo:
        raise NoOverlap("trajectories do not overlap in time")
    if projection is None:
        pa = pb = list(range(a.states.shape[1]))
    elif isinstance(projection, tuple) and len(projection) == 2 and not np.isscalar(projection[0]):
        pa, pb = list(projection[0]), list(projection[1])
    else:
        pa = pb = list(projection)
    if len(pa) != len(pb):
        raise TrajectoryMismatch("projections select different numbers of components")
    nodes = np.union1d(a.times, b.times)
    nodes = nodes[(nodes >= lo) & (nodes <= hi)]
    if nodes.size == 0:
        nodes = np.array([lo])
    da = a.at(nodes)[:, pa]
    db = b.at(nodes)[:, pb]
    return float(np.max(np.abs(da - db)))


def write_csv(traj: Trajectory, header: Sequence[str]) -> str:
    """CSV text with a header row and 17 significant digits."""
    lines = [",".join(header)]
    for t, y in zip(traj.times, traj.states):
        lines.append(",".join(f"{v:.17g}" for v in (t, *y)))
    return "\n".join(lines) + "\n"


def sode_header(m: int) -> list:
    return ["t", *(f"q{i + 1}" for i in range(m)), *(f"v{i + 1}" for i in range(m))]


def geodesic_header(m: int) -> list:
    return ["t", *(f"x{i}" for i in range(m + 1)), *(f"xdot{i}" for i in range(m + 1))]
