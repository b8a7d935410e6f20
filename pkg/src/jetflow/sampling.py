"""Quasi-random sample points and sampled comparison of fields.

Geometric objects are compared pointwise on samples, never structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .expr import ScalarField, evaluate_fields, ncols

DEFAULT_SAMPLES = 200
DEFAULT_SEED = 20240607


@dataclass(frozen=True)
class Box:
    """Sampling box: t in ``t``, q and v in ``q``/``v``, tangent time component in ``tdot``."""

    t: tuple = (-2.0, 2.0)
    q: tuple = (-3.0, 3.0)
    v: tuple = (-3.0, 3.0)
    tdot: tuple = (-3.0, 3.0)


DEFAULT_BOX = Box()


def sample_points(dim: int, n: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, *,
                  box: Box = DEFAULT_BOX, tangent: bool = False, q_box=None) -> np.ndarray:
    """Scrambled Halton points in the sampling box.

    ``q_box`` optionally gives per-coordinate (lo, hi) bounds for q.  Without
    ``tangent`` the v0 column is ``nan`` (points of J^1Q).
    """
    d = 1 + 2 * dim + (1 if tangent else 0)
    u = qmc.Halton(d=d, scramble=True, seed=seed).random(n)
    X = np.full((n, ncols(dim)), np.nan)
    X[:, 0] = box.t[0] + (box.t[1] - box.t[0]) * u[:, 0]
    for i in range(dim):
        lo, hi = q_box[i] if q_box is not None else box.q
        X[:, 1 + i] = lo + (hi - lo) * u[:, 1 + i]
        X[:, 1 + dim + i] = box.v[0] + (box.v[1] - box.v[0]) * u[:, 1 + dim + i]
    if tangent:
        X[:, -1] = box.tdot[0] + (box.tdot[1] - box.tdot[0]) * u[:, -1]
    return X


def valid_rows(fields: Sequence[ScalarField], X, margin: float = 1e-3) -> np.ndarray:
    """Mask of rows where every field is defined and at least ``margin`` from a singularity."""
    ok = np.ones(len(X), bool)
    fields = [f for f in fields if f is not None]
    if fields:
        _, bad = evaluate_fields(fields, X, guard=True, margin=margin)
        ok &= ~bad
    return ok


def domain_samples(fields: Sequence[ScalarField], dim: int, n: int = DEFAULT_SAMPLES,
                   seed: int = DEFAULT_SEED, *, tangent=False, box: Box = DEFAULT_BOX,
                   q_box=None, margin: float = 1e-3) -> np.ndarray:
    """``n`` sample points at which all ``fields`` are safely defined."""
    X = sample_points(dim, 4 * n, seed, box=box, tangent=tangent, q_box=q_box)
    X = X[valid_rows(fields, X, margin)]
    if len(X) < n // 2:
        raise ValueError("too few admissible sample points for these fields")
    return X[:n]


def scaled_error(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - b| / max(1, |b|); absolute for O(1) values, relative for large ones."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def field_residual(fa: Sequence[ScalarField], fb: Sequence[ScalarField], X) -> float:
    """Scaled maximum discrepancy between two families of fields on the rows of ``X``."""
    fa, fb = list(fa), list(fb)
    if len(fa) != len(fb):
        raise ValueError("field families differ in length")
    if not fa:
        return 0.0
    return scaled_error(evaluate_fields(fa, X), evaluate_fields(fb, X))


def max_abs(fields: Sequence[ScalarField], X) -> float:
    fields = list(fields)
    if not fields:
        return 0.0
    return float(np.max(np.abs(evaluate_fields(fields, X))))
