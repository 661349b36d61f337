"""Discrete Herglotz measures and the Carathéodory functions they generate.

A probability measure ``mu = sum_j w_j delta(theta_j)`` on the unit circle gives

    p(z) = sum_j w_j (1 + x_j z) / (1 - x_j z),   x_j = exp(i theta_j),

so that ``p(0) = 1``, ``Re p > 0`` on the disk, and ``p_n = 2 sum_j w_j x_j**n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .series import TruncatedSeries, compose_zk

__all__ = [
    "HerglotzMeasure",
    "p_coefficients",
    "p_series",
    "p_value",
    "lift_k",
    "random_measure",
    "measure_from_params",
    "random_params",
]

TWO_PI = 2.0 * math.pi
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HerglotzMeasure:
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.mod(np.asarray(self.atoms, dtype=float).ravel(), TWO_PI)
        weights = np.asarray(self.weights, dtype=float).ravel()
        if atoms.size < 1:
            raise ValueError("a measure needs at least one atom")
        if atoms.size != weights.size:
            raise ValueError("atoms and weights must have the same length")
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {weights.sum()!r}, not 1")
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def point(cls, theta: float) -> "HerglotzMeasure":
        return cls([theta], [1.0])

    @property
    def size(self) -> int:
        return self.atoms.size

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.atoms)

    def to_dict(self) -> dict:
        return {"atoms": [float(t) for t in self.atoms], "weights": [float(w) for w in self.weights]}

    @classmethod
    def from_dict(cls, d: dict) -> "HerglotzMeasure":
        return cls(d["atoms"], d["weights"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "HerglotzMeasure":
        return cls.from_dict(json.loads(s))

    def __eq__(self, other):
        if not isinstance(other, HerglotzMeasure):
            return NotImplemented
        return np.array_equal(self.atoms, other.atoms) and np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"HerglotzMeasure(atoms={self.atoms.tolist()}, weights={self.weights.tolist()})"


def p_coefficients(mu: HerglotzMeasure, count: int) -> np.ndarray:
    """Return ``p_1 .. p_count`` (``p_0 = 1`` is implicit)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    n = np.arange(1, count + 1)
    return 2.0 * (np.exp(1j * np.outer(n, mu.atoms)) @ mu.weights)


def p_series(mu: HerglotzMeasure, order: int) -> TruncatedSeries:
    c = np.ones(order + 1, dtype=np.complex128)
    if order:
        c[1:] = p_coefficients(mu, order)
    return TruncatedSeries(c)


def p_value(mu: HerglotzMeasure, z) -> np.ndarray:
    """Evaluate ``p`` in closed form at points of the open unit disk."""
    z = np.asarray(z, dtype=np.complex128)
    xz = np.multiply.outer(z, mu.points)
    return ((1 + xz) / (1 - xz)) @ mu.weights


def lift_k(q: TruncatedSeries, k: int, order: int | None = None) -> TruncatedSeries:
    """The P-function ``p(z) = q(z**k)`` of a k-fold symmetric starlike function."""
    return compose_zk(q, k, order)


def measure_from_params(params: Sequence[float]) -> HerglotzMeasure:
    """Map ``(theta_1..theta_m, v_1..v_m)`` to a measure with weights ``v_j**2 / sum v**2``.

    Angles are unconstrained reals, reduced mod 2*pi.  An all-zero weight
    pre-image maps to uniform weights.
    """
    params = np.asarray(params, dtype=float)
    if params.size % 2 or params.size == 0:
        raise ValueError("expected an even, non-zero number of parameters")
    m = params.size // 2
    sq = params[m:] ** 2
    total = sq.sum()
    weights = sq / total if total > 0 else np.full(m, 1.0 / m)
    return HerglotzMeasure(params[:m], weights)


def random_params(rng: np.random.Generator, m: int, count: int | None = None) -> np.ndarray:
    """Draw ``count`` parameter vectors of length ``2m``: angles U[0, 2pi), pre-images U(-1, 1).

    Rows are drawn in order from a single stream, so the first ``j`` rows of a
    larger draw equal a draw of ``j`` rows.
    """
    shape = (2 * m,) if count is None else (count, 2 * m)
    u = rng.random(shape)
    out = np.empty_like(u)
    out[..., :m] = TWO_PI * u[..., :m]
    out[..., m:] = 2.0 * u[..., m:] - 1.0
    return out


def random_measure(rng: np.random.Generator, m: int = 3) -> HerglotzMeasure:
    """Random measure with ``m`` uniform atoms and flat-Dirichlet weights."""
    atoms = rng.random(m) * TWO_PI
    weights = rng.dirichlet(np.ones(m))
    weights /= weights.sum()
    return HerglotzMeasure(atoms, weights)
