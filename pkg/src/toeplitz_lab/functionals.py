"""Coefficient functionals of k-fold symmetric starlike functions.

For ``f(z) = z + sum_{n>=1} a_{nk+1} z**(nk+1)`` starlike, ``z f'(z) = f(z) p(z)``
with ``p(z) = q(z**k)`` in the Carathéodory class.  Matching powers gives

    n k a_{nk+1} = sum_{j=0}^{n-1} a_{jk+1} p_{(n-j)k},

which is what :func:`coeffs_from_p` solves.  The functionals below use the
shorthand ``a = a_{k+1}`` and ``b = a_{2k+1}``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .caratheodory import HerglotzMeasure, p_coefficients
from .series import TruncatedSeries, derivative, div, pow_binomial, shift

__all__ = [
    "Functional",
    "StarlikeCoeffs",
    "BoundReport",
    "coeffs_from_p",
    "coeffs_from_measure",
    "extremal_series",
    "extremal_coeffs",
    "starlike_ratio",
    "toeplitz_T22",
    "toeplitz_T31",
    "toeplitz_general",
    "fekete_szego",
    "evaluate",
    "bound_T22",
    "bound_T31",
    "bound_FS",
    "bound_for",
    "sharp_claimed",
    "EXTREMAL_MEASURE",
]

# q(w) = (1 + i w) / (1 - i w); lifted by w = z**k this is z f'/f of the extremal.
EXTREMAL_MEASURE = HerglotzMeasure.point(math.pi / 2)


class Functional(str, enum.Enum):
    T22 = "T22"
    T31 = "T31"
    FS = "FS"

    @classmethod
    def parse(cls, name: str) -> "Functional":
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown functional {name!r}; expected t22, t31 or fs") from None


@dataclass(frozen=True, eq=False)
class StarlikeCoeffs:
    """``a[0] = 1`` and ``a[n] = a_{nk+1}`` for ``n = 1 .. n_max``."""

    k: int
    a: np.ndarray

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        a = np.asarray(self.a, dtype=np.complex128).ravel()
        if a.size < 1 or a[0] != 1:
            raise ValueError("a[0] must be exactly 1")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def n_max(self) -> int:
        return self.a.size - 1

    @property
    def first(self) -> complex:
        """a_{k+1}"""
        self._need(1)
        return complex(self.a[1])

    @property
    def second(self) -> complex:
        """a_{2k+1}"""
        self._need(2)
        return complex(self.a[2])

    def _need(self, n: int) -> None:
        if self.n_max < n:
            raise ValueError(f"need coefficients up to n={n}, have n_max={self.n_max}")

    def to_series(self, order: int | None = None) -> TruncatedSeries:
        """``f`` as a truncated series (default order ``n_max*k + 1``)."""
        if order is None:
            order = self.n_max * self.k + 1
        c = np.zeros(order + 1, dtype=np.complex128)
        idx = 1 + self.k * np.arange(self.a.size)
        keep = idx <= order
        c[idx[keep]] = self.a[keep]
        return TruncatedSeries(c)

    @classmethod
    def identity(cls, k: int, n_max: int = 2) -> "StarlikeCoeffs":
        a = np.zeros(n_max + 1, dtype=np.complex128)
        a[0] = 1.0
        return cls(k, a)


def coeffs_from_p(p: Sequence[complex], k: int, n_max: int | None = None) -> StarlikeCoeffs:
    """Solve ``z f' = f p`` for the k-fold coefficients.

    ``p`` holds ``p_k, p_{2k}, ..., p_{n k}``; ``n_max`` defaults to ``len(p)``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    p = np.asarray(p, dtype=np.complex128).ravel()
    if n_max is None:
        n_max = p.size
    if p.size < n_max:
        raise ValueError(f"need {n_max} moments p_k..p_(n_max*k), got {p.size}")
    a = np.zeros(n_max + 1, dtype=np.complex128)
    a[0] = 1.0
    for n in range(1, n_max + 1):
        # p[n-j-1] is p_{(n-j)k}
        a[n] = np.dot(a[:n], p[n - 1::-1][:n]) / (n * k)
    return StarlikeCoeffs(k, a)


def coeffs_from_measure(mu: HerglotzMeasure, k: int, n_max: int = 2) -> StarlikeCoeffs:
    """Coefficients of the starlike ``f`` with ``z f'/f = q(z**k)``, ``q`` generated by ``mu``."""
    return coeffs_from_p(p_coefficients(mu, n_max), k, n_max)


def extremal_series(k: int, order: int | None = None) -> TruncatedSeries:
    """``z (1 - i z**k)**(-2/k)`` truncated at ``order`` (default ``4k + 2``)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if order is None:
        order = 4 * k + 2
    base = TruncatedSeries.constant(1.0, order - 1) - TruncatedSeries.monomial(k, order - 1, 1j)
    g = pow_binomial(base, -2.0 / k)
    return TruncatedSeries(np.concatenate([[0.0], g.coeffs]))


def extremal_coeffs(k: int, n_max: int = 2) -> StarlikeCoeffs:
    f = extremal_series(k, n_max * k + 1)
    return StarlikeCoeffs(k, f.coeffs[1::k][: n_max + 1])


def starlike_ratio(f: TruncatedSeries) -> TruncatedSeries:
    """``z f'(z) / f(z)`` for ``f(0) = 0, f'(0) != 0``, as a series of order ``N - 1``."""
    return div(derivative(f), shift(f, -1))


def toeplitz_T22(c: StarlikeCoeffs) -> complex:
    return c.first**2 - c.second**2


def toeplitz_T31(c: StarlikeCoeffs) -> complex:
    a, b = c.first, c.second
    return 1 - b**2 - 2 * a**2 + 2 * a**2 * b


def toeplitz_general(first_row: Sequence[complex]) -> complex:
    """Determinant of the symmetric (not Hermitian) Toeplitz matrix ``T[i, j] = row[|i - j|]``."""
    row = np.asarray(first_row, dtype=np.complex128).ravel()
    if row.size == 0:
        raise ValueError("first row is empty")
    idx = np.arange(row.size)
    return complex(np.linalg.det(row[np.abs(idx[:, None] - idx[None, :])]))


def fekete_szego(c: StarlikeCoeffs, lam: complex) -> complex:
    return c.second - lam * c.first**2


def evaluate(c: StarlikeCoeffs, functional: Functional, lam: complex = 0.0) -> complex:
    functional = Functional(functional)
    if functional is Functional.T22:
        return toeplitz_T22(c)
    if functional is Functional.T31:
        return toeplitz_T31(c)
    return fekete_szego(c, lam)


def bound_T22(k: int) -> float:
    return 4 / k**2 + (k + 2) ** 2 / k**4


def _bound_T31_small(k: int) -> float:
    return 1 + 8 / k**2 + (k + 2) * (6 - k) / k**4


def _bound_T31_large(k: int) -> float:
    return 1 + 8 / k**2 + (2 + k) / k**3


def bound_T31(k: int) -> float:
    """Upper bound on ``|T_{3,1}|``; the two branches coincide at ``k = 3``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return _bound_T31_small(k) if k <= 3 else _bound_T31_large(k)


def bound_FS(k: int, lam: complex) -> float:
    return max(1.0, abs(2 + k - 4 * lam) / k) / k


def bound_for(functional: Functional, k: int, lam: complex = 0.0) -> float:
    functional = Functional(functional)
    if functional is Functional.T22:
        return bound_T22(k)
    if functional is Functional.T31:
        return bound_T31(k)
    return bound_FS(k, lam)


def sharp_claimed(functional: Functional, k: int) -> bool:
    functional = Functional(functional)
    if functional is Functional.T31:
        return k <= 3
    return True


@dataclass
class BoundReport:
    functional: Functional
    k: int
    closed_form: float
    empirical_sup: float
    witness: HerglotzMeasure | None = None
    lam: complex | None = None
    sharp_claimed: bool = True
    valid: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.closed_form - self.empirical_sup

    def to_dict(self) -> dict:
        d = {
            "functional": Functional(self.functional).value,
            "k": int(self.k),
        }
        if self.lam is not None:
            d["lambda"] = [float(complex(self.lam).real), float(complex(self.lam).imag)]
        d.update(
            closed_form=float(self.closed_form),
            empirical_sup=float(self.empirical_sup),
            gap=float(self.gap),
            witness=None if self.witness is None else self.witness.to_dict(),
            sharp_claimed=bool(self.sharp_claimed),
            valid=bool(self.valid),
        )
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        lam = d.get("lambda")
        return cls(
            functional=Functional(d["functional"]),
            k=d["k"],
            closed_form=d["closed_form"],
            empirical_sup=d["empirical_sup"],
            witness=None if d.get("witness") is None else HerglotzMeasure.from_dict(d["witness"]),
            lam=None if lam is None else complex(lam[0], lam[1]),
            sharp_claimed=d.get("sharp_claimed", True),
            valid=d.get("valid", True),
            extra=d.get("extra", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())
