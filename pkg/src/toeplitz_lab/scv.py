"""Coefficient functionals of starlike mappings on the ball and the polydisk in C^n.

Mappings are black boxes ``F: (..., n) -> (..., n)``.  Homogeneous
coefficients are read off complex lines: ``zeta -> F(zeta z0)`` is sampled on a
circle and its Taylor coefficients (vectors in C^n) come from a DFT.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .caratheodory import HerglotzMeasure
from .functionals import (
    EXTREMAL_MEASURE,
    BoundReport,
    Functional,
    bound_for,
    coeffs_from_measure,
    sharp_claimed,
)

__all__ = [
    "Domain",
    "DomainKind",
    "ScvPoint",
    "LineRestriction",
    "ScvMapping",
    "SupportFunctional",
    "ExceptionalSetError",
    "AccuracyWarning",
    "support_functional_ball",
    "minkowski_polydisk",
    "line_coefficients",
    "ball_functional",
    "omega_functional",
    "domain_functional",
    "scv_toeplitz_check",
    "starlikeness_probe",
    "starlike_quantity",
    "one_dim_reference",
    "contact_order_ok",
    "sample_points",
    "identity_mapping",
    "extremal_ball",
    "extremal_polydisk",
    "scalar_multiplier",
    "mapping_from_name",
]

TIE_TOL = 1e-12
FD_STEP = 1e-5
MIN_SAMPLES = 128


class ExceptionalSetError(ValueError):
    """The polydisk gauge is not differentiable here (tie in the maximal modulus)."""


class AccuracyWarning(UserWarning):
    pass


class DomainKind(str, enum.Enum):
    BALL = "ball"
    POLYDISK = "polydisk"


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    @classmethod
    def ball(cls, n: int) -> "Domain":
        return cls(DomainKind.BALL, n)

    @classmethod
    def polydisk(cls, n: int) -> "Domain":
        return cls(DomainKind.POLYDISK, n)

    def gauge(self, z) -> np.ndarray:
        """Euclidean norm on the ball, max modulus on the polydisk."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind is DomainKind.BALL:
            return np.linalg.norm(z, axis=-1)
        return np.abs(z).max(axis=-1)

    def contains(self, z) -> bool:
        return bool(self.gauge(z) < 1)


@dataclass(frozen=True, eq=False)
class ScvPoint:
    z: np.ndarray
    domain: Domain

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.complex128).ravel()
        if z.size != self.domain.n:
            raise ValueError(f"point has {z.size} coordinates, domain has n={self.domain.n}")
        if not np.any(z):
            raise ValueError("point must be non-zero")
        if not self.domain.contains(z):
            raise ValueError("point lies outside the domain")
        object.__setattr__(self, "z", z)

    @property
    def gauge(self) -> float:
        return float(self.domain.gauge(self.z))

    def support(self) -> "SupportFunctional":
        if self.domain.kind is DomainKind.BALL:
            return support_functional_ball(self.z)
        _, grad = minkowski_polydisk(self.z)
        # 2 d(rho)/dz is a norm-one functional with value rho(z) at z
        return SupportFunctional(2.0 * grad)


@dataclass(frozen=True, eq=False)
class SupportFunctional:
    """Linear functional ``w -> sum_j coef_j w_j``."""

    coef: np.ndarray

    def __call__(self, w) -> complex:
        return np.asarray(w, dtype=np.complex128) @ self.coef


def support_functional_ball(z) -> SupportFunctional:
    """``l_z(w) = <w, z> / ||z||``: ``l_z(z) = ||z||`` and ``||l_z|| = 1``."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    r = np.linalg.norm(z)
    if r == 0:
        raise ValueError("support functional undefined at z = 0")
    return SupportFunctional(np.conj(z) / r)


def minkowski_polydisk(z) -> tuple[float, np.ndarray]:
    """``rho(z) = max_j |z_j|`` and its Wirtinger gradient ``d(rho)/dz``.

    Off the exceptional set the gradient is ``conj(z_j) / (2 |z_j|)`` in the
    maximal slot ``j`` and zero elsewhere, so ``2 (d rho/dz) . z = rho(z)``.
    """
    z = np.asarray(z, dtype=np.complex128).ravel()
    mod = np.abs(z)
    j = int(np.argmax(mod))
    rho = float(mod[j])
    if rho == 0:
        raise ExceptionalSetError("gradient undefined at z = 0")
    others = np.delete(mod, j)
    if others.size and rho - others.max() <= TIE_TOL:
        raise ExceptionalSetError(f"maximal modulus is attained twice at {z!r}")
    grad = np.zeros_like(z)
    grad[j] = np.conj(z[j]) / (2.0 * rho)
    return rho, grad


@dataclass(frozen=True, eq=False)
class LineRestriction:
    direction: np.ndarray
    sample_radius: float = 0.5
    sample_count: int = 0  # 0 -> chosen from the target index

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=np.complex128).ravel()
        object.__setattr__(self, "direction", d)
        if not 0.25 <= self.sample_radius <= 0.75:
            raise ValueError("sample_radius must lie in [0.25, 0.75]")

    def samples_for(self, max_index: int) -> int:
        need = 2 * max_index + 2
        if self.sample_count == 0:
            # r**M must beat the polynomial growth of the coefficients at r = 1/2
            return max(8 * max_index, MIN_SAMPLES, need)
        if self.sample_count < need:
            raise ValueError(f"sample_count {self.sample_count} < {need} needed for index {max_index}")
        return self.sample_count


@dataclass(frozen=True, eq=False)
class ScvMapping:
    """A normalized holomorphic map ``F(z) = z * multiplier(z)``.

    ``multiplier`` is the scalar factor; ``evaluator`` is the full map.  Both
    act on arrays of shape ``(..., n)`` and must be stateless.
    """

    name: str
    n: int
    k: int
    multiplier: Callable[[np.ndarray], np.ndarray]
    one_dim: HerglotzMeasure | None = None
    meta: dict = field(default_factory=dict)

    def evaluator(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        return z * self.multiplier(z)[..., None]

    __call__ = evaluator


# --- mapping catalogue -------------------------------------------------------

def _unit(u, n: int) -> np.ndarray:
    if u is None:
        u = np.zeros(n, dtype=np.complex128)
        u[0] = 1.0
    u = np.asarray(u, dtype=np.complex128).ravel()
    if u.size != n:
        raise ValueError("direction has wrong dimension")
    return u / np.linalg.norm(u)


def _herglotz_multiplier(mu: HerglotzMeasure, k: int):
    """``h(w) = g(w) / w`` for the one-variable starlike ``g`` with ``w g'/g = q(w**k)``.

    For a discrete measure ``h(w) = prod_j (1 - x_j w**k) ** (-2 w_j / k)``.
    """
    x = mu.points
    expo = -2.0 * mu.weights / k

    def h(w):
        w = np.asarray(w, dtype=np.complex128)
        base = 1.0 - np.multiply.outer(w**k, x)
        return np.exp((np.log(base) * expo).sum(axis=-1))

    return h


def identity_mapping(n: int, k: int = 1) -> ScvMapping:
    return ScvMapping("identity", n, k, lambda z: np.ones(np.shape(z)[:-1], dtype=np.complex128))


def scalar_multiplier(n: int, k: int, mu: HerglotzMeasure, u=None, r: float = 1.0,
                      name: str | None = None) -> ScvMapping:
    """``F(z) = z g(w) / w`` with ``w = l_u(z) / r`` and ``g`` generated by ``mu``."""
    u = _unit(u, n)
    h = _herglotz_multiplier(mu, k)
    cu = np.conj(u)

    def mult(z):
        return h((np.asarray(z, dtype=np.complex128) @ cu) / r)

    return ScvMapping(name or "scalar_multiplier", n, k, mult, one_dim=mu,
                      meta={"u": u, "r": r})


def extremal_ball(n: int, k: int, u=None) -> ScvMapping:
    """``F(z) = z (1 - i l_u(z)**k) ** (-2/k)`` on the unit ball."""
    u = _unit(u, n)
    cu = np.conj(u)

    def mult(z):
        w = np.asarray(z, dtype=np.complex128) @ cu
        return (1.0 - 1j * w**k) ** (-2.0 / k)

    return ScvMapping("extremal_ball", n, k, mult, one_dim=EXTREMAL_MEASURE, meta={"u": u, "r": 1.0})


def extremal_polydisk(n: int, k: int, r: float = 1.0) -> ScvMapping:
    """``F(z) = z (1 - i (z_1/r)**k) ** (-2/k)``; ``r = 1`` for the unit polydisk."""

    def mult(z):
        w = np.asarray(z, dtype=np.complex128)[..., 0] / r
        return (1.0 - 1j * w**k) ** (-2.0 / k)

    return ScvMapping("extremal_polydisk", n, k, mult, one_dim=EXTREMAL_MEASURE,
                      meta={"u": _unit(None, n), "r": r})


def mapping_from_name(name: str, n: int, k: int) -> ScvMapping:
    """``identity``, ``extremal_ball``, ``extremal_polydisk`` or ``scalar_multiplier:<measure json>``."""
    if name == "identity":
        return identity_mapping(n, k)
    if name == "extremal_ball":
        return extremal_ball(n, k)
    if name == "extremal_polydisk":
        return extremal_polydisk(n, k)
    if name.startswith("scalar_multiplier:"):
        payload = name.split(":", 1)[1]
        try:
            mu = HerglotzMeasure.from_dict(json.loads(payload))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"bad measure JSON in mapping name: {exc}") from None
        return scalar_multiplier(n, k, mu)
    raise ValueError(f"unknown mapping {name!r}")


# --- coefficient extraction --------------------------------------------------

def line_coefficients(F: ScvMapping, line: LineRestriction, max_index: int) -> np.ndarray:
    """Taylor coefficients ``c_0 .. c_max_index`` (rows in C^n) of ``zeta -> F(zeta z0)``.

    ``c_m = (1 / (M r**m)) sum_j F(r e^{i t_j} z0) e^{-i m t_j}``.  Warns with
    :class:`AccuracyWarning` when the top of the resolved band has not decayed,
    i.e. aliasing may contaminate the requested coefficients.
    """
    M = line.samples_for(max_index)
    r = line.sample_radius
    t = 2.0 * math.pi * np.arange(M) / M
    zeta = r * np.exp(1j * t)
    vals = F(zeta[:, None] * line.direction[None, :])
    spectrum = np.fft.fft(vals, axis=0) / M
    top = M // 2
    scaled = spectrum[: top + 1]
    coeffs = spectrum[: max_index + 1] / (r ** np.arange(max_index + 1))[:, None]

    # Aliasing into c_m is ~ |c_{m+M}| r^M; estimate tail decay from the upper band.
    band = scaled[max(max_index + 1, (3 * top) // 4): top + 1]
    if band.size:
        tail = float(np.abs(band).max())
        scale = float(np.abs(scaled).max()) or 1.0
        if tail > 1e-12 * scale:
            warnings.warn(
                f"{F.name}: spectral tail {tail:.3e} (relative {tail/scale:.1e}) not negligible; "
                "increase sample_count or lower sample_radius",
                AccuracyWarning,
                stacklevel=2,
            )
    return coeffs


def _default_line(direction, samples: int = 0, radius: float = 0.5) -> LineRestriction:
    return LineRestriction(direction, radius, samples)


def ball_functional(F: ScvMapping, z, m: int, sample_radius: float = 0.5, samples: int = 0) -> complex:
    """``l_z(D^m F(0)(z^m)) / (m! ||z||^m)``.

    With ``z0 = z / ||z||`` the m-th line coefficient satisfies
    ``c_m(z) = ||z||^m c_m(z0)``; ``l_z`` is applied to ``c_m(z)``.
    """
    p = ScvPoint(z, Domain.ball(F.n))
    r = np.linalg.norm(p.z)
    c = line_coefficients(F, _default_line(p.z / r, samples, sample_radius), m)[m]
    return complex(support_functional_ball(p.z)(c * r**m) / r**m)


def omega_functional(F: ScvMapping, z, m: int, sample_radius: float = 0.5, samples: int = 0) -> complex:
    """``2 (d rho(z)/dz) D^m F(0)(z^m) / (m! rho(z)^m)`` on the unit polydisk."""
    p = ScvPoint(z, Domain.polydisk(F.n))
    rho, grad = minkowski_polydisk(p.z)
    c = line_coefficients(F, _default_line(p.z / rho, samples, sample_radius), m)[m]
    return complex(2.0 * (grad @ (c * rho**m)) / rho**m)


def domain_functional(F: ScvMapping, z, m: int, domain: Domain, **kw) -> complex:
    if domain.kind is DomainKind.BALL:
        return ball_functional(F, z, m, **kw)
    return omega_functional(F, z, m, **kw)


# --- hypothesis checks -------------------------------------------------------

def sample_points(domain: Domain, count: int, rng: np.random.Generator, max_gauge: float = 0.95) -> np.ndarray:
    """Random points with gauge in ``(0, max_gauge)``; polydisk ties are re-drawn."""
    n = domain.n
    out = np.empty((count, n), dtype=np.complex128)
    i = 0
    while i < count:
        if domain.kind is DomainKind.BALL:
            g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            z = g / np.linalg.norm(g) * max_gauge * rng.random() ** (1.0 / (2 * n))
        else:
            z = max_gauge * np.sqrt(rng.random(n)) * np.exp(2j * math.pi * rng.random(n))
            mod = np.sort(np.abs(z))
            if n > 1 and mod[-1] - mod[-2] <= TIE_TOL:
                continue
        if not np.any(z):
            continue
        out[i] = z
        i += 1
    return out


def _jacobian(F: ScvMapping, z: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    n = z.size
    eye = np.eye(n)
    plus = F(z[None, :] + h * eye)
    minus = F(z[None, :] - h * eye)
    # row j of plus/minus is F(z +- h e_j); column j of DF is dF/dz_j
    return ((plus - minus) / (2.0 * h)).T


def starlike_quantity(F: ScvMapping, z, domain: Domain) -> complex:
    """``l_z((DF(z))^{-1} F(z))`` (ball) or ``(d rho/dz)(DF(z))^{-1} F(z)`` (polydisk)."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    v = np.linalg.solve(_jacobian(F, z), F(z))
    if domain.kind is DomainKind.BALL:
        return complex(support_functional_ball(z)(v))
    _, grad = minkowski_polydisk(z)
    return complex(grad @ v)


def starlikeness_probe(F: ScvMapping, domain: Domain, samples: int = 1000, seed: int = 0,
                       points: np.ndarray | None = None) -> bool:
    """True iff the starlikeness criterion has positive real part at every probe point.

    The Jacobian comes from central differences with step ``1e-5``.
    """
    if points is None:
        points = sample_points(domain, samples, np.random.default_rng(seed))
    for z in points:
        try:
            val = starlike_quantity(F, z, domain)
        except np.linalg.LinAlgError:
            return False
        if not np.isfinite(val) or val.real <= 0:
            return False
    return True


def contact_order_ok(F: ScvMapping, domain: Domain, directions: int = 4, seed: int = 0,
                     tol: float = 1e-8) -> bool:
    """``F(z) - z`` vanishes to order ``k + 1``: along lines, ``c_1 = z0`` and ``c_2..c_k = 0``."""
    rng = np.random.default_rng(seed)
    pts = sample_points(domain, directions, rng)
    for z in pts:
        z0 = z / domain.gauge(z)
        c = line_coefficients(F, _default_line(z0), max(F.k, 1))
        if np.abs(c[0]).max() > tol or np.abs(c[1] - z0).max() > tol:
            return False
        if F.k >= 2 and np.abs(c[2: F.k + 1]).max() > tol:
            return False
    return True


def scv_toeplitz_check(F: ScvMapping, z, k: int, functional: Functional, domain: Domain,
                       lam: complex = 0.0, probe_samples: int = 200, seed: int = 0,
                       probe_ok: bool | None = None) -> BoundReport:
    """Assemble T22 / T31 / FS from the normalized functionals at ``z`` and compare to the bound.

    ``probe_ok`` short-circuits the starlikeness and contact-order probes when
    the caller has already run them.
    """
    functional = Functional(functional)
    if probe_ok is None:
        probe_ok = starlikeness_probe(F, domain, probe_samples, seed) and contact_order_ok(F, domain, seed=seed)
    a = domain_functional(F, z, k + 1, domain)
    b = domain_functional(F, z, 2 * k + 1, domain)
    if functional is Functional.T22:
        val = b**2 - a**2
    elif functional is Functional.T31:
        val = 1 - b**2 - 2 * a**2 + 2 * a**2 * b
    else:
        val = b - lam * a**2
    return BoundReport(
        functional=functional,
        k=k,
        closed_form=bound_for(functional, k, lam),
        empirical_sup=abs(val),
        witness=F.one_dim,
        lam=lam if functional is Functional.FS else None,
        sharp_claimed=sharp_claimed(functional, k),
        valid=bool(probe_ok),
        extra={
            "domain": domain.kind.value,
            "n": domain.n,
            "mapping": F.name,
            "z": [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=np.complex128).ravel()],
            "a_k1": [a.real, a.imag],
            "a_2k1": [b.real, b.imag],
        },
    )


def one_dim_reference(F: ScvMapping) -> tuple[complex, complex] | None:
    """``(a_{k+1}, a_{2k+1})`` of the one-variable function behind ``F``, if known."""
    if F.one_dim is None:
        return None
    c = coeffs_from_measure(F.one_dim, F.k, 2)
    return c.first, c.second
