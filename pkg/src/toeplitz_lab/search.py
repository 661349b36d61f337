"""Multistart derivative-free maximisation of the coefficient functionals.

The search runs over discrete Herglotz measures with ``atoms`` point masses,
parametrised by unconstrained angles and weight pre-images (weights are the
normalised squares).  Each start runs Nelder-Mead on ``-|functional|``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .caratheodory import HerglotzMeasure, measure_from_params, random_params
from .functionals import Functional, bound_for, coeffs_from_measure, evaluate

__all__ = [
    "SearchConfig",
    "SearchResult",
    "objective",
    "maximize",
    "non_exceedance_scan",
    "functional_code",
]

_CODES = {Functional.T22: 0, Functional.T31: 1, Functional.FS: 2}


@dataclass(frozen=True)
class SearchConfig:
    k: int
    functional: Functional = Functional.T22
    lam: complex = 0.0
    atoms: int = 3
    multistarts: int = 200
    seed: int = 0
    local_tol: float = 1e-10
    max_iters: int = 2000

    def __post_init__(self):
        object.__setattr__(self, "functional", Functional.parse(self.functional))
        object.__setattr__(self, "lam", complex(self.lam))
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.atoms < 1:
            raise ValueError("atoms must be >= 1")
        if self.multistarts < 1:
            raise ValueError("multistarts must be >= 1")
        if not self.local_tol > 0:
            raise ValueError("local_tol must be positive")

    @property
    def bound(self) -> float:
        return bound_for(self.functional, self.k, self.lam)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["functional"] = self.functional.value
        d["lam"] = [self.lam.real, self.lam.imag]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        d = dict(d)
        lam = d.pop("lam", (0.0, 0.0))
        return cls(lam=complex(lam[0], lam[1]), **d)


@dataclass
class SearchResult:
    best_value: float
    best_measure: HerglotzMeasure
    evaluations: int
    converged: bool
    per_start_values: np.ndarray = field(repr=False)
    best_index: int = 0

    def to_dict(self) -> dict:
        return {
            "best_value": float(self.best_value),
            "best_measure": self.best_measure.to_dict(),
            "best_index": int(self.best_index),
            "evaluations": int(self.evaluations),
            "converged": bool(self.converged),
            "per_start_values": [float(v) for v in self.per_start_values],
        }


def functional_code(functional: Functional) -> int:
    return _CODES[Functional(functional)]


def objective(mu: HerglotzMeasure, cfg: SearchConfig) -> float:
    """``|functional|`` of the starlike function whose P-function is ``q(z**k)``, ``q`` from ``mu``."""
    c = coeffs_from_measure(mu, cfg.k, 2)
    return abs(evaluate(c, cfg.functional, cfg.lam))


def _starts(cfg: SearchConfig) -> np.ndarray:
    return random_params(np.random.default_rng(cfg.seed), cfg.atoms, cfg.multistarts)


def maximize(cfg: SearchConfig, backend: str | None = None, workers: int = 1) -> SearchResult:
    """Multistart Nelder-Mead; ties between starts go to the lowest index.

    ``workers > 1`` runs contiguous chunks of starts in threads.  The compiled
    kernel releases the GIL; results do not depend on ``workers``.
    """
    kern = _backend.kernels if backend is None else _backend.load(backend)
    starts = _starts(cfg)
    code = functional_code(cfg.functional)

    def run(chunk):
        return kern.multistart(chunk, cfg.k, code, cfg.lam, cfg.local_tol, cfg.max_iters)

    if workers > 1 and len(starts) > 1:
        chunks = np.array_split(starts, min(workers, len(starts)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, [np.ascontiguousarray(c) for c in chunks]))
        xs = np.concatenate([p[0] for p in parts])
        fs = np.concatenate([p[1] for p in parts])
        es = np.concatenate([p[2] for p in parts])
        cs = np.concatenate([p[3] for p in parts])
    else:
        xs, fs, es, cs = run(starts)

    best = int(np.argmax(fs))  # first maximal index
    return SearchResult(
        best_value=float(fs[best]),
        best_measure=measure_from_params(xs[best]),
        evaluations=int(es.sum()),
        converged=bool(cs[best]),
        per_start_values=fs,
        best_index=best,
    )


def non_exceedance_scan(cfg: SearchConfig, samples: int, backend: str | None = None,
                        include: Sequence[HerglotzMeasure] = (),
                        chunk: int = 50_000) -> tuple[float, HerglotzMeasure]:
    """Max of the objective over ``samples`` seeded random measures, with its argmax.

    Angles are uniform; weights are flat-Dirichlet.  Samples are drawn in
    chunks from one stream seeded by ``cfg.seed``.  Measures in ``include``
    are scored as well and win ties.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    kern = _backend.kernels if backend is None else _backend.load(backend)
    rng = np.random.default_rng(cfg.seed)
    code = functional_code(cfg.functional)
    m = cfg.atoms
    best = -math.inf
    best_params = None
    best_mu = None
    for mu in include:
        v = objective(mu, cfg)
        if v > best:
            best, best_mu = v, mu
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        theta = rng.random((n, m)) * (2.0 * math.pi)
        # sqrt of Dirichlet weights as pre-images, so the kernel recovers them exactly up to rounding
        w = rng.dirichlet(np.ones(m), size=n)
        params = np.ascontiguousarray(np.hstack([theta, np.sqrt(w)]))
        vals = kern.batch_objective(params, cfg.k, code, cfg.lam)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_params = params[i]
        done += n
    if best_params is None:
        return best, best_mu
    return best, measure_from_params(best_params)
