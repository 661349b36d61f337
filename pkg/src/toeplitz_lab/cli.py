"""``toeplitz-lab`` command line.

Exit codes: 0 success, 1 usage error, 2 a bound was exceeded, 3 a mapping
failed the starlikeness or contact-order hypothesis.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import _backend
from .functionals import (
    BoundReport,
    Functional,
    bound_for,
    bound_T22,
    bound_T31,
    extremal_coeffs,
    sharp_claimed,
    EXTREMAL_MEASURE,
)
from .reports import RunRecord, append_log, dumps, table_csv
from .scv import (
    Domain,
    DomainKind,
    contact_order_ok,
    extremal_ball,
    extremal_polydisk,
    mapping_from_name,
    one_dim_reference,
    sample_points,
    scv_toeplitz_check,
    starlikeness_probe,
)
from .search import SearchConfig, maximize, non_exceedance_scan

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EXCEEDED = 2
EXIT_HYPOTHESIS = 3

EQ_TOL = 1e-8
EXCEED_TOL = 1e-9


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- verify-extremal ---------------------------------------------------------

def cmd_verify_extremal(k_list, eq_tol: float = EQ_TOL, exceed_tol: float = EXCEED_TOL,
                        n: int = 2) -> tuple[int, list[dict]]:
    """Evaluate every functional at the extremal function and mappings.

    Equality with the closed form is asserted where sharpness is claimed;
    everywhere the value must not exceed the bound.
    """
    cases = []
    code = EXIT_OK
    for k in k_list:
        if k < 1:
            raise UsageError(f"k must be >= 1, got {k}")
        c = extremal_coeffs(k, 4)
        settings = [("disk", c.first, c.second)]
        for F, dom in ((extremal_ball(n, k), Domain.ball(n)), (extremal_polydisk(n, k), Domain.polydisk(n))):
            z = 0.5 * F.meta["u"]
            rep_a = scv_toeplitz_check(F, z, k, Functional.T22, dom, probe_ok=True)
            a = complex(*rep_a.extra["a_k1"])
            b = complex(*rep_a.extra["a_2k1"])
            settings.append((dom.kind.value, a, b))
        for setting, a, b in settings:
            for functional in (Functional.T22, Functional.T31, Functional.FS):
                val = _functional_value(functional, a, b, 0.0)
                rep = BoundReport(
                    functional=functional,
                    k=k,
                    closed_form=bound_for(functional, k, 0.0),
                    empirical_sup=abs(val),
                    witness=EXTREMAL_MEASURE,
                    lam=0.0 if functional is Functional.FS else None,
                    sharp_claimed=sharp_claimed(functional, k),
                )
                asserted = rep.sharp_claimed
                ok = rep.gap >= -exceed_tol and (not asserted or abs(rep.gap) <= eq_tol)
                rep.extra = {"setting": setting, "asserted": asserted, "ok": ok,
                             "value": [val.real, val.imag]}
                if not ok:
                    code = EXIT_EXCEEDED
                    _warn(f"verify-extremal: k={k} {setting} {functional.value}: value {abs(val)!r} "
                          f"vs bound {rep.closed_form!r} (gap {rep.gap:.3e})")
                cases.append(rep.to_dict())
    return code, cases


def _functional_value(functional: Functional, a: complex, b: complex, lam: complex) -> complex:
    if functional is Functional.T22:
        return a * a - b * b
    if functional is Functional.T31:
        return 1 - b * b - 2 * a * a + 2 * a * a * b
    return b - lam * a * a


# --- search ------------------------------------------------------------------

def cmd_search(cfg: SearchConfig, samples: int = 100_000, exceed_tol: float = EXCEED_TOL,
               backend: str | None = None, workers: int = 1) -> tuple[int, dict]:
    res = maximize(cfg, backend=backend, workers=workers)
    scan_max, scan_mu = non_exceedance_scan(cfg, samples, backend=backend)
    bound = cfg.bound
    sup = max(res.best_value, scan_max)
    report = BoundReport(
        functional=cfg.functional,
        k=cfg.k,
        closed_form=bound,
        empirical_sup=sup,
        witness=res.best_measure if res.best_value >= scan_max else scan_mu,
        lam=cfg.lam if cfg.functional is Functional.FS else None,
        sharp_claimed=sharp_claimed(cfg.functional, cfg.k),
    )
    out = {
        "config": cfg.to_dict(),
        "result": res.to_dict(),
        "scan": {"samples": samples, "max": scan_max, "witness": scan_mu.to_dict()},
        "bound": bound,
        "gap": report.gap,
        "report": report.to_dict(),
    }
    code = EXIT_OK
    if report.gap < -exceed_tol:
        code = EXIT_EXCEEDED
        _warn(f"search: bound exceeded for {cfg.functional.value} k={cfg.k}: "
              f"{sup!r} > {bound!r} (gap {report.gap:.3e})")
    return code, out


# --- table -------------------------------------------------------------------

def cmd_table(k_max: int, multistarts: int = 200, seed: int = 0, backend: str | None = None) -> tuple[int, str, list[dict]]:
    if k_max < 1:
        raise UsageError("k-max must be >= 1")
    rows = []
    for k in range(1, k_max + 1):
        row = {"k": k}
        for functional, bound, tag in ((Functional.T22, bound_T22(k), "t22"), (Functional.T31, bound_T31(k), "t31")):
            res = maximize(SearchConfig(k=k, functional=functional, multistarts=multistarts, seed=seed),
                           backend=backend)
            row[f"bound_{tag}"] = bound
            row[f"sup_{tag}"] = res.best_value
            row[f"gap_{tag}"] = bound - res.best_value
        rows.append(row)
    return EXIT_OK, table_csv(rows), rows


# --- scv-check ---------------------------------------------------------------

def _probe_grid(domain: Domain, F, seed: int, extra: int = 6) -> tuple[np.ndarray, list[np.ndarray]]:
    """Primary direction ``u`` (``u_1 = r = 1`` on the polydisk) and the probe points."""
    n = domain.n
    if domain.kind is DomainKind.BALL:
        u = F.meta.get("u")
        if u is None:
            u = np.eye(n, dtype=np.complex128)[0]
    else:
        u = np.full(n, 0.5, dtype=np.complex128)
        u[0] = 1.0
    pts = [R * u for R in (0.2, 0.5, 0.8)]
    pts.extend(sample_points(domain, extra, np.random.default_rng(seed), max_gauge=0.9))
    return u, pts


def cmd_scv_check(domain: Domain, k: int, mapping: str, seed: int = 0, probe_samples: int = 1000,
                  eq_tol: float = EQ_TOL, exceed_tol: float = EXCEED_TOL) -> tuple[int, dict]:
    if k < 1:
        raise UsageError("k must be >= 1")
    try:
        F = mapping_from_name(mapping, domain.n, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    star = starlikeness_probe(F, domain, probe_samples, seed)
    contact = contact_order_ok(F, domain, seed=seed)
    valid = star and contact
    u, pts = _probe_grid(domain, F, seed)
    per_point = []
    exceeded = False
    for z in pts:
        reps = []
        for functional in (Functional.T22, Functional.T31):
            rep = scv_toeplitz_check(F, z, k, functional, domain, probe_ok=valid)
            if rep.gap < -exceed_tol:
                exceeded = True
                _warn(f"scv-check: {functional.value} exceeds bound at z={z!r} (gap {rep.gap:.3e})")
            reps.append(rep.to_dict())
        per_point.append(reps)
    reports = [r for reps in per_point for r in reps]
    primary = per_point[1]  # z = 0.5 u
    out = {
        "domain": domain.kind.value,
        "n": domain.n,
        "k": k,
        "mapping": mapping,
        "starlike": star,
        "contact_order": contact,
        "primary": {r["functional"]: r["empirical_sup"] for r in primary},
        "reports": reports,
    }
    ref = one_dim_reference(F)
    if ref is not None:
        a1, b1 = ref
        pa = primary[0]["extra"]
        a, b = complex(*pa["a_k1"]), complex(*pa["a_2k1"])
        out["one_dim"] = {"a_k1": [a1.real, a1.imag], "a_2k1": [b1.real, b1.imag],
                          "match": bool(abs(a - a1) <= eq_tol and abs(b - b1) <= eq_tol)}
    if not valid:
        _warn(f"scv-check: mapping {mapping!r} fails the hypothesis "
              f"(starlike={star}, contact_order={contact})")
        return EXIT_HYPOTHESIS, out
    if exceeded:
        return EXIT_EXCEEDED, out
    return EXIT_OK, out


# --- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toeplitz-lab", description=__doc__.splitlines()[0])
    p.add_argument("--log", default=None, help="run-log path (default $TOEPLITZ_LAB_LOG or ./runs.jsonl)")
    p.add_argument("--no-log", action="store_true", help="do not append to the run log")
    p.add_argument("--eq-tol", type=float, default=EQ_TOL)
    p.add_argument("--exceed-tol", type=float, default=EXCEED_TOL)
    p.add_argument("--backend", choices=["cython", "python"], default=None)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify-extremal", help="check the extremal functions attain the bounds")
    v.add_argument("--k", type=_k_list, default=[1, 2, 3])
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("search", help="maximise a functional and scan for bound violations")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--functional", required=True, choices=["t22", "t31", "fs"])
    s.add_argument("--lambda", dest="lam", type=_complex_arg, default=0j)
    s.add_argument("--multistarts", type=int, default=200)
    s.add_argument("--atoms", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--local-tol", type=float, default=1e-10)
    s.add_argument("--max-iters", type=int, default=2000)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--workers", type=int, default=1)

    t = sub.add_parser("table", help="CSV of bounds against empirical suprema")
    t.add_argument("--k-max", type=int, required=True)
    t.add_argument("--multistarts", type=int, default=200)
    t.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("scv-check", help="check a mapping on the ball or polydisk")
    c.add_argument("--domain", required=True, choices=["ball", "polydisk"])
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--mapping", required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--probe-samples", type=int, default=1000)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    backend = args.backend
    try:
        if args.command == "verify-extremal":
            config = {"k": args.k, "n": args.n, "eq_tol": args.eq_tol, "exceed_tol": args.exceed_tol}
            code, results = cmd_verify_extremal(args.k, args.eq_tol, args.exceed_tol, n=args.n)
            text = None
        elif args.command == "search":
            cfg = SearchConfig(k=args.k, functional=Functional.parse(args.functional), lam=args.lam,
                               atoms=args.atoms, multistarts=args.multistarts, seed=args.seed,
                               local_tol=args.local_tol, max_iters=args.max_iters)
            config = {"search": cfg.to_dict(), "samples": args.samples, "exceed_tol": args.exceed_tol,
                      "backend": backend or _backend.BACKEND}
            code, res = cmd_search(cfg, args.samples, args.exceed_tol, backend=backend, workers=args.workers)
            results = [res]
            text = None
        elif args.command == "table":
            config = {"k_max": args.k_max, "multistarts": args.multistarts,
                      "backend": backend or _backend.BACKEND}
            code, text, results = cmd_table(args.k_max, args.multistarts, args.seed, backend=backend)
        else:
            domain = Domain(DomainKind(args.domain), args.n)
            config = {"domain": args.domain, "n": args.n, "k": args.k, "mapping": args.mapping,
                      "probe_samples": args.probe_samples}
            code, res = cmd_scv_check(domain, args.k, args.mapping, args.seed, args.probe_samples,
                                      args.eq_tol, args.exceed_tol)
            results = [res]
            text = None
    except UsageError as exc:
        _warn(f"toeplitz-lab: error: {exc}")
        return EXIT_USAGE
    except ValueError as exc:
        _warn(f"toeplitz-lab: error: {exc}")
        return EXIT_USAGE

    record = RunRecord(command=args.command, config=config, results=results, seed=args.seed,
                       wall_time_ms=int((time.perf_counter() - t0) * 1000))
    if text is not None:
        sys.stdout.write(text)
    else:
        print(dumps(record.payload()))
    if not args.no_log:
        append_log(record, args.log)
    return code


if __name__ == "__main__":
    sys.exit(main())
