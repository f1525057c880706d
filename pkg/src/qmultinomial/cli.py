"""Command-line front end.

Subcommands ``dist``, ``moments``, ``suppress`` and ``verify`` print a
table either as JSON (an object with a ``"rows"`` array) or as CSV with a
header row. Floats are written in their shortest round-trip form, so
parsing the output reproduces the computed doubles exactly.

Exit codes: 0 success, 2 bad configuration, 3 exact-count capacity
exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from qmultinomial.combinat import CapacityError, enumerate_compositions
from qmultinomial.optics import (
    DEFAULT_TOL,
    MatrixFormatError,
    UnitarityError,
    beam_splitter,
    fourier,
    random_unitary,
    read_matrix,
    tritter,
)
from qmultinomial.oracle import p_via_determinant, p_via_permanent
from qmultinomial.statistics import (
    MAX_ORDER,
    covariance,
    cumulants_from_factorial,
    moment_report,
    moments_bruteforce,
)
from qmultinomial.suppress import SUPPRESSION_THRESHOLD, scan_suppressed
from qmultinomial.transition import (
    CollisionError,
    Statistics,
    output_distribution,
    p_fermionic,
    p_quantum,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4

TOL_ENV = "QMULTINOMIAL_TOL"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    matrix: np.ndarray | None
    matrix_label: str
    input: tuple[int, ...] | None
    fmt: str = "json"
    tol: float = DEFAULT_TOL
    seed: int = 0
    extra: dict = field(default_factory=dict)


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{TOL_ENV}={raw!r} is not a number") from None


def parse_counts(text: str) -> tuple[int, ...]:
    try:
        counts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"composition must be comma-separated integers, got {text!r}") from None
    if any(x < 0 for x in counts):
        raise ConfigError(f"composition has negative counts: {text!r}")
    return counts


def parse_floats(text: str, count: int) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"expected {count} comma-separated numbers, got {text!r}") from None
    if len(values) != count:
        raise ConfigError(f"expected {count} comma-separated numbers, got {text!r}")
    return values


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _add_matrix_source(p: argparse.ArgumentParser, required: bool) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--bs", type=float, metavar="T", help="beam splitter with transmittance T")
    src.add_argument("--fourier", type=int, metavar="K", help="K-port DFT interferometer")
    src.add_argument("--tritter", metavar="T1,T2,T3,PHI", help="three-port interferometer: mixing angles and phase")
    src.add_argument("--random", type=int, metavar="K", help="Haar-random K-port unitary (see --seed)")
    src.add_argument("--matrix", metavar="PATH", help="matrix JSON file {k, re, im}")
    p.add_argument("--allow-nonunitary", action="store_true", help="accept a non-unitary --matrix file")
    p.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float, default=None, help=f"tolerance (default ${TOL_ENV} or {DEFAULT_TOL:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmultinomial",
        description="Exact photon-number statistics of linear interferometers via routing matrices.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dist", help="output distribution for one input")
    _add_matrix_source(p, required=True)
    p.add_argument("--input", required=True, metavar="N1,N2,...")
    _add_common(p)

    p = sub.add_parser("moments", help="factorial moments, cumulants and covariances of one output port")
    _add_matrix_source(p, required=True)
    p.add_argument("--input", required=True, metavar="N1,N2,...")
    p.add_argument("--mode", type=int, default=1, help="output port, numbered from 1")
    _add_common(p)

    p = sub.add_parser("suppress", help="list suppressed outputs")
    _add_matrix_source(p, required=True)
    p.add_argument("--input", required=True, metavar="N1,N2,...")
    p.add_argument("--threshold", type=float, default=SUPPRESSION_THRESHOLD)
    _add_common(p)

    p = sub.add_parser("verify", help="routing-class sums against the permanent oracle")
    _add_matrix_source(p, required=False)
    p.add_argument("--k", type=int, default=None, help="only this port count")
    p.add_argument("--m", type=int, default=None, help="only this photon number")
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--seeds", type=int, default=20, help="number of random unitaries per port count")
    _add_common(p)
    return parser


def _matrix_from_args(args, tol: float) -> tuple[np.ndarray | None, str]:
    if getattr(args, "bs", None) is not None:
        try:
            return beam_splitter(args.bs), f"bs:{args.bs!r}"
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if getattr(args, "fourier", None) is not None:
        if args.fourier < 2:
            raise ConfigError("--fourier needs K >= 2")
        return fourier(args.fourier), f"fourier:{args.fourier}"
    if getattr(args, "tritter", None) is not None:
        return tritter(*parse_floats(args.tritter, 4)), f"tritter:{args.tritter}"
    if getattr(args, "random", None) is not None:
        if args.random < 2:
            raise ConfigError("--random needs K >= 2")
        return random_unitary(args.random, args.seed), f"random:{args.random}:{args.seed}"
    if getattr(args, "matrix", None) is not None:
        try:
            return read_matrix(args.matrix, tol=tol, allow_nonunitary=args.allow_nonunitary), args.matrix
        except (OSError, MatrixFormatError, UnitarityError) as exc:
            raise ConfigError(str(exc)) from None
    return None, ""


def make_config(args) -> RunConfig:
    tol = args.tol if args.tol is not None else default_tol()
    U, label = _matrix_from_args(args, tol)
    comp = None
    if getattr(args, "input", None) is not None:
        comp = parse_counts(args.input)
        if len(comp) != U.shape[0]:
            raise ConfigError(f"input has {len(comp)} ports but the matrix has {U.shape[0]}")
    extra = {k: v for k, v in vars(args).items() if k in ("mode", "threshold", "k", "m", "k_max", "m_max", "seeds")}
    return RunConfig(args.subcommand, U, label, comp, args.fmt, tol, args.seed, extra)


# --------------------------------------------------------------------------
# subcommands; each returns (payload dict with "rows", exit code)
# --------------------------------------------------------------------------


def _nonneg(p: float) -> float:
    return 0.0 if -1e-14 <= p < 0.0 else p


def cmd_dist(cfg: RunConfig) -> tuple[dict, int]:
    U, n = cfg.matrix, cfg.input
    fermion_ok = all(x <= 1 for x in n)
    rows = []
    for c in enumerate_compositions(sum(n), len(n)):
        rep = p_quantum(U, n, c)
        row = {
            "output": list(c),
            "p_boson": _nonneg(rep.probability),
            "p_classical": _nonneg(rep.output_prefactor * rep.incoherent_sum),
            "p_fermion": None,
            "ratio": rep.ratio,
        }
        if fermion_ok:
            row["p_fermion"] = _nonneg(p_fermionic(U, n, c).probability) if all(x <= 1 for x in c) else 0.0
        rows.append(row)
    return {"matrix": cfg.matrix_label, "input": list(n), "rows": rows}, EXIT_OK


def cmd_moments(cfg: RunConfig) -> tuple[dict, int]:
    U, n = cfg.matrix, cfg.input
    k = len(n)
    mode = cfg.extra.get("mode", 1)
    if not 1 <= mode <= k:
        raise ConfigError(f"--mode must lie in 1..{k}")
    j = mode - 1
    report = moment_report(U, n, j)
    dist_q = output_distribution(U, n, Statistics.BOSON)
    dist_cl = output_distribution(U, n, Statistics.DISTINGUISHABLE)
    brute_q = moments_bruteforce(dist_q, j)
    brute_c = moments_bruteforce(dist_cl, j)

    def row(name, cq, bq, cc, bc):
        return {
            "quantity": name,
            "closed_quantum": cq,
            "brute_quantum": bq,
            "absdiff_quantum": abs(cq - bq),
            "closed_classical": cc,
            "brute_classical": bc,
            "absdiff_classical": abs(cc - bc),
        }

    def brute_cov(dist, l):
        mean_j = sum(p * c[j] for c, p in dist)
        mean_l = sum(p * c[l] for c, p in dist)
        return sum(p * c[j] * c[l] for c, p in dist) - mean_j * mean_l

    rows = []
    for r in range(MAX_ORDER):
        rows.append(row(f"factorial_moment_{r + 1}", report.factorial_moments_quantum[r], brute_q[r],
                        report.factorial_moments_classical[r], brute_c[r]))
    kq_b = cumulants_from_factorial(brute_q)
    kc_b = cumulants_from_factorial(brute_c)
    for r in range(4):
        rows.append(row(f"cumulant_{r + 1}", report.cumulants_quantum[r], kq_b[r],
                        report.cumulants_classical[r], kc_b[r]))
    for l in range(k):
        if l != j:
            cov_q, cov_cl = covariance(U, n, j, l)
            rows.append(row(f"covariance_{mode}_{l + 1}", cov_q, brute_cov(dist_q, l),
                            cov_cl, brute_cov(dist_cl, l)))
    payload = {
        "matrix": cfg.matrix_label,
        "input": list(n),
        "mode": mode,
        "mean": report.mean,
        "variance_quantum": report.variance_quantum,
        "variance_classical": report.variance_classical,
        "variance_ratio": report.variance_ratio,
        "rows": rows,
    }
    return payload, EXIT_OK


def cmd_suppress(cfg: RunConfig) -> tuple[dict, int]:
    threshold = cfg.extra.get("threshold", SUPPRESSION_THRESHOLD)
    records = scan_suppressed(cfg.matrix, cfg.input, threshold)
    rows = [
        {"output": list(r.output), "probability": r.probability, "rule": r.predicted_by_rule}
        for r in records
    ]
    return {"matrix": cfg.matrix_label, "input": list(cfg.input), "threshold": threshold, "rows": rows}, EXIT_OK


def check_matrix(U, m: int, tol: float) -> dict:
    """Oracle and normalization deviations of one matrix at photon number ``m``."""
    k = U.shape[0]
    comps = enumerate_compositions(m, k)
    oracle_dev = fermion_dev = norm_dev = 0.0
    for n in comps:
        totals = {kind: 0.0 for kind in Statistics}
        free_n = all(x <= 1 for x in n)
        for c in comps:
            rep = p_quantum(U, n, c)
            oracle_dev = max(oracle_dev, abs(rep.probability - p_via_permanent(U, n, c)))
            totals[Statistics.BOSON] += rep.probability
            totals[Statistics.DISTINGUISHABLE] += rep.output_prefactor * rep.incoherent_sum
            if free_n and all(x <= 1 for x in c):
                pf = p_fermionic(U, n, c).probability
                fermion_dev = max(fermion_dev, abs(pf - p_via_determinant(U, n, c)))
                totals[Statistics.FERMION] += pf
        for kind, total in totals.items():
            if kind is Statistics.FERMION and not free_n:
                continue
            norm_dev = max(norm_dev, abs(total - 1.0))
    passed = oracle_dev < tol and fermion_dev < tol and norm_dev < tol
    return {
        "k": k,
        "m": m,
        "oracle_max_dev": oracle_dev,
        "fermion_max_dev": fermion_dev,
        "normalization_max_dev": norm_dev,
        "pass": passed,
    }


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    e = cfg.extra
    m_values = [e["m"]] if e.get("m") is not None else list(range(1, e.get("m_max", 5) + 1))
    rows = []
    if cfg.matrix is not None:
        for m in m_values:
            rows.append({"matrix": cfg.matrix_label, **check_matrix(cfg.matrix, m, cfg.tol)})
    else:
        k_values = [e["k"]] if e.get("k") is not None else list(range(2, e.get("k_max", 4) + 1))
        if any(k < 2 for k in k_values) or any(m < 0 for m in m_values):
            raise ConfigError("verify needs k >= 2 and m >= 0")
        for k in k_values:
            for seed in range(e.get("seeds", 20)):
                U = random_unitary(k, seed)
                for m in m_values:
                    rows.append({"matrix": f"random:{k}:{seed}", **check_matrix(U, m, cfg.tol)})
    passed = all(r["pass"] for r in rows)
    payload = {
        "tol": cfg.tol,
        "pass": passed,
        "oracle_max_dev": max((r["oracle_max_dev"] for r in rows), default=0.0),
        "normalization_max_dev": max((r["normalization_max_dev"] for r in rows), default=0.0),
        "rows": rows,
    }
    return payload, EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {"dist": cmd_dist, "moments": cmd_moments, "suppress": cmd_suppress, "verify": cmd_verify}


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return " ".join(str(x) for x in value)
    return str(value)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=1)
    rows = payload["rows"]
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        header = list(rows[0].keys())
        writer.writerow(header)
        for r in rows:
            writer.writerow([_csv_cell(r[h]) for h in header])
    return buf.getvalue().rstrip("\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        payload, code = COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, CollisionError) as exc:
        print(f"qmultinomial: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"qmultinomial: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    print(render(payload, cfg.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
