"""Command-line driver: model generation, end-to-end analysis, sweeps.

Exit codes: 0 ok, 1 required detection absent, 2 internal numerical
failure, 3 input/validation error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .detection import (
    CASE1,
    CASE2,
    GENUINE,
    NO_GENSYM,
    canonicalize,
    detect,
    reconstruct_case1,
    reconstruct_case2,
    verify_triple,
)
from .models import (
    ModelBundle,
    angular_block,
    fermion_chain,
    hardcore_chain,
    involution_example,
    jaynes_cummings,
    projection_example,
)
from .multiplets import canonical_eigenbasis, partition
from .operators import NumericalError, Tolerance, hermitian_eigh
from .serialization import (
    complex_pair,
    dump_json,
    file_digest,
    load_operator,
    save_operator,
)
from .stability import case_counts, scan_spectrum_stability

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_NUMERICAL = 2
EXIT_INPUT = 3


def parse_complex(text: str) -> complex:
    """Parse '0.1+0.05i' style complex literals (i or j accepted)."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {text!r}")


def _model_args(sub: argparse.ArgumentParser):
    sub.add_argument("name", choices=["angular", "jc", "fermion",
                                      "hardcore", "projection", "involution"])
    sub.add_argument("--l", type=int, default=1)
    sub.add_argument("--en", type=float, default=0.0)
    sub.add_argument("--g", type=float, default=0.1)
    sub.add_argument("--hbar", type=float, default=1.0)
    sub.add_argument("--omega", type=float, default=1.0)
    sub.add_argument("--omega0", type=float, default=1.0)
    sub.add_argument("--kappa", type=float, default=0.1)
    sub.add_argument("--cutoff", type=int, default=8)
    sub.add_argument("--sites", type=int, default=4)
    sub.add_argument("--eps", type=float, default=1.0)
    sub.add_argument("--sources", type=str, default="",
                     help="comma-separated complex source amplitudes")
    sub.add_argument("--z", type=str, default="0.1")
    sub.add_argument("--dim", type=int, default=8)
    sub.add_argument("--seed", type=int, default=0)


def build_model(args: argparse.Namespace) -> ModelBundle:
    name = args.name
    if name == "angular":
        return angular_block(args.l, args.en, args.g, args.hbar)
    if name == "jc":
        return jaynes_cummings(args.omega0, args.omega, args.kappa,
                               args.cutoff, args.hbar)
    if name == "fermion":
        sources = None
        if args.sources:
            sources = [parse_complex(s) for s in args.sources.split(",")]
        return fermion_chain(args.sites, args.eps, sources)
    if name == "hardcore":
        return hardcore_chain(args.sites, parse_complex(args.z))
    if name == "projection":
        return projection_example(args.dim, args.seed)
    if name == "involution":
        return involution_example(args.dim, args.seed)
    raise ValueError(f"unknown model {name!r}")


def run_model(args: argparse.Namespace) -> int:
    bundle = build_model(args)
    prefix = args.out_prefix
    save_operator(bundle.h, f"{prefix}H.json")
    save_operator(bundle.m, f"{prefix}M.json")
    meta = {
        "model": args.name,
        "params": bundle.params,
        "basis_doc": bundle.basis_doc,
    }
    if bundle.known is not None:
        save_operator(bundle.known.r, f"{prefix}R.json")
        meta["known_gamma"] = complex_pair(bundle.known.gamma)
    dump_json(meta, f"{prefix}meta.json")
    return EXIT_OK


def _detection_record(result) -> dict:
    return {
        "kind": result.kind,
        "gamma1": result.gamma1,
        "gamma2": result.gamma2,
        "residual": result.residual,
        "conditioning_flag": result.conditioning_flag,
    }


def _triple_record(triple, report) -> dict:
    return {
        "gamma": complex_pair(triple.gamma),
        "residual_sum": triple.residual_sum,
        "residual_h0m": triple.residual_h0m,
        "residual_ladder": triple.residual_ladder,
        "commutes_rdr_m": triple.commutes_rdr_m,
        "commutes_rrd_m": triple.commutes_rrd_m,
        "commutes_rdr_h0": triple.commutes_rdr_h0,
        "commutes_rrd_h0": triple.commutes_rrd_h0,
        "degenerate": report.degenerate,
        "verified": report.passed,
    }


def _partition_record(part, h_spec, m_spec) -> dict:
    classes = []
    for members, sig, label in zip(part.classes, part.signatures, part.labels):
        classes.append({
            "members": list(members),
            "eigenvalues": [float(h_spec.eigenvalues[i]) for i in members],
            "support_clusters": list(sig),
            "support_eigenvalues": [m_spec.cluster_value(k) for k in sig],
            "label": label,
        })
    return {"classes": classes}


def _stability_record(records) -> dict:
    rows = []
    for rec in records:
        row = {
            "index": rec.index,
            "eigenvalue": rec.eigenvalue,
            "stable": rec.stable,
            "cases": list(rec.cases),
            "primary_case": rec.primary_case,
            "coeffs": [complex_pair(c) for c in rec.coeffs],
            "r_annihilates": rec.r_annihilates,
            "rd_annihilates": rec.rd_annihilates,
            "sum_annihilates": rec.sum_annihilates,
        }
        if rec.partner is not None:
            row["partner"] = {
                "z": complex_pair(rec.partner.z),
                "e_second": rec.partner.e_second,
                "residual": rec.partner.residual,
            }
        rows.append(row)
    counts = case_counts(records)
    return {"records": rows,
            "counts": {str(k): v for k, v in sorted(counts.items())}}


def analyze_pair(h, m, tol: Tolerance, digests: Optional[dict] = None) -> dict:
    """Full pipeline on one (H, M) pair; returns the report document."""
    report = {
        "tool": {"name": "gensym", "version": __version__},
        "tolerances": {"atol": tol.atol, "rtol": tol.rtol},
        "inputs": digests or {},
    }
    result = detect(h, m, tol)
    report["detection"] = _detection_record(result)
    h_spec = hermitian_eigh(h, tol)
    report["spectrum"] = [float(v) for v in h_spec.eigenvalues]
    report["triple"] = None
    report["multiplets"] = None
    report["stability"] = None
    report["skipped"] = None

    if result.kind == GENUINE:
        report["skipped"] = "genuine symmetry: H and M commute, R = 0"
        return report
    if result.kind == NO_GENSYM:
        report["skipped"] = "no generalised symmetry detected"
        return report

    if result.kind == CASE1:
        triple = reconstruct_case1(h, m, result.gamma2, tol)
        report["triple"] = _triple_record(triple, verify_triple(h, m, triple, tol))
        report["skipped"] = "case 1 (imaginary gamma): stability needs real gamma"
        return report

    triple = canonicalize(reconstruct_case2(h, m, result.gamma, tol))
    verification = verify_triple(h, m, triple, tol)
    report["triple"] = _triple_record(triple, verification)
    if not result.real_gamma:
        report["skipped"] = "complex gamma: stability needs real gamma"
        return report

    m_spec = hermitian_eigh(m, tol)
    h_spec = canonical_eigenbasis(h, m, tol)
    part = partition(h_spec, m_spec, tol)
    report["multiplets"] = _partition_record(part, h_spec, m_spec)
    records = scan_spectrum_stability(h_spec, triple, m_spec, tol)
    report["stability"] = _stability_record(records)
    return report


def run_analyze(args: argparse.Namespace) -> int:
    tol = Tolerance(rtol=args.tol) if args.tol is not None else Tolerance()
    h = load_operator(args.hamiltonian)
    m = load_operator(args.symmetry)
    digests = {
        "hamiltonian": {"path": args.hamiltonian,
                        "sha256": file_digest(args.hamiltonian)},
        "symmetry": {"path": args.symmetry,
                     "sha256": file_digest(args.symmetry)},
    }
    report = analyze_pair(h, m, tol, digests)
    text = dump_json(report, args.out)
    if args.out is None:
        print(text)
    if args.require and report["detection"]["kind"] == NO_GENSYM:
        return EXIT_NOT_FOUND
    return EXIT_OK


def run_sweep(args: argparse.Namespace) -> int:
    if args.steps < 2:
        raise ValueError(f"steps must be >= 2, got {args.steps}")
    sweepable = {"en", "g", "hbar", "omega", "omega0", "kappa", "eps"}
    if args.param not in sweepable:
        raise ValueError(f"--param must be one of {sorted(sweepable)}")
    values = np.linspace(args.start, args.stop, args.steps)
    tol = Tolerance()
    gammas: List[float] = []
    lines = ["param,index,eigenvalue,multiplet_class"]
    for value in values:
        setattr(args, args.param, float(value))
        bundle = build_model(args)
        result = detect(bundle.h, bundle.m, tol)
        if result.kind == CASE2:
            gammas.append(result.gamma1)
        m_spec = hermitian_eigh(bundle.m, tol)
        h_spec = canonical_eigenbasis(bundle.h, bundle.m, tol)
        part = partition(h_spec, m_spec, tol)
        class_of = {}
        for c, members in enumerate(part.classes):
            for i in members:
                class_of[i] = c
        for i in range(h_spec.dim):
            lines.append(f"{float(value)!r},{i},"
                         f"{float(h_spec.eigenvalues[i])!r},{class_of[i]}")
    if gammas and max(gammas) - min(gammas) > 1e-8:
        raise NumericalError(
            f"gamma drifts across the sweep: {min(gammas)} .. {max(gammas)}")
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gensym",
        description="Generalised-symmetry detection and spectrum analysis")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_analyze = subs.add_parser("analyze", help="run the full pipeline on a pair")
    p_analyze.add_argument("--hamiltonian", required=True)
    p_analyze.add_argument("--symmetry", required=True)
    p_analyze.add_argument("--tol", type=float, default=None)
    p_analyze.add_argument("--require", action="store_true")
    p_analyze.add_argument("--out", default=None)
    p_analyze.set_defaults(func=run_analyze)

    p_model = subs.add_parser("model", help="write model operator files")
    _model_args(p_model)
    p_model.add_argument("--out-prefix", required=True, dest="out_prefix")
    p_model.set_defaults(func=run_model)

    p_sweep = subs.add_parser("sweep", help="spectral flow over one parameter")
    _model_args(p_sweep)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--from", type=float, required=True, dest="start")
    p_sweep.add_argument("--to", type=float, required=True, dest="stop")
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=run_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"gensym: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"gensym: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
