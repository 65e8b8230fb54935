"""Command-line front end.

Every subcommand reads one graph (canonical JSON, or a message-count CSV),
prints a JSON report to stdout and, with ``--out``, writes the same report
plus any data files into that directory. Exit codes: 0 success, 1 analysis
error, 2 input error; errors go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .certify import certify_rEENN, certify_rEEP, consensus_verdict
from .design import consensus_pipeline, design_modified_flow
from .diffusion import influence_vector, is_hermitian, is_weight_balanced, random_walk_laplacian
from .errors import AnalysisError, ClxError, InputError, NegativeCount, ParseError
from .flows import draw_initial_state, simulate, trajectory_to_csv
from .graphcore import ComplexWeight, build_digraph, laplacian, load_graph, structural_connectivity
from .schema import validate
from .spectral import corank, eig, kernel_pair

__all__ = ["main", "build_parser", "ingest_eies", "run"]

log = logging.getLogger("clx")

SUBCOMMANDS = ("analyze", "certify", "simulate", "design", "diffuse", "pipeline")


def ingest_eies(path):
    """Read ``i,j,messages_ij,messages_ji`` rows into a digraph.

    Edge ``i -> j`` gets weight ``messages_ij + 1j * messages_ji``; rows with
    both counts zero add no edge. A header row is skipped. The node count is
    one more than the largest index.
    """
    edges, top = [], -1
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                i, j, mij, mji = (int(c.strip()) for c in row)
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"{path}:{lineno}: fields must be integers") from None
            if mij < 0 or mji < 0:
                raise NegativeCount(f"{path}:{lineno}: message counts must be nonnegative")
            if i < 0 or j < 0:
                raise ParseError(f"{path}:{lineno}: node indices must be nonnegative")
            top = max(top, i, j)
            if mij == 0 and mji == 0:
                continue
            edges.append((i, j, ComplexWeight(float(mij), float(mji))))
    if top < 0:
        raise ParseError(f"{path}: no data rows")
    return build_digraph(edges, top + 1)


def _load(args):
    if args.fixture:
        return fixtures.graph(args.fixture)
    if not args.input:
        raise InputError("one of --input or --fixture is required")
    p = Path(args.input)
    if p.suffix.lower() == ".csv":
        return ingest_eies(p)
    try:
        return load_graph(p)
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc}") from None


def _cplx(z):
    return [{"re": float(c.real), "im": float(c.imag)} for c in np.ravel(z)]


def _analyze(g, args):
    L = laplacian(g).L
    conn = structural_connectivity(g)
    dec = eig(L)
    try:
        verdict = consensus_verdict(L).to_dict()
    except AnalysisError as exc:
        log.info("no consensus verdict: %s", exc)
        verdict = None
    return {
        "n": g.n,
        "connectivity": conn.to_dict(),
        "spectrum": dec.to_dict(),
        "corank": corank(L),
        "verdict": verdict,
    }, {}


def _certify(g, args):
    L = laplacian(g).L
    kw = {} if args.tol_zero is None else {"tol_zero": args.tol_zero}
    return {
        "rEEP": certify_rEEP(L).to_dict(),
        "rEENN": certify_rEENN(L, **kw).to_dict(),
        "consensus": consensus_verdict(L).to_dict(),
    }, {}


def _default_t_end(L):
    lam = np.linalg.eigvals(L)
    pos = lam.real[lam.real > 1e-9 * max(1.0, np.abs(L).sum(axis=1).max())]
    return 20.0 / pos.min() if pos.size else 1.0


def _simulate(g, args):
    L = laplacian(g).L
    try:
        w = kernel_pair(L).w
    except ClxError:
        w = None
    x0 = draw_initial_state(g.n, w, args.seed)
    t_end = args.t_end if args.t_end is not None else _default_t_end(L)
    traj = simulate(L, x0, t_end, args.samples, args.method)
    return traj.summary(), {"trajectory.csv": trajectory_to_csv(traj)}


def _design(g, args):
    L = laplacian(g).L
    d = design_modified_flow(L, args.targets)
    out = d.to_dict()
    return out, {}


def _diffuse(g, args):
    infl = influence_vector(laplacian(g).L)
    out = infl.to_dict()
    out["weight_balanced"] = is_weight_balanced(g)
    out["hermitian"] = is_hermitian(g)
    try:
        rw = random_walk_laplacian(g)
        out["random_walk"] = {"is_real": rw.is_real, "imag_max": rw.imag_max,
                              "matrix": [_cplx(r) for r in rw.matrix]}
    except ClxError as exc:
        out["random_walk"] = None
        log.info("random-walk Laplacian unavailable: %s", exc)
    return out, {}


def _pipeline(g, args):
    res = consensus_pipeline(g, targets=args.targets, t_end=args.t_end, num_samples=args.samples,
                             method=args.method, seed=args.seed)
    return res.to_dict(), {"trajectory.csv": trajectory_to_csv(res.trajectory)}


_HANDLERS = {
    "analyze": _analyze,
    "certify": _certify,
    "simulate": _simulate,
    "design": _design,
    "diffuse": _diffuse,
    "pipeline": _pipeline,
}


def _targets(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"targets must be comma-separated reals, got {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(
        prog="clx",
        description="Consensus analysis of Laplacian flows on complex-weighted digraphs.",
        epilog="Set CLX_LOG=DEBUG|INFO|WARNING for diagnostic logging on stderr. "
               "Exit codes: 0 success, 1 analysis error, 2 input error.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "analyze": "connectivity, spectrum and consensus verdict",
        "certify": "rEEP / rEENN certificates and consensus verdict",
        "simulate": "trajectory of x' = -Lx (CSV written to --out)",
        "design": "modified Laplacian with the nonzero spectrum placed at positive targets",
        "diffuse": "random-walk Laplacian and influence vector",
        "pipeline": "decide consensus, modify the flow if needed, simulate",
    }
    for name in SUBCOMMANDS:
        s = sub.add_parser(name, help=helps[name], description=helps[name])
        src = s.add_mutually_exclusive_group()
        src.add_argument("--input", help="graph JSON, or a .csv of i,j,messages_ij,messages_ji rows")
        src.add_argument("--fixture", choices=fixtures.names(), help="use a bundled example graph")
        s.add_argument("--out", help="directory for report and data files")
        s.add_argument("--seed", type=int, default=42, help="seed for the initial state draw (default 42)")
        s.add_argument("--t-end", type=float, default=None, help="simulation horizon (default 20/gap)")
        s.add_argument("--samples", type=int, default=201, help="number of sample times (default 201)")
        s.add_argument("--tol-zero", type=float, default=None,
                       help="relative tolerance of the nonnegativity test (default 1e-9)")
        s.add_argument("--targets", type=_targets, default=None,
                       help="comma-separated positive targets, in reduced-spectrum order")
        s.add_argument("--method", choices=("exp", "rk4"), default="exp", help="integrator (default exp)")
    return p


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def run(args) -> int:
    g = _load(args)
    report, files = _HANDLERS[args.command](g, args)
    validate(args.command, report)
    text = _dump(report)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(text, encoding="utf-8")
        for name, body in files.items():
            with open(out / name, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
    return 0


def main(argv=None) -> int:
    level = os.environ.get("CLX_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except InputError as exc:
        sys.stderr.write(_dump(exc.to_dict()))
        return 2
    except AnalysisError as exc:
        sys.stderr.write(_dump(exc.to_dict()))
        return 1


if __name__ == "__main__":
    sys.exit(main())
