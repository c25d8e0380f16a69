"""Command-line front end: ``motherbody <subcommand> ...``.

Exit status 0 on success, 2 when the analysis rejects the input (the payload
is ``{"error": code, "detail": ...}``) and 1 on unreadable or malformed
input. JSON is written with sorted keys and carries the numeric settings of
the run under ``"config"``, so repeated runs produce identical bytes.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .errors import MotherbodyError, SchemaError

SUBCOMMANDS = ("analyze", "expand", "eigen", "quad", "strebel", "measures", "verify", "plot")


@dataclass
class RunConfig:
    """Every numeric default of the command line in one place."""

    subcommand: str = "analyze"
    input: str | None = None
    output: str | None = None
    format: str = "json"
    terms: int = 10
    degree_max: int = 200
    probe: float = 3.0
    bins: int = 40
    budget: float | None = None
    tol: float = 1e-10
    seed: int = 0x5EED
    samples: int = 100
    alpha: float | None = None
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    extra: dict = field(default_factory=dict)

    def echo(self) -> dict:
        doc = asdict(self)
        doc.pop("output")
        doc.pop("jobs")            # does not influence results
        doc.update(doc.pop("extra"))
        return doc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _analyze(cfg):
    from .branch import probability_branch_test
    from .polyalg import newton_support

    bp = io.bipoly_from_doc(io.read_json(cfg.input))
    rep = probability_branch_test(bp)
    ns = newton_support(bp)
    return {"report": rep.to_json(), "balanced": ns.M == 0}


def _expand(cfg):
    from .branch import expand_probability_branch, probability_branch_test

    bp = io.bipoly_from_doc(io.read_json(cfg.input))
    rep = probability_branch_test(bp)
    series = expand_probability_branch(bp, cfg.terms)
    doc = series.to_json()
    doc["report"] = rep.to_json()
    return doc


def _eigen(cfg):
    from .eigen import (eigenpolynomial, log_derivative_ratio, operator_from_balanced,
                        roots_bounded_check, root_measure, select_principal_sequence, symbol_residual)

    bp = io.bipoly_from_doc(io.read_json(cfg.input))
    op = operator_from_balanced(bp)
    n = cfg.degree_max
    seq = select_principal_sequence(op, n, n_min=n)
    lam = seq[-1][1]
    pair = eigenpolynomial(op, n, lam)
    rm = root_measure(pair)
    doc = {"operator": op.to_json(), "n": n, "lambda": [lam.real, lam.imag],
           "root_mass": rm.total_mass,
           "max_root_modulus": float(np.max(np.abs(rm.points))) if rm.n else 0.0}
    ex = cfg.extra
    if ex.get("emit_roots"):
        Path(ex["emit_roots"]).write_text(io.roots_csv(sorted(rm.points, key=lambda z: (z.real, z.imag))))
    if ex.get("emit_histogram"):
        Path(ex["emit_histogram"]).write_text(io.dumps(rm.histogram(bins=cfg.bins)))
    if ex.get("check_symbol"):
        L = log_derivative_ratio(pair, cfg.probe)
        doc["symbol_residual"] = {"z": cfg.probe, "value": symbol_residual(op, L, cfg.probe)}
        doc["roots_bounded"] = roots_bounded_check(op, [max(op.k, n // 2), n])
    return doc


def _differential(cfg):
    from .quaddiff import build_theta

    P, Q, R = io.triple_from_doc(io.read_json(cfg.input))
    return build_theta(P, Q, R)


def _quad(cfg):
    from .quaddiff import build_DK0

    qd = _differential(cfg)
    graph = build_DK0(qd, budget=cfg.budget, jobs=cfg.jobs)
    ex = cfg.extra
    if ex.get("emit_graph"):
        Path(ex["emit_graph"]).write_text(io.dumps(graph.to_json()))
    if ex.get("emit_svg"):
        Path(ex["emit_svg"]).write_text(io.graph_svg(qd, graph, graph.launches))
    return {"differential": qd.to_json(), "graph": {"V": graph.V, "E": graph.E, "d": graph.d,
                                                    "components": len(graph.components),
                                                    "euler": graph.euler_check()}}


def _strebel(cfg):
    from .quaddiff import strebel_surrogate

    qd = _differential(cfg)
    res = strebel_surrogate(qd, budget=cfg.budget, jobs=cfg.jobs)
    doc = {"strebel": res.ok, "status": res.status, "reason": res.reason}
    if res.graph is not None:
        doc["graph"] = res.graph.to_json()
    return doc


def _measures(cfg):
    from . import mother
    from .quaddiff import TrajectoryGraph

    ex = cfg.extra
    if ex.get("graph_json"):
        g = TrajectoryGraph.from_json(io.read_json(ex["graph_json"]))
        crit = mother.positivity_criterion(g)
        return {"graph": {"V": g.V, "E": g.E, "d": g.d, "euler": g.euler_check()},
                "admits": crit["admits"], "support": crit["support"],
                "offending": crit["offending"],
                "spanning_subgraphs": [list(s) for s in mother.enumerate_spanning_subgraphs(g)],
                "region_signs": [{"signs": list(e), "support": list(s)}
                                 for e, s in mother.region_sign_supports(g)]}
    qd = _differential(cfg)
    if qd.Q.is_zero:
        cands = mother.q_zero_enumerate(qd, alpha=cfg.alpha)
    else:
        cands = mother.enumerate_candidates(qd, alpha=cfg.alpha, jobs=cfg.jobs)
    return {"candidates": [c.to_json() for c in cands]}


def _verify(cfg):
    from .verify import compare_branch

    ex = cfg.extra
    if not ex.get("measure_json") or not ex.get("equation_json"):
        raise SchemaError("verify needs --measure-json and --equation-json")
    doc = io.read_json(ex["measure_json"])
    if isinstance(doc, dict) and "candidates" in doc:
        idx = int(ex.get("candidate", 0))
        doc = doc["candidates"][idx]
    mu = io.measure_from_doc(doc)
    eq = io.equation_from_doc(io.read_json(ex["equation_json"]))
    return compare_branch(mu, eq, cfg.samples, seed=cfg.seed).to_json()


def _plot(cfg):
    from . import mother
    from .quaddiff import build_DK0

    ex = cfg.extra
    if ex.get("roots_csv"):
        return io.roots_svg(io.read_roots_csv(ex["roots_csv"]))
    qd = _differential(cfg)
    if qd.Q.is_zero:
        from .quaddiff import strebel_surrogate
        res = strebel_surrogate(qd, budget=cfg.budget, jobs=cfg.jobs)
        graph = res.graph if res.graph is not None else build_DK0(qd, budget=cfg.budget)
        cands = mother.q_zero_enumerate(qd, graph) if res.ok else []
    else:
        graph = build_DK0(qd, budget=cfg.budget, jobs=cfg.jobs)
        cands = mother.enumerate_candidates(qd, graph)
    good = [c for c in cands if c.measure is not None and c.positive]
    return io.graph_svg(qd, graph, graph.launches, good[0].measure if good else None)


HANDLERS = {"analyze": _analyze, "expand": _expand, "eigen": _eigen, "quad": _quad,
            "strebel": _strebel, "measures": _measures, "verify": _verify, "plot": _plot}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="motherbody",
                                 description="Motherbody measures of algebraic Cauchy transforms.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", nargs="?", help="input JSON file ('-' for stdin)")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes")
        p.add_argument("--tol", type=float, default=RunConfig.tol)
        return p

    common(sub.add_parser("analyze", help="probability-branch test of a bivariate polynomial"))
    p = common(sub.add_parser("expand", help="series of the probability branch at infinity"))
    p.add_argument("--terms", type=int, default=RunConfig.terms)
    p = common(sub.add_parser("eigen", help="eigenpolynomials of the associated operator"))
    p.add_argument("--degree-max", type=int, default=RunConfig.degree_max)
    p.add_argument("--emit-roots", metavar="CSV")
    p.add_argument("--emit-histogram", metavar="JSON")
    p.add_argument("--check-symbol", action="store_true")
    p.add_argument("--probe", type=float, default=RunConfig.probe)
    p.add_argument("--bins", type=int, default=RunConfig.bins)
    for name, hlp in (("quad", "critical graph of the quadratic differential"),
                      ("strebel", "Strebel test for Q = 0")):
        p = common(sub.add_parser(name, help=hlp))
        p.add_argument("--triple", dest="triple", help="triple JSON (alternative to the positional input)")
        p.add_argument("--budget", type=float, default=None)
        if name == "quad":
            p.add_argument("--emit-graph", metavar="JSON")
            p.add_argument("--emit-svg", metavar="SVG")
    p = common(sub.add_parser("measures", help="enumerate motherbody candidates"))
    p.add_argument("--triple", dest="triple")
    p.add_argument("--graph-json", help="abstract embedded graph: run the positivity criterion only")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--budget", type=float, default=None)
    p = common(sub.add_parser("verify", help="audit a measure against an equation"), needs_input=False)
    p.add_argument("--measure-json", required=True)
    p.add_argument("--equation-json", required=True)
    p.add_argument("--candidate", type=int, default=0)
    p.add_argument("--samples", type=int, default=RunConfig.samples)
    p.add_argument("--seed", type=int, default=RunConfig.seed)
    p = common(sub.add_parser("plot", help="SVG of the critical graph and support, or of a root cloud"))
    p.add_argument("--triple", dest="triple")
    p.add_argument("--roots-csv")
    p.add_argument("--budget", type=float, default=None)
    return ap


_EXTRA = ("emit_roots", "emit_histogram", "check_symbol", "emit_graph", "emit_svg", "graph_json",
          "measure_json", "equation_json", "candidate", "roots_csv")


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    args = vars(ns)
    cfg.input = args.get("triple") or args.get("input")
    for name in ("output", "terms", "degree_max", "probe", "bins", "budget", "tol", "seed",
                 "samples", "alpha"):
        if args.get(name) is not None:
            setattr(cfg, name, args[name])
    if args.get("jobs"):
        cfg.jobs = args["jobs"]
    cfg.extra = {k: args[k] for k in _EXTRA if args.get(k) not in (None, False)}
    cfg.format = "svg" if cfg.subcommand == "plot" else "json"
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    needs_input = cfg.subcommand not in ("verify",) and not (
        cfg.subcommand == "measures" and cfg.extra.get("graph_json")) and not (
        cfg.subcommand == "plot" and cfg.extra.get("roots_csv"))
    if needs_input and not cfg.input:
        raise SchemaError(f"{cfg.subcommand} needs an input file")
    if cfg.terms < 1 or cfg.degree_max < 1 or cfg.samples < 1 or cfg.bins < 1:
        raise SchemaError("counts must be positive")
    if cfg.budget is not None and not cfg.budget > 0:
        raise SchemaError("budget must be positive")
    if cfg.jobs < 1:
        raise SchemaError("jobs must be positive")


def run(cfg: RunConfig) -> tuple:
    """Execute one configuration; returns ``(exit status, text)``."""
    try:
        result = HANDLERS[cfg.subcommand](cfg)
    except MotherbodyError as exc:
        status = 2 if exc.rejection else 1
        return status, io.dumps({"error": exc.code, "detail": exc.detail, "config": cfg.echo()})
    except (OSError, ValueError) as exc:
        return 1, io.dumps({"error": type(exc).__name__, "detail": str(exc), "config": cfg.echo()})
    if isinstance(result, str):
        return 0, result
    result["config"] = cfg.echo()
    return 0, io.dumps(result)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except SchemaError as exc:
        sys.stdout.write(io.dumps({"error": exc.code, "detail": exc.detail}))
        return 1
    status, text = run(cfg)
    if cfg.output and status == 0:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
