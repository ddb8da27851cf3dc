import argparse
import asyncio
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Iterable

import structlog
from prometheus_client import REGISTRY, write_to_textfile
from pydantic import BaseModel, ValidationError

from .bounds import n_zero
from .config import LOG_LEVEL, RunConfig
from .core.codec import hypergraph_to_json, read_hypergraph
from .core.combinatorics import PatternKind, binomial, complete_hypergraph, extremal_candidate
from .core.errors import BudgetExceeded, InvalidHypergraph, TheoryViolation
from .decomposition import phi, phi_matching_formula
from .engines.budget import SearchBudget
from .utils import ceil_div
from .verify import VerificationReport, oracle_grid, run_point, theorem1_grid, theorem2_grid

log = structlog.get_logger()

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3


def configure_logging(level: str) -> None:
    structlog.configure(
        processors=[structlog.processors.add_log_level, structlog.processors.JSONRenderer()],
        wrapper_class=structlog.make_filtering_bound_logger(getattr(logging, level.upper(), logging.INFO)),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


class PhiResult(BaseModel):
    pattern: str
    edges: int
    phi: int
    source: str
    optimal: bool
    status: str = "ok"
    formula: int | None = None
    seconds: float | None = None


def _emit(text: str, path=None) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_gen(cfg: RunConfig) -> int:
    G = complete_hypergraph(cfg.n, cfg.r) if cfg.k is None else extremal_candidate(cfg.n, cfg.r, cfg.k)
    _emit(hypergraph_to_json(G), cfg.out_path)
    log.info("GEN_DONE", n=G.n, r=G.r, edges=G.e)
    return EXIT_OK


def _formula(cfg: RunConfig, r: int) -> int | None:
    if cfg.in_path is not None:
        return None
    if cfg.pattern is PatternKind.TWO_EDGE and cfg.n >= 2 * r - cfg.k:
        return ceil_div(binomial(cfg.n, r), 2)
    if cfg.pattern is PatternKind.K_MATCHING and cfg.k >= 1 and (r < 2 or cfg.n >= n_zero(cfg.k, r)):
        return phi_matching_formula(cfg.n, r, cfg.k)
    return None


def cmd_phi(cfg: RunConfig) -> int:
    G = read_hypergraph(cfg.in_path) if cfg.in_path else complete_hypergraph(cfg.n, cfg.r)
    pattern = cfg.pattern_for(G.r)
    started = time.perf_counter()
    code = EXIT_OK
    try:
        value, d = phi(G, pattern, cfg.budget)
        result = PhiResult(pattern=pattern.label(), edges=G.e, phi=value, source=d.source.value, optimal=d.optimal)
    except BudgetExceeded as e:
        d = e.decomposition
        value = d.size
        result = PhiResult(
            pattern=pattern.label(), edges=G.e, phi=value, source=d.source.value, optimal=False, status="budget"
        )
        code = EXIT_BUDGET
    elapsed = time.perf_counter() - started
    log.info("PHI_TIMING", seconds=round(elapsed, 6), status=result.status)
    result.formula = _formula(cfg, G.r)
    if cfg.timings:
        result.seconds = round(elapsed, 6)
    if cfg.format == "text":
        bound = "upper bound " if result.status == "budget" else ""
        _emit(f"phi = {bound}{result.phi} ({result.source}, {pattern.label()}, {G.e} edges)")
    else:
        _emit(result.model_dump_json(exclude_none=True))
    if cfg.out_path is not None:
        _emit(d.to_json(value), cfg.out_path)
    return code


def verify_points(cfg: RunConfig) -> list[tuple[str, dict[str, Any]]]:
    if cfg.theorem == 1:
        return [("theorem1", dict(n=n, r=r, k=k)) for n, r, k in theorem1_grid(cfg.rmax or 4, cfg.nmax or 9)]
    if cfg.theorem == 2:
        k, r = cfg.k or 2, cfg.r or 2
        nmax = cfg.nmax or n_zero(k, r) + 3
        return [("theorem2", dict(n=n, r=r, k=k)) for n, r, k in theorem2_grid(k, r, nmax)]
    if cfg.inequality is not None:
        params = dict(kind=cfg.inequality, kmax=cfg.kmax or 6, rmax=cfg.rmax or 6, nmax=cfg.nmax or 200, span=cfg.span if cfg.span is not None else 1000)
        return [("inequality", params)]
    if cfg.suite == "monotonicity":
        return [
            ("monotonicity", dict(n=n, r=r, k=k, samples=cfg.samples, seed=cfg.seed))
            for n, r, k in theorem1_grid(cfg.rmax or 4, cfg.nmax or 9)
        ]
    return [
        ("oracle", dict(n=n, r=r, pattern=p, samples=count, seed=cfg.seed))
        for n, r, p, count in oracle_grid(cfg.samples)
    ]


async def run_grid(
    points: Iterable[tuple[str, dict[str, Any]]], budget: SearchBudget, jobs: int
) -> list[VerificationReport]:
    """Reports in grid order, whatever order the workers finish in."""
    points = list(points)
    if jobs <= 1:
        return [run_point(check, params, budget) for check, params in points]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        tasks = [loop.run_in_executor(pool, run_point, check, params, budget) for check, params in points]
        return list(await asyncio.gather(*tasks))


def _dump(report: VerificationReport, timings: bool) -> str:
    return report.model_dump_json(exclude=None if timings else {"timings"})


def cmd_verify(cfg: RunConfig) -> int:
    points = verify_points(cfg)
    log.info("VERIFY_START", points=len(points), jobs=cfg.jobs)
    reports = asyncio.run(run_grid(points, cfg.budget, cfg.jobs))
    lines = "\n".join(_dump(r, cfg.timings) for r in reports)
    if lines:
        _emit(lines, cfg.out_path)
    elif cfg.out_path is not None:
        cfg.out_path.write_text("")
    mismatches = sum(r.mismatch for r in reports)
    budgeted = sum(r.status == "budget" for r in reports)
    log.info("VERIFY_DONE", points=len(reports), mismatches=mismatches, budget=budgeted)
    if mismatches:
        return EXIT_MISMATCH
    return EXIT_BUDGET if budgeted else EXIT_OK


def cmd_probe(cfg: RunConfig) -> int:
    report = run_point("probe", dict(n=cfg.n, r=cfg.r, k=cfg.k, i=cfg.i), cfg.budget)
    if cfg.format == "text":
        verdict = report.extras.get("verdict", report.status)
        _emit(
            f"n={report.n} r={report.r} k={report.k} i={report.i} "
            f"exact={report.constructive} conjectured={report.formula} {verdict}"
        )
    else:
        _emit(_dump(report, cfg.timings))
    if cfg.out_path is not None:
        _emit(_dump(report, cfg.timings), cfg.out_path)
    return EXIT_BUDGET if report.status == "budget" else EXIT_OK


COMMANDS = {"gen": cmd_gen, "phi": cmd_phi, "verify": cmd_verify, "probe": cmd_probe}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--i", type=int)
    common.add_argument("--pattern", choices=[p.value for p in PatternKind])
    common.add_argument("--in", dest="in_path")
    common.add_argument("--out", dest="out_path")
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--budget-nodes", type=int)
    common.add_argument("--budget-seconds", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--metrics-out")
    common.add_argument("--log-level")
    common.add_argument("--timings", action="store_true", default=None)

    parser = _Parser(prog="hdecomp", description="H-decomposition numbers of r-uniform hypergraphs")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="write K_n^r or the extremal candidate as JSON")
    sub.add_parser("phi", parents=[common], help="compute phi_H(G)")
    verify = sub.add_parser("verify", parents=[common], help="run a verification grid")
    verify.add_argument("--theorem", type=int, choices=[1, 2])
    verify.add_argument("--inequality", choices=["6", "ratio"])
    verify.add_argument("--property", dest="suite", choices=["monotonicity", "oracle"])
    verify.add_argument("--rmax", type=int)
    verify.add_argument("--nmax", type=int)
    verify.add_argument("--kmax", type=int)
    verify.add_argument("--span", type=int)
    verify.add_argument("--samples", type=int)
    sub.add_parser("probe", parents=[common], help="compare the common-intersection pattern with the two-branch value")
    return parser


def to_config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(**{k: v for k, v in vars(ns).items() if v is not None})


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    configure_logging(ns.log_level or LOG_LEVEL)
    try:
        cfg = to_config(ns)
    except ValidationError as e:
        log.error("INVALID_ARGUMENTS", errors=[err["msg"] for err in e.errors()])
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](cfg)
    except (InvalidHypergraph, OSError) as e:
        log.error("INVALID_INPUT", err=str(e))
        return EXIT_INPUT
    except TheoryViolation as e:
        log.error("THEORY_VIOLATION", exc_info=e)
        return EXIT_MISMATCH
    finally:
        if cfg.metrics_out is not None:
            write_to_textfile(str(cfg.metrics_out), REGISTRY)


def cli():
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
