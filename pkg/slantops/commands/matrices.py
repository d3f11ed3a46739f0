import argparse
import logging
from typing import Dict, Optional

import pandas as pd

from ..config import settings
from ..schemas import BenchRecord, Manifest, RunConfig
from ..services.analysis import AXES, decay_profile
from ..services.bench import DEFAULT_KINDS, bench_service, default_symbol
from ..services.report import DECAY_COLUMNS, emit_figure_data, environment, profile_table
from ..services.symbols import ANALYTIC_EXP, ANTI_GEOMETRIC, HarmonicSymbol, family_symbol
from .common import build, parse_dims, parse_kinds, read_symbol, writer

logger = logging.getLogger(__name__)


def run_build(config: RunConfig) -> Manifest:
    """Matrix export, one file per operator kind"""
    symbol = read_symbol(config)
    matrices = [build(config, kind, symbol) for kind in parse_kinds(config)]

    out = writer(config)
    for A in matrices:
        out.write_matrix(f"matrix_{A.kind.value}", A)
    return out.finalize()


def decay_symbols(config: RunConfig) -> Dict[str, Optional[HarmonicSymbol]]:
    """Panel prefix to symbol: the given symbol, or e^z against 1/(1 - conj(z)) at --degree"""
    if config.symbol is not None or config.family:
        return {"decay": read_symbol(config)}
    logger.info(f"No symbol given, pairing {ANALYTIC_EXP} with {ANTI_GEOMETRIC} at degree {config.degree}")
    return {
        "decay_analytic": family_symbol(ANALYTIC_EXP, config.degree),
        "decay_anti-analytic": family_symbol(ANTI_GEOMETRIC, config.degree),
    }


def run_decay(config: RunConfig) -> Manifest:
    """Row, column and diagonal-index decay profiles per symbol and operator kind"""
    kinds = parse_kinds(config)
    panels = {}
    for prefix, symbol in decay_symbols(config).items():
        for kind in kinds:
            A = build(config, kind, symbol)
            for axis in AXES:
                profile = decay_profile(A, axis)
                panels[f"{prefix}_{kind.value}_{axis}"] = profile_table(profile.values, *DECAY_COLUMNS)

    inputs = config.model_dump(mode="json", exclude_none=True)
    return emit_figure_data(config.subcommand, panels, config.output, inputs, config.format)


def run_bench(config: RunConfig) -> Manifest:
    """Median construction and eigen-solve timings; the environment goes into the manifest"""
    kinds = parse_kinds(config, default=list(DEFAULT_KINDS))
    symbol = read_symbol(config)
    if symbol is None and any(k.requires_symbol for k in kinds):
        symbol = default_symbol()
        logger.info("No symbol given, benchmarking the degree-15 harmonic exponential")

    records = bench_service.bench(kinds, symbol, config.params, config.dims, config.reps, config.convention, config.tol)
    table = pd.DataFrame([r.model_dump() for r in records], columns=list(BenchRecord.model_fields))

    out = writer(config)
    out.write_table("bench", table)
    return out.finalize(env=environment())


COMMANDS = {
    "build": run_build,
    "decay": run_decay,
    "bench": run_bench,
}


def register(subparsers, common: argparse.ArgumentParser, kinds_help: str) -> None:
    p = subparsers.add_parser("build", parents=[common], help="export operator truncations")
    p.add_argument("--kind", help=kinds_help)

    p = subparsers.add_parser("decay", parents=[common], help="entry decay profiles")
    p.add_argument("--kind", help=kinds_help)

    p = subparsers.add_parser("bench", parents=[common], help="construction and eigen-solve timings")
    p.add_argument("--kind", help=f"{kinds_help} (default: SlantToeplitz,SlantLittleHankel)")
    p.add_argument("--dims", required=True, type=parse_dims, help="comma separated dimensions, e.g. 25,50,100")
    p.add_argument("--reps", type=int, default=settings.BENCH_REPS, help="repetitions per timing (>= 3)")
