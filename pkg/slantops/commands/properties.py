import argparse
import logging

import pandas as pd

from ..errors import ValidationError
from ..schemas import Manifest, RunConfig
from ..services.analysis import commutator_norms, compactness_tail, hilbert_schmidt_tail, self_commutator_defect
from ..services.report import COMMUTATOR_COLUMNS, TAIL_COLUMNS
from ..services.spectral import operator_norm
from ..services.symbols import COEFFICIENT_FAMILIES, linear_dependence
from .common import build, parse_dims, parse_kinds, read_symbol, writer

logger = logging.getLogger(__name__)


def run_commutator(config: RunConfig) -> Manifest:
    """Commutator norms of the pair built from --symbol and --symbol2, per kind"""
    phi = read_symbol(config, config.symbol)
    psi = read_symbol(config, config.symbol2)
    scalar = linear_dependence(phi, psi)

    rows, summary = [], {}
    for kind in parse_kinds(config):
        if not kind.requires_symbol:
            raise ValidationError(f"commutator needs symbol-bearing kinds, got {kind.value}")
        A, B = build(config, kind, phi), build(config, kind, psi)
        norms = commutator_norms(A, B)
        scale = max(1.0, operator_norm(A) * operator_norm(B))
        rows.append((f"{kind.value}:phi,psi", norms.operator_norm, norms.frobenius))
        summary[kind.value] = {
            "op_norm": norms.operator_norm,
            "relative_op_norm": norms.operator_norm / scale,
        }

    out = writer(config)
    out.write_table("commutator", pd.DataFrame(rows, columns=COMMUTATOR_COLUMNS))
    out.write_json("commutator_summary", {
        "linearly_dependent": scalar is not None,
        "scalar": None if scalar is None else [scalar.real, scalar.imag],
        "kinds": summary,
    })
    return out.finalize()


def run_normality(config: RunConfig) -> Manifest:
    """Self-commutator defect per kind, at --dim or at each of --dims"""
    symbol = read_symbol(config)
    dims = config.dims or [config.params.dim]
    rows = [
        (kind.value, N, self_commutator_defect(build(config, kind, symbol, dim=N)))
        for kind in parse_kinds(config)
        for N in dims
    ]

    out = writer(config)
    out.write_table("normality", pd.DataFrame(rows, columns=["kind", "n_dim", "defect"]))
    return out.finalize()


def run_compactness(config: RunConfig) -> Manifest:
    """
    Tail functional of the slant little Hankel compactness criterion

    The coefficient source is a symbol file, a symbol family, or one of the
    infinite coefficient families (factorial, inverse-square, constant).
    """
    if config.family in COEFFICIENT_FAMILIES and config.symbol is None:
        source = config.family
    else:
        source = read_symbol(config)
    if source is None:
        raise ValidationError("compactness requires --symbol or --family")

    k, alpha = config.params.k, config.params.alpha
    report = compactness_tail(source, k, alpha, config.j_max)
    hs_tail = hilbert_schmidt_tail(source, k, alpha, config.j_max // 2, config.j_max)

    out = writer(config)
    out.write_table("tail", pd.DataFrame(
        {"j": report.j_values, "sup_value": report.sup_values}, columns=TAIL_COLUMNS,
    ))
    out.write_json("tail_summary", {
        "eventually_zero_from": report.eventually_zero_from(),
        "last_value": report.sup_values[-1],
        "hilbert_schmidt_tail": hs_tail,
        "hilbert_schmidt_from": config.j_max // 2,
    })
    return out.finalize()


COMMANDS = {
    "commutator": run_commutator,
    "normality": run_normality,
    "compactness": run_compactness,
}


def register(subparsers, common: argparse.ArgumentParser, kinds_help: str) -> None:
    p = subparsers.add_parser("commutator", parents=[common], help="commutator norms of two symbols")
    p.add_argument("--kind", help=kinds_help)
    p.add_argument("--symbol2", help="second symbol JSON file")

    p = subparsers.add_parser("normality", parents=[common], help="self-commutator defects")
    p.add_argument("--kind", help=kinds_help)
    p.add_argument("--dims", type=parse_dims, default=[], help="comma separated dimensions (default: --dim)")

    p = subparsers.add_parser("compactness", parents=[common], help="slant little Hankel tail functional")
    p.add_argument("--j-max", dest="j_max", type=int, default=400, help="last coefficient index")
