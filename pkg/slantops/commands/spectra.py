import argparse
import logging

import pandas as pd

from ..config import settings
from ..schemas import Manifest, RunConfig, SweepSummary
from ..services.report import pseudospectrum_table, spectrum_table
from ..services.spectral import (
    eigenvalues,
    numerical_rank,
    operator_norm,
    pseudospectral_area,
    pseudospectrum,
    truncation_sweep,
)
from .common import build, header, parse_dims, parse_grid_arg, parse_kinds, read_symbol, symbol_for, writer

logger = logging.getLogger(__name__)


def run_spectrum(config: RunConfig) -> Manifest:
    """Eigenvalues per kind plus norm, rank and residual summaries"""
    symbol = read_symbol(config)
    results = []
    for kind in parse_kinds(config):
        A = build(config, kind, symbol)
        results.append((A, eigenvalues(A)))

    out = writer(config)
    summary = {}
    for A, spectrum in results:
        out.write_table(f"spectrum_{A.kind.value}", spectrum_table(spectrum), header=header(A))
        summary[A.kind.value] = {
            "max_residual": spectrum.max_residual,
            "operator_norm": operator_norm(A),
            "numerical_rank": numerical_rank(A, config.tol),
        }
    out.write_json("spectrum_summary", summary)
    return out.finalize()


def run_pseudo(config: RunConfig) -> Manifest:
    """sigma_min(A - lambda I) on a grid, with the area where it falls below --eps"""
    symbol = read_symbol(config)
    grid_spec = config.grid or settings.get_grid()
    grids = []
    for kind in parse_kinds(config):
        A = build(config, kind, symbol)
        grids.append((A, pseudospectrum(A, grid_spec)))

    out = writer(config)
    summary = {}
    for A, grid in grids:
        out.write_table(f"pseudo_{A.kind.value}", pseudospectrum_table(grid), header=header(A))
        summary[A.kind.value] = {
            "eps": config.eps,
            "area_below_eps": pseudospectral_area(grid, config.eps),
            "min_sigma": float(grid.sigma_min.min()),
        }
    out.write_json("pseudo_summary", summary)
    return out.finalize()


def run_sweep(config: RunConfig) -> Manifest:
    """Spectra across truncation dimensions with small-eigenvalue fractions"""
    symbol = read_symbol(config)
    sweeps = [
        (kind, truncation_sweep(kind, symbol_for(kind, symbol), config.params, config.dims, config.convention))
        for kind in parse_kinds(config)
    ]

    out = writer(config)
    for kind, results in sweeps:
        for result in results:
            out.write_table(
                f"sweep_{kind.value}_N{result.n_dim}",
                spectrum_table(result),
                header=f"kind={kind.value} alpha={config.params.alpha} k={config.params.k} "
                       f"n_dim={result.n_dim} convention={config.convention}",
            )
        summaries = [result.summary(config.eps).model_dump() for result in results]
        out.write_table(f"sweep_{kind.value}_summary", pd.DataFrame(summaries, columns=list(SweepSummary.model_fields)))
    return out.finalize()


COMMANDS = {
    "spectrum": run_spectrum,
    "pseudo": run_pseudo,
    "sweep": run_sweep,
}


def register(subparsers, common: argparse.ArgumentParser, kinds_help: str) -> None:
    p = subparsers.add_parser("spectrum", parents=[common], help="eigenvalues of truncations")
    p.add_argument("--kind", help=kinds_help)

    p = subparsers.add_parser("pseudo", parents=[common], help="pseudospectrum grids")
    p.add_argument("--kind", help=kinds_help)
    p.add_argument("--grid", type=parse_grid_arg, help=f"re0,re1,im0,im1,steps (default: {settings.GRID})")
    p.add_argument("--eps", type=float, default=1e-8, help="pseudospectral level for the reported area")

    p = subparsers.add_parser("sweep", parents=[common], help="spectra over increasing dimensions")
    p.add_argument("--kind", help=kinds_help)
    p.add_argument("--dims", required=True, type=parse_dims, help="comma separated increasing dimensions")
    p.add_argument("--eps", type=float, default=1e-8, help="modulus below which an eigenvalue counts as small")
