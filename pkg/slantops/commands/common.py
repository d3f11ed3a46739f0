import argparse
from pathlib import Path
from typing import List, Optional

from ..config import parse_grid
from ..errors import ValidationError
from ..schemas import RunConfig
from ..services.operators import OperatorKind, OperatorMatrix, build_matrix
from ..services.report import ReportWriter
from ..services.symbols import HarmonicSymbol, family_symbol, load_symbol


def parse_kinds(config: RunConfig, default: Optional[List[OperatorKind]] = None) -> List[OperatorKind]:
    """Comma separated --kind value; each entry is a tag or an alias"""
    if not config.kind:
        if default is None:
            raise ValidationError(f"'{config.subcommand}' requires --kind")
        return list(default)
    kinds = [OperatorKind.parse(tag) for tag in config.kind.split(",") if tag.strip()]
    if len(set(kinds)) != len(kinds):
        raise ValidationError(f"duplicate operator kinds in '{config.kind}'")
    return kinds


def read_symbol(config: RunConfig, path: Optional[Path] = None) -> Optional[HarmonicSymbol]:
    """Symbol from a file, else from --family/--degree, else None"""
    path = path if path is not None else config.symbol
    if path is not None:
        return load_symbol(path, normalized=config.normalized_coeffs, alpha=config.params.alpha)
    if config.family:
        return family_symbol(config.family, config.degree)
    return None


def symbol_for(kind: OperatorKind, symbol: Optional[HarmonicSymbol]) -> Optional[HarmonicSymbol]:
    """Slant shifts take no symbol even when one is configured"""
    return symbol if kind.requires_symbol else None


def build(config: RunConfig, kind: OperatorKind, symbol: Optional[HarmonicSymbol],
          dim: Optional[int] = None) -> OperatorMatrix:
    params = config.params if dim is None else config.params.with_dim(dim)
    return build_matrix(kind, symbol_for(kind, symbol), params, config.convention)


def writer(config: RunConfig) -> ReportWriter:
    inputs = config.model_dump(mode="json", exclude_none=True)
    return ReportWriter(config.output, config.subcommand, inputs, config.format)


def header(A: OperatorMatrix) -> str:
    p = A.params
    return f"kind={A.kind.value} alpha={p.alpha} k={p.k} n_dim={A.dim} convention={A.convention}"


def parse_dims(text: str) -> List[int]:
    """argparse type for comma separated dimensions"""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got '{text}'") from None


def parse_grid_arg(text: str):
    """argparse type for "re0,re1,im0,im1,steps" """
    try:
        return parse_grid(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
