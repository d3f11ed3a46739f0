import argparse
import json
import logging
import sys
from typing import List, Optional

import pydantic

from .commands import matrices, spectra, properties
from .config import settings
from .errors import EXIT_CODES, SlantOpsError, ValidationError
from .schemas import Manifest, RunConfig, SpaceParams
from .services.operators import KIND_ALIASES
from .services.report import discard_manifest

logger = logging.getLogger(__name__)

COMMANDS = {**matrices.COMMANDS, **properties.COMMANDS, **spectra.COMMANDS}

KINDS_HELP = "comma separated operator kinds: " + ", ".join(
    f"{kind.value} ({alias})" for alias, kind in KIND_ALIASES.items()
)


def _epilog() -> str:
    lines = ["exit codes:"]
    lines += [f"  {code}  {meaning}" for code, meaning in sorted(EXIT_CODES.items())]
    lines.append("")
    lines.append("environment: SLANTOPS_WORKERS sets assembly and grid threads "
                 f"(default 1, currently {settings.WORKERS}); output never depends on it")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=settings.DEFAULT_ALPHA, help="weight exponent (> -1)")
    common.add_argument("--k", type=int, default=settings.DEFAULT_K, help="slant order (>= 2)")
    common.add_argument("--dim", type=int, default=settings.DEFAULT_DIM, help="truncation dimension N")
    common.add_argument("--symbol", help="symbol JSON file {\"anti\": [[re, im], ...], \"analytic\": [...]}")
    common.add_argument("--normalized-coeffs", dest="normalized_coeffs", action="store_true",
                        help="symbol coefficients multiply z^j / gamma_j")
    common.add_argument("--family", help="named symbol family used when no --symbol is given")
    common.add_argument("--degree", type=int, default=15, help="truncation degree of --family")
    common.add_argument("--convention", choices=["monomial", "normalized"], default=settings.CONVENTION,
                        help="slant-shift convention")
    common.add_argument("--tol", type=float, default=settings.ZERO_TOL, help="numerical-zero tolerance")
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="table format")

    parser = argparse.ArgumentParser(
        prog="slantops",
        description="Truncations, diagnostics and spectra of slant Toeplitz and slant little Hankel "
                    "operators on weighted Bergman spaces",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for module in (matrices, properties, spectra):
        module.register(subparsers, common, KINDS_HELP)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = SpaceParams(alpha=args.alpha, k=args.k, dim=args.dim)
    fields = {
        name: getattr(args, name)
        for name in ("kind", "symbol", "symbol2", "family", "grid", "dims", "reps", "j_max", "eps")
        if getattr(args, name, None) is not None
    }
    return RunConfig(
        subcommand=args.subcommand,
        params=params,
        normalized_coeffs=args.normalized_coeffs,
        output=args.out,
        tol=args.tol,
        convention=args.convention,
        format=args.format,
        degree=args.degree,
        **fields,
    )


def run(config: RunConfig) -> Manifest:
    """Execute one subcommand and return its manifest"""
    logger.info(f"Running {config.subcommand} alpha={config.params.alpha} k={config.params.k} N={config.params.dim}")
    discard_manifest(config.output)
    return COMMANDS[config.subcommand](config)


def _report(record: dict) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.get_log_level(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)

    try:
        problems = settings.validate()
        if problems:
            raise ValidationError("invalid settings: " + "; ".join(problems))
        manifest = run(config_from_args(args))
    except SlantOpsError as e:
        logger.error(e.detail)
        _report(e.to_record())
        return e.exit_code
    except pydantic.ValidationError as e:
        detail = "; ".join(err["msg"] for err in e.errors())
        _report({"error": "ValidationError", "detail": detail, "exit_code": ValidationError.exit_code})
        return ValidationError.exit_code

    logger.info(f"{manifest.experiment}: wrote {len(manifest.files)} files and the manifest")
    return 0


if __name__ == "__main__":
    sys.exit(main())
