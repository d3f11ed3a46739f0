import os
from dotenv import load_dotenv
from typing import List, Tuple

# Load environment variables from .env file
load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings:
    # Parallelism
    WORKERS: int = int(os.getenv("SLANTOPS_WORKERS", "1"))

    # Logging
    LOG_LEVEL: str = os.getenv("SLANTOPS_LOG_LEVEL", "INFO").upper()

    # Space defaults
    DEFAULT_ALPHA: float = float(os.getenv("SLANTOPS_DEFAULT_ALPHA", "1.0"))
    DEFAULT_K: int = int(os.getenv("SLANTOPS_DEFAULT_K", "2"))
    DEFAULT_DIM: int = int(os.getenv("SLANTOPS_DEFAULT_DIM", "15"))
    CONVENTION: str = os.getenv("SLANTOPS_CONVENTION", "monomial")

    # Numerical tolerances
    ZERO_TOL: float = float(os.getenv("SLANTOPS_ZERO_TOL", "1e-10"))

    # Solver limits
    EIG_MAX_DIM: int = int(os.getenv("SLANTOPS_EIG_MAX_DIM", "2048"))
    PSEUDO_MAX_DIM: int = int(os.getenv("SLANTOPS_PSEUDO_MAX_DIM", "512"))

    # Pseudospectrum grid: re0,re1,im0,im1,steps
    GRID: str = os.getenv("SLANTOPS_GRID", "-1.25,1.25,-1.25,1.25,101")

    # Benchmarks
    BENCH_REPS: int = int(os.getenv("SLANTOPS_BENCH_REPS", "3"))

    def validate(self) -> List[str]:
        """Validate the configured values, returning one message per problem"""
        problems = []

        if self.WORKERS < 1:
            problems.append("SLANTOPS_WORKERS must be at least 1")
        if self.LOG_LEVEL not in LOG_LEVELS:
            problems.append(f"SLANTOPS_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")
        if self.DEFAULT_ALPHA <= -1.0:
            problems.append("SLANTOPS_DEFAULT_ALPHA must be greater than -1")
        if self.DEFAULT_K < 2:
            problems.append("SLANTOPS_DEFAULT_K must be at least 2")
        if self.DEFAULT_DIM < 1:
            problems.append("SLANTOPS_DEFAULT_DIM must be at least 1")
        if self.CONVENTION not in ("monomial", "normalized"):
            problems.append("SLANTOPS_CONVENTION must be 'monomial' or 'normalized'")
        if not self.ZERO_TOL > 0:
            problems.append("SLANTOPS_ZERO_TOL must be positive")
        if self.BENCH_REPS < 3:
            problems.append("SLANTOPS_BENCH_REPS must be at least 3")
        try:
            self.get_grid()
        except ValueError as e:
            problems.append(f"SLANTOPS_GRID is invalid: {e}")

        return problems

    def get_log_level(self) -> str:
        """Configured level, or INFO while an invalid value waits to be reported by validate()"""
        return self.LOG_LEVEL if self.LOG_LEVEL in LOG_LEVELS else "INFO"

    def get_grid(self) -> Tuple[float, float, float, float, int]:
        """Parse the default pseudospectrum grid specification"""
        return parse_grid(self.GRID)


def parse_grid(spec: str) -> Tuple[float, float, float, float, int]:
    """
    Parse a grid specification of the form "re0,re1,im0,im1,steps"

    Args:
        spec: Comma separated bounds followed by the number of points per axis

    Returns:
        Tuple (re0, re1, im0, im1, steps)
    """
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected 're0,re1,im0,im1,steps', got '{spec}'")
    re0, re1, im0, im1 = (float(p) for p in parts[:4])
    steps = int(parts[4])
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if re1 < re0 or im1 < im0:
        raise ValueError("grid bounds must be increasing")
    return re0, re1, im0, im1, steps


# Create global settings instance
settings = Settings()
