"""Exception hierarchy shared by the services and the command line.

Every error carries the exit code the CLI reports for it.
"""

from typing import Optional


class SlantOpsError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def to_record(self) -> dict:
        """Machine-readable error record written to stderr by the CLI"""
        return {
            "error": type(self).__name__,
            "detail": self.detail,
            "exit_code": self.exit_code,
        }


class FileAccessError(SlantOpsError, OSError):
    exit_code = 3


class SymbolParseError(SlantOpsError, ValueError):
    exit_code = 4

    def __init__(self, detail: str, position: Optional[int] = None):
        if position is not None:
            detail = f"{detail} (at position {position})"
        super().__init__(detail)
        self.position = position

    def to_record(self) -> dict:
        record = super().to_record()
        record["position"] = self.position
        return record


class DomainError(SlantOpsError, ValueError):
    exit_code = 5


class ValidationError(SlantOpsError, ValueError):
    exit_code = 5


class SolverError(SlantOpsError, RuntimeError):
    exit_code = 6


EXIT_CODES = {
    0: "success",
    2: "command-line usage error",
    FileAccessError.exit_code: "file I/O error",
    SymbolParseError.exit_code: "symbol file parse error",
    ValidationError.exit_code: "parameter or input validation error",
    SolverError.exit_code: "solver non-convergence or size limit exceeded",
}
