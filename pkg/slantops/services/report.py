"""Result files and manifests.

Tables go out through pandas as CSV (or JSON record lists); every run ends
with a manifest listing each file with its SHA-256 checksum. The manifest is
always the last file written, so its presence marks a complete run.
"""

import hashlib
import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd
import scipy

from ..errors import FileAccessError, ValidationError
from ..schemas import Manifest, ManifestFile
from .operators import OperatorMatrix, matrix_to_csv_rows, matrix_to_json
from .spectral import PseudospectrumGrid, SpectrumResult

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
FORMATS = ("csv", "json")

MATRIX_COLUMNS = ["m", "n", "re", "im"]
SPECTRUM_COLUMNS = ["re", "im"]
PSEUDO_COLUMNS = ["re", "im", "sigma_min"]
DECAY_COLUMNS = ["axis_index", "max_abs"]
TAIL_COLUMNS = ["j", "sup_value"]
COMMUTATOR_COLUMNS = ["pair_id", "op_norm", "frobenius"]


def dumps(payload: Any) -> str:
    """Canonical JSON used for every emitted document"""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def environment() -> Dict[str, str]:
    """Interpreter and library versions recorded with benchmark runs"""
    return {
        "python": platform.python_version(),
        "implementation": platform.python_implementation(),
        "platform": platform.platform(),
        "machine": platform.machine(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


# Tables
def matrix_table(A: OperatorMatrix) -> pd.DataFrame:
    return pd.DataFrame(matrix_to_csv_rows(A), columns=MATRIX_COLUMNS)


def spectrum_table(result: SpectrumResult) -> pd.DataFrame:
    eigs = result.eigenvalues
    return pd.DataFrame({"re": eigs.real.astype(float), "im": eigs.imag.astype(float)}, columns=SPECTRUM_COLUMNS)


def pseudospectrum_table(grid: PseudospectrumGrid) -> pd.DataFrame:
    return pd.DataFrame(list(grid.points()), columns=PSEUDO_COLUMNS)


def profile_table(values: List[float], index_name: str, value_name: str) -> pd.DataFrame:
    return pd.DataFrame({index_name: np.arange(len(values)), value_name: values}, columns=[index_name, value_name])


def discard_manifest(out_dir: Union[str, Path]) -> None:
    """Remove a manifest left by an earlier run; a manifest only ever describes the run that wrote it"""
    path = Path(out_dir) / MANIFEST_NAME
    try:
        path.unlink(missing_ok=True)
    except OSError as e:
        raise FileAccessError(f"cannot remove stale manifest {path}: {e}")


class ReportWriter:
    """
    Writes the files of one experiment into an output directory and records
    them for the manifest
    """

    def __init__(self, out_dir: Union[str, Path], experiment: str, inputs: Mapping[str, Any], fmt: str = "csv"):
        if fmt not in FORMATS:
            raise ValidationError(f"unknown output format '{fmt}', expected one of {FORMATS}")
        self.out_dir = Path(out_dir)
        self.experiment = experiment
        self.inputs = dict(inputs)
        self.format = fmt
        self.files: List[ManifestFile] = []
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise FileAccessError(f"cannot create output directory {self.out_dir}: {e}")
        discard_manifest(self.out_dir)

    def _write(self, name: str, content: str, record: bool = True) -> Path:
        path = self.out_dir / name
        data = content.encode("utf-8")
        try:
            path.write_bytes(data)
        except OSError as e:
            raise FileAccessError(f"failed to write {path}: {e}")
        if record:
            self.files.append(ManifestFile(path=name, sha256=hashlib.sha256(data).hexdigest(), bytes=len(data)))
        logger.info(f"Wrote {path} ({len(data)} bytes)")
        return path

    def write_table(self, stem: str, table: pd.DataFrame, header: Optional[str] = None) -> Path:
        """
        Write a table as CSV or as a JSON list of records

        Args:
            stem: File name without extension
            table: Columns in output order
            header: Comment line placed above the CSV column header, or a
                "header" field in the JSON form
        """
        if self.format == "json":
            payload: Any = table.to_dict(orient="records")
            if header is not None:
                payload = {"header": header, "records": payload}
            return self._write(f"{stem}.json", dumps(payload))

        body = table.to_csv(index=False, lineterminator="\n")
        if header is not None:
            body = f"# {header}\n{body}"
        return self._write(f"{stem}.csv", body)

    def write_json(self, stem: str, payload: Any) -> Path:
        return self._write(f"{stem}.json", dumps(payload))

    def write_matrix(self, stem: str, A: OperatorMatrix) -> Path:
        if self.format == "json":
            return self.write_json(stem, matrix_to_json(A))
        return self.write_table(stem, matrix_table(A))

    def finalize(self, env: Optional[Dict[str, str]] = None) -> Manifest:
        """Write the manifest; nothing may be written after it"""
        manifest = Manifest(experiment=self.experiment, inputs=self.inputs, files=list(self.files), environment=env)
        self._write(MANIFEST_NAME, dumps(manifest.model_dump(mode="json", exclude_none=True)), record=False)
        stale = untracked_files(self.out_dir)
        if stale:
            logger.warning(f"{self.out_dir} also holds files not listed in the manifest: {', '.join(stale)}")
        return manifest


def emit_figure_data(experiment: str, panels: Mapping[str, pd.DataFrame], out_dir: Union[str, Path],
                     inputs: Mapping[str, Any], fmt: str = "csv",
                     env: Optional[Dict[str, str]] = None) -> Manifest:
    """
    One file per panel plus the manifest

    An empty panel mapping produces a manifest with an empty file list.
    """
    writer = ReportWriter(out_dir, experiment, inputs, fmt)
    for name in sorted(panels):
        writer.write_table(name, panels[name])
    return writer.finalize(env)


def _read_manifest(root: Path) -> Manifest:
    try:
        return Manifest.model_validate_json((root / MANIFEST_NAME).read_text(encoding="utf-8"))
    except OSError as e:
        raise FileAccessError(f"cannot read manifest in {root}: {e}")


def untracked_files(out_dir: Union[str, Path]) -> List[str]:
    """
    Files in the output directory that the manifest does not list

    Reusing a directory keeps the files of earlier runs; they stay on disk but
    are not covered by the new manifest.
    """
    root = Path(out_dir)
    listed = {entry.path for entry in _read_manifest(root).files}
    listed.add(MANIFEST_NAME)
    return sorted(p.name for p in root.iterdir() if p.is_file() and p.name not in listed)


def verify_manifest(out_dir: Union[str, Path]) -> List[str]:
    """Names of files whose checksum no longer matches the manifest"""
    root = Path(out_dir)
    manifest = _read_manifest(root)
    mismatched = []
    for entry in manifest.files:
        path = root / entry.path
        if not path.exists() or hashlib.sha256(path.read_bytes()).hexdigest() != entry.sha256:
            mismatched.append(entry.path)
    return mismatched
