import json

import pandas as pd
import pytest

from slantops.config import settings
from slantops.main import build_parser, main
from slantops.services.report import MANIFEST_NAME, verify_manifest
from slantops.services.symbols import HarmonicSymbol, serialize_symbol


def error_record(capsys) -> dict:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


def write_symbol(path, symbol: HarmonicSymbol):
    path.write_text(serialize_symbol(symbol))
    return str(path)


class TestSubcommands:
    """Each subcommand writes its tables and a verifiable manifest"""

    def test_build_slant_hankel_support(self, tmp_path):
        out = tmp_path / "build"
        code = main(["build", "--kind", "S", "--family", "anti-exp", "--degree", "15",
                     "--alpha", "1", "--k", "2", "--dim", "15", "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "matrix_SlantLittleHankel.csv")
        assert len(table) > 0
        assert ((table["n"] + 2 * table["m"]) <= 15).all()
        assert verify_manifest(out) == []

    def test_build_several_kinds_as_json(self, tmp_path):
        out = tmp_path / "json"
        code = main(["build", "--kind", "T,W", "--family", "harmonic-exp", "--degree", "3",
                     "--dim", "4", "--format", "json", "--out", str(out)])
        assert code == 0
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert [f["path"] for f in manifest["files"]] == ["matrix_Toeplitz.json", "matrix_SlantShift.json"]
        assert json.loads((out / "matrix_SlantShift.json").read_text())["n_dim"] == 4

    def test_commutator_of_dependent_symbols(self, tmp_path):
        phi = HarmonicSymbol(anti=(0, 1), analytic=(1,))
        out = tmp_path / "comm"
        code = main(["commutator", "--kind", "B,S", "--dim", "16",
                     "--symbol", write_symbol(tmp_path / "phi.json", phi),
                     "--symbol2", write_symbol(tmp_path / "psi.json", phi.scale(2)),
                     "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "commutator.csv")
        assert table["pair_id"].tolist() == ["SlantToeplitz:phi,psi", "SlantLittleHankel:phi,psi"]
        assert (table["op_norm"] <= 1e-10).all()
        summary = json.loads((out / "commutator_summary.json").read_text())
        assert summary["linearly_dependent"] is True
        assert summary["scalar"] == [2.0, 0.0]

    def test_commutator_of_independent_symbols(self, tmp_path):
        out = tmp_path / "comm"
        code = main(["commutator", "--kind", "B,S", "--dim", "32",
                     "--symbol", write_symbol(tmp_path / "z.json", HarmonicSymbol.monomial(1)),
                     "--symbol2", write_symbol(tmp_path / "z2.json", HarmonicSymbol.monomial(2)),
                     "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "commutator.csv")
        assert table.loc[table["pair_id"] == "SlantToeplitz:phi,psi", "op_norm"].item() > 1e-6
        summary = json.loads((out / "commutator_summary.json").read_text())
        assert summary["linearly_dependent"] is False

    def test_normality_over_dimensions(self, tmp_path):
        out = tmp_path / "normal"
        code = main(["normality", "--kind", "T", "--dims", "8,16",
                     "--symbol", write_symbol(tmp_path / "z.json", HarmonicSymbol.monomial(1)),
                     "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "normality.csv")
        assert table["n_dim"].tolist() == [8, 16]
        assert table["defect"].iloc[1] == pytest.approx(15 / 17, rel=1e-12)

    def test_compactness_with_coefficient_family(self, tmp_path):
        out = tmp_path / "tail"
        code = main(["compactness", "--family", "factorial", "--j-max", "60", "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "tail.csv")
        assert table["j"].tolist() == list(range(61))
        summary = json.loads((out / "tail_summary.json").read_text())
        assert summary["eventually_zero_from"] is None
        assert summary["last_value"] < 1e-12

    def test_compactness_with_polynomial_symbol(self, tmp_path):
        out = tmp_path / "tail"
        code = main(["compactness", "--family", "anti-exp", "--degree", "5", "--j-max", "20", "--out", str(out)])
        assert code == 0
        summary = json.loads((out / "tail_summary.json").read_text())
        assert summary["eventually_zero_from"] == 6
        assert summary["hilbert_schmidt_tail"] == 0.0

    def test_decay_panels(self, tmp_path):
        out = tmp_path / "decay"
        code = main(["decay", "--kind", "B,S", "--family", "harmonic-exp", "--degree", "10",
                     "--dim", "12", "--out", str(out)])
        assert code == 0
        names = sorted(p.name for p in out.iterdir())
        assert "decay_SlantLittleHankel_diagonal.csv" in names
        assert "decay_SlantToeplitz_row.csv" in names
        assert len(names) == 7
        assert list(pd.read_csv(out / "decay_SlantToeplitz_row.csv").columns) == ["axis_index", "max_abs"]

    def test_decay_pairs_analytic_and_anti_analytic_symbols(self, tmp_path):
        out = tmp_path / "decay"
        code = main(["decay", "--kind", "B,S", "--degree", "10", "--dim", "12", "--out", str(out)])
        assert code == 0
        listed = [f["path"] for f in json.loads((out / MANIFEST_NAME).read_text())["files"]]
        assert len(listed) == 12
        for prefix in ("decay_analytic", "decay_anti-analytic"):
            for kind in ("SlantToeplitz", "SlantLittleHankel"):
                for axis in ("row", "column", "diagonal"):
                    assert f"{prefix}_{kind}_{axis}.csv" in listed
        # S reads only conj(z) coefficients: e^z leaves just its constant term
        assert len(pd.read_csv(out / "decay_analytic_SlantLittleHankel_diagonal.csv")) == 1
        assert len(pd.read_csv(out / "decay_anti-analytic_SlantLittleHankel_diagonal.csv")) == 11
        assert verify_manifest(out) == []

    def test_spectrum_with_header(self, tmp_path):
        out = tmp_path / "spec"
        code = main(["spectrum", "--kind", "W", "--dim", "16", "--out", str(out)])
        assert code == 0
        lines = (out / "spectrum_SlantShift.csv").read_text().splitlines()
        assert lines[0] == "# kind=SlantShift alpha=1.0 k=2 n_dim=16 convention=monomial"
        assert lines[1] == "re,im"
        assert len(lines) == 18
        summary = json.loads((out / "spectrum_summary.json").read_text())
        assert summary["SlantShift"]["numerical_rank"] == 8

    def test_pseudo(self, tmp_path):
        out = tmp_path / "pseudo"
        code = main(["pseudo", "--kind", "S", "--family", "anti-exp", "--degree", "2", "--dim", "16",
                     "--grid=-1,1,-1,1,5", "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "pseudo_SlantLittleHankel.csv", comment="#")
        assert list(table.columns) == ["re", "im", "sigma_min"]
        assert len(table) == 25
        summary = json.loads((out / "pseudo_summary.json").read_text())
        assert summary["SlantLittleHankel"]["min_sigma"] < 1e-8

    def test_sweep(self, tmp_path):
        out = tmp_path / "sweep"
        code = main(["sweep", "--kind", "B", "--family", "anti-geometric", "--degree", "0",
                     "--dims", "4,8", "--out", str(out)])
        assert code == 0
        summary = pd.read_csv(out / "sweep_SlantToeplitz_summary.csv")
        assert summary["n_dim"].tolist() == [4, 8]
        assert summary["max_modulus"].tolist() == pytest.approx([1.0, 1.0])
        assert (out / "sweep_SlantToeplitz_N8.csv").exists()

    def test_bench_records_environment(self, tmp_path):
        out = tmp_path / "bench"
        code = main(["bench", "--dims", "5,10", "--reps", "3", "--out", str(out)])
        assert code == 0
        table = pd.read_csv(out / "bench.csv")
        assert len(table) == 4
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert "numpy" in manifest["environment"]


class TestReproducibility:
    ARGS = ["build", "--kind", "T,H,B,S", "--family", "harmonic-exp", "--degree", "6", "--dim", "24"]

    def snapshot(self, out):
        return {p.name: p.read_bytes() for p in sorted(out.iterdir())}

    def test_reruns_are_byte_identical(self, tmp_path):
        out = tmp_path / "run"
        assert main(self.ARGS + ["--out", str(out)]) == 0
        first = self.snapshot(out)
        assert main(self.ARGS + ["--out", str(out)]) == 0
        assert self.snapshot(out) == first

    def test_worker_count_does_not_change_output(self, tmp_path, monkeypatch):
        out = tmp_path / "run"
        monkeypatch.setattr(settings, "WORKERS", 1)
        assert main(self.ARGS + ["--out", str(out)]) == 0
        first = self.snapshot(out)
        monkeypatch.setattr(settings, "WORKERS", 4)
        assert main(self.ARGS + ["--out", str(out)]) == 0
        assert self.snapshot(out) == first


class TestExitCodes:
    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["build", "--kind", "T"])
        assert exc.value.code == 2

    def test_unknown_subcommand(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["plot", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_missing_symbol_file(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["build", "--kind", "T", "--symbol", str(tmp_path / "nope.json"), "--out", str(out)])
        assert code == 3
        assert error_record(capsys)["error"] == "FileAccessError"
        assert not (out / MANIFEST_NAME).exists()

    def test_malformed_symbol(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"anti": [[1, 0]')
        code = main(["build", "--kind", "T", "--symbol", str(bad), "--out", str(tmp_path / "out")])
        assert code == 4
        record = error_record(capsys)
        assert record["error"] == "SymbolParseError"
        assert record["exit_code"] == 4
        assert record["position"] is not None

    def test_coefficient_too_large_for_a_float(self, tmp_path, capsys):
        huge = tmp_path / "huge.json"
        huge.write_text('{"anti": [[1' + "0" * 400 + ', 0]], "analytic": []}')
        out = tmp_path / "out"
        code = main(["build", "--kind", "T", "--symbol", str(huge), "--out", str(out)])
        assert code == 5
        record = error_record(capsys)
        assert record["error"] == "ValidationError"
        assert "not finite" in record["detail"]
        assert not (out / MANIFEST_NAME).exists()

    def test_alpha_out_of_range(self, tmp_path, capsys):
        code = main(["build", "--kind", "W", "--alpha=-1", "--out", str(tmp_path)])
        assert code == 5
        assert error_record(capsys)["exit_code"] == 5

    def test_unknown_kind(self, tmp_path, capsys):
        code = main(["build", "--kind", "Q", "--out", str(tmp_path)])
        assert code == 5
        assert "unknown operator kind" in error_record(capsys)["detail"]

    def test_missing_required_input(self, tmp_path, capsys):
        code = main(["spectrum", "--out", str(tmp_path)])
        assert code == 5
        assert "requires" in error_record(capsys)["detail"]

    def test_solver_limit(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setattr(settings, "EIG_MAX_DIM", 4)
        out = tmp_path / "out"
        code = main(["spectrum", "--kind", "W", "--dim", "8", "--out", str(out)])
        assert code == 6
        assert error_record(capsys)["error"] == "SolverError"
        assert not (out / MANIFEST_NAME).exists()

    def test_invalid_log_level(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setattr(settings, "LOG_LEVEL", "LOUD")
        code = main(["build", "--kind", "W", "--dim", "4", "--out", str(tmp_path / "out")])
        assert code == 5
        assert "SLANTOPS_LOG_LEVEL" in error_record(capsys)["detail"]

    def test_failed_rerun_leaves_no_stale_manifest(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["build", "--kind", "W", "--dim", "4", "--out", str(out)]) == 0
        assert (out / MANIFEST_NAME).exists()
        code = main(["build", "--kind", "T", "--symbol", str(tmp_path / "nope.json"), "--out", str(out)])
        assert code == 3
        assert not (out / MANIFEST_NAME).exists()

    def test_help_documents_exit_codes(self):
        text = build_parser().format_help()
        for code in ("2", "3", "4", "5", "6"):
            assert f"  {code}  " in text
