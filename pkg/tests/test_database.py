# tests/test_database.py
import json
import re

import pandas as pd
import pytest

from src.analyzers.analysis_orchestrator import AnalysisOrchestrator
from src.collectors.config_loader import preset_document
from src.database import ResultStore, atomic_write_text, read_results, results_frame, write_results
from src.sweep.pareto import FAMILY_COLUMNS, RESULT_COLUMNS, sweep

HEADER = ",".join(RESULT_COLUMNS)


@pytest.fixture(scope="module")
def a1_curves():
    return sweep(preset_document("a1").sweep)


class TestCsvOutput:

    def test_model_row(self, tmp_path, fig8_base):
        path = write_results(AnalysisOrchestrator().analyze(fig8_base), tmp_path / "model.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == HEADER
        cells = lines[1].split(",")
        assert cells[:2] == ["none", ""]
        assert re.fullmatch(r"0\.\d{6}", cells[2])
        assert cells[3] == "106666.7"
        assert re.fullmatch(r"\d+\.\d", cells[4])
        assert re.fullmatch(r"0\.\d{6}", cells[5]) and re.fullmatch(r"0\.\d{6}", cells[6])

    def test_sweep_rows_in_grid_order(self, tmp_path, a1_curves):
        path = write_results(a1_curves, tmp_path / "a1.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == HEADER
        assert [line.split(",")[1] for line in lines[1:]] == ["1", "2", "3", "4", "5"]
        assert all(line.startswith("x,") for line in lines[1:])

    def test_family_columns_trail(self, tmp_path):
        curves = sweep(preset_document("fig10").sweep)
        frame = read_results(write_results(curves, tmp_path / "fig10.csv"))
        assert list(frame.columns) == RESULT_COLUMNS + FAMILY_COLUMNS

    def test_missing_reliability_is_empty(self, tmp_path, base_scenario):
        path = write_results(AnalysisOrchestrator().analyze(base_scenario), tmp_path / "plain.csv")
        assert path.read_text(encoding="utf-8").splitlines()[1].endswith(",,")

    def test_round_trip(self, tmp_path, a1_curves):
        frame = read_results(write_results(a1_curves, tmp_path / "a1.csv"))
        expected = results_frame(a1_curves)
        assert list(frame.columns) == RESULT_COLUMNS
        pd.testing.assert_series_equal(frame["tsr"], expected["tsr"], atol=5e-7, check_exact=False)

    def test_extra_columns_follow_standard_ones(self):
        frame = results_frame([{"note": "a", "tsr": 0.5, "swept_param": "none", "value": None,
                                "throughput_ideal_bps": 1.0, "throughput_real_bps": 0.5,
                                "p_tf": None, "reliability": None}])
        assert list(frame.columns) == RESULT_COLUMNS + ["note"]


class TestJsonOutput:

    def test_mirrors_csv_fields(self, tmp_path, a1_curves):
        path = write_results(a1_curves, tmp_path / "a1.json")
        records = json.loads(path.read_text(encoding="utf-8"))
        assert len(records) == 5
        assert list(records[0]) == RESULT_COLUMNS
        assert records[0]["tsr"] == round(records[0]["tsr"], 6)

    def test_format_overrides_suffix(self, tmp_path, a1_curves):
        path = write_results(a1_curves, tmp_path / "a1.out", fmt="json")
        assert json.loads(path.read_text(encoding="utf-8"))[0]["swept_param"] == "x"


class TestWrites:

    def test_no_temp_files_left(self, tmp_path):
        atomic_write_text(tmp_path / "r.csv", "a,b\n")
        atomic_write_text(tmp_path / "r.csv", "a,b\n1,2\n")
        assert [p.name for p in tmp_path.iterdir()] == ["r.csv"]
        assert (tmp_path / "r.csv").read_text() == "a,b\n1,2\n"

    def test_unknown_format(self, tmp_path, a1_curves):
        with pytest.raises(ValueError):
            write_results(a1_curves, tmp_path / "a1.xlsx")
        assert list(tmp_path.iterdir()) == []

    def test_untabulatable_results(self):
        with pytest.raises(ValueError):
            results_frame(42)

    def test_unwritable_target(self, tmp_path, a1_curves):
        blocker = tmp_path / "file.txt"
        blocker.write_text("x")
        with pytest.raises(OSError):
            write_results(a1_curves, blocker / "a1.csv")


class TestResultStore:

    def test_save_load_list(self, tmp_path, a1_curves):
        store = ResultStore(tmp_path)
        assert store.list_results() == []
        store.save("a1", a1_curves)
        store.save("a1", a1_curves, fmt="json")
        assert store.list_results() == ["a1", "a1"]
        assert len(store.load("a1")) == 5
        assert store.load("missing") is None
        assert store.path_for("a1").parent == tmp_path / "results"
