# src/database.py
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .analyzers.throughput_model import ModelOutputs
from .collectors.config_loader import default_data_dir
from .sweep.pareto import RESULT_COLUMNS, ParetoCurve, curves_to_frame

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
PROBABILITY_COLUMNS = {
    "tsr", "p_tf", "reliability", "tsr_se", "ptf_se", "overlap_frequency",
    "observed", "expected", "gap", "tolerance", "tsr_ci_low", "tsr_ci_high",
}

ResultLike = Union[ModelOutputs, Sequence[ParetoCurve], pd.DataFrame, List[Dict[str, Any]]]


def model_row(outputs: ModelOutputs, swept_param: str = "none", value: Optional[float] = None) -> Dict[str, Any]:
    row = {"swept_param": swept_param, "value": value}
    row.update(outputs.as_row())
    return row


def results_frame(results: ResultLike) -> pd.DataFrame:
    """Any result object as a table whose first columns are the seven standard ones"""
    if isinstance(results, pd.DataFrame):
        frame = results.copy()
    elif isinstance(results, ModelOutputs):
        frame = pd.DataFrame([model_row(results)])
    elif isinstance(results, (list, tuple)) and results and all(isinstance(r, ParetoCurve) for r in results):
        frame = curves_to_frame(results)
    elif isinstance(results, (list, tuple)) and results and all(isinstance(r, dict) for r in results):
        frame = pd.DataFrame(list(results))
    else:
        raise ValueError(f"cannot tabulate results of type {type(results).__name__}")

    if set(RESULT_COLUMNS) <= set(frame.columns):
        extra = [c for c in frame.columns if c not in RESULT_COLUMNS]
        frame = frame[RESULT_COLUMNS + extra]
    return frame


def _cell(column: str, value: Any) -> Any:
    """Fixed numeric formatting: 6 dp probabilities, 1 dp throughputs"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if "throughput" in column:
            return round(float(value), 1)
        if column in PROBABILITY_COLUMNS:
            return round(float(value), 6)
        return float(value)
    return value


def _csv_text(column: str, value: Any) -> str:
    value = _cell(column, value)
    if value is None:
        return ""
    if isinstance(value, float):
        if "throughput" in column:
            return f"{value:.1f}"
        if column in PROBABILITY_COLUMNS:
            return f"{value:.6f}"
        return f"{value:.10g}"
    return str(value)


def _render(frame: pd.DataFrame, fmt: str) -> str:
    if fmt == "csv":
        text = frame.copy().astype(object)
        for column in text.columns:
            text[column] = [_csv_text(column, v) for v in frame[column].tolist()]
        return text.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        records = [
            {column: _cell(column, v) for column, v in zip(frame.columns, row)}
            for row in frame.itertuples(index=False, name=None)
        ]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"unknown format '{fmt}', expected one of {FORMATS}")


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Write to a temp file beside `path`, then rename over it"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_results(results: ResultLike, path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    """Serialize results to CSV or JSON (format from the suffix when not given)"""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    text = _render(results_frame(results), fmt)
    try:
        atomic_write_text(path, text)
    except OSError as e:
        logger.error(f"Could not write results to {path}: {e}")
        raise
    logger.info(f"Wrote results to {path}")
    return path


def read_results(path: Union[str, Path], fmt: Optional[str] = None) -> pd.DataFrame:
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt == "csv":
        return pd.read_csv(path)
    if fmt == "json":
        with path.open("r", encoding="utf-8") as f:
            return pd.DataFrame(json.load(f))
    raise ValueError(f"unknown format '{fmt}', expected one of {FORMATS}")


class ResultStore:
    """File-based store for model, sweep, simulation and validation results"""

    def __init__(self, data_dir: Union[str, Path, None] = None):
        if data_dir is None:
            data_dir = default_data_dir()
        data_dir = Path(data_dir)
        if not data_dir.is_absolute():
            project_root = Path(__file__).resolve().parent.parent
            data_dir = project_root / data_dir
        self.data_dir = data_dir
        self.results_dir = data_dir / "results"

    def path_for(self, name: str, fmt: str = "csv") -> Path:
        return self.results_dir / f"{name}.{fmt}"

    def save(self, name: str, results: ResultLike, fmt: str = "csv") -> Path:
        path = write_results(results, self.path_for(name, fmt), fmt)
        print(f"💾 Saved {name} results to {path}")
        return path

    def load(self, name: str, fmt: str = "csv") -> Optional[pd.DataFrame]:
        path = self.path_for(name, fmt)
        if not path.exists():
            return None
        return read_results(path, fmt)

    def list_results(self) -> List[str]:
        if not self.results_dir.exists():
            return []
        return sorted(p.stem for p in self.results_dir.iterdir() if p.suffix.lstrip(".") in FORMATS)
