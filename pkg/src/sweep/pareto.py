# src/sweep/pareto.py
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..analyzers.analysis_orchestrator import AnalysisOrchestrator
from ..collectors.scenario import Scenario, validate_scenario
from ..errors import LinkModelError, SweepPointError

# sweep parameter -> (config key, cast)
PARAM_KEYS = {
    "ber": ("ber", float),
    "payload_v": ("payload_v_bytes", int),
    "ci_v": ("ci_v_us", float),
    "x": ("x", int),
    "payload_d": ("payload_d_bytes", int),
    "n": ("n", int),
    "ci_d": ("ci_d_us", float),
}
SWEPT_PARAMS = ("ber", "payload_v", "ci_v", "x")
RESULT_COLUMNS = ["swept_param", "value", "tsr", "throughput_ideal_bps", "throughput_real_bps", "p_tf", "reliability"]
FAMILY_COLUMNS = ["family_param", "family_value"]


def log_grid(start: float, stop: float, points: int = 50) -> Tuple[float, ...]:
    if start <= 0 or stop <= 0:
        raise ValueError("log-spaced grids need positive bounds")
    if points < 1:
        raise ValueError("a grid needs at least one point")
    return tuple(float(v) for v in np.logspace(np.log10(start), np.log10(stop), points))


def linear_grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Inclusive grid start, start + step, ..., stop"""
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("stop lies below start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(v) for v in np.round(start + step * np.arange(count), 9))


def _cast(param: str, value: float):
    key, cast = PARAM_KEYS[param]
    if cast is int:
        if float(value) != round(float(value)):
            raise ValueError(f"{param} takes whole numbers, got {value}")
        return key, int(round(float(value)))
    return key, float(value)


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    swept_param: str
    values: Tuple[float, ...]
    family_param: Optional[str] = None
    family_values: Tuple[float, ...] = ()
    name: str = "sweep"

    def __post_init__(self):
        if self.swept_param not in SWEPT_PARAMS:
            raise ValueError(f"cannot sweep '{self.swept_param}', expected one of {SWEPT_PARAMS}")
        if not self.values:
            raise ValueError("sweep range is empty")
        if self.family_param is not None:
            if self.family_param not in PARAM_KEYS:
                raise ValueError(f"unknown curve family parameter '{self.family_param}'")
            if self.family_param == self.swept_param:
                raise ValueError("family parameter must differ from the swept parameter")
            if not self.family_values:
                raise ValueError("curve family has no members")
        object.__setattr__(self, "values", tuple(sorted(float(v) for v in self.values)))
        object.__setattr__(self, "family_values", tuple(float(v) for v in self.family_values))

    def members(self) -> List[Optional[float]]:
        return list(self.family_values) if self.family_param else [None]

    def scenario_at(self, value: float, family_value: Optional[float] = None) -> Scenario:
        raw: Dict[str, Any] = self.base.to_raw()
        if self.family_param is not None and family_value is not None:
            key, cast_value = _cast(self.family_param, family_value)
            raw[key] = cast_value
        key, cast_value = _cast(self.swept_param, value)
        raw[key] = cast_value
        return validate_scenario(raw)


@dataclass(frozen=True)
class ParetoPoint:
    value: float
    tsr: float
    throughput_ideal: float
    throughput_real: float
    p_tf: Optional[float]
    reliability: Optional[float]


@dataclass(frozen=True)
class ParetoCurve:
    swept_param: str
    points: Tuple[ParetoPoint, ...]
    family_param: Optional[str] = None
    family_value: Optional[float] = None

    @property
    def label(self) -> str:
        if self.family_param is None:
            return self.swept_param
        return f"{self.family_param}={self.family_value:g}"

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for p in self.points:
            row = {
                "swept_param": self.swept_param,
                "value": p.value,
                "tsr": p.tsr,
                "throughput_ideal_bps": p.throughput_ideal,
                "throughput_real_bps": p.throughput_real,
                "p_tf": p.p_tf,
                "reliability": p.reliability,
            }
            if self.family_param is not None:
                row.update({"family_param": self.family_param, "family_value": self.family_value})
            rows.append(row)
        columns = RESULT_COLUMNS + (FAMILY_COLUMNS if self.family_param is not None else [])
        return pd.DataFrame(rows, columns=columns)


class ParetoSweeper:
    """Closed-form models over a parameter grid; never calls the simulator"""

    def __init__(self, throughput_mode: str = "payload"):
        self.orchestrator = AnalysisOrchestrator(throughput_mode=throughput_mode)
        self.logger = logging.getLogger(__name__)

    def _point(self, spec: SweepSpec, value: float, family_value: Optional[float]) -> ParetoPoint:
        scenario = None
        try:
            scenario = spec.scenario_at(value, family_value)
            out = self.orchestrator.analyze(scenario)
        except (LinkModelError, ValueError) as e:
            raise SweepPointError(scenario or spec.base, spec.swept_param, value, e) from e
        return ParetoPoint(
            value=value,
            tsr=out.tsr,
            throughput_ideal=out.throughput_ideal,
            throughput_real=out.throughput_real,
            p_tf=out.p_tf,
            reliability=out.reliability,
        )

    def run(self, spec: SweepSpec) -> List[ParetoCurve]:
        curves = []
        for member in spec.members():
            points = tuple(self._point(spec, value, member) for value in spec.values)
            curve = ParetoCurve(spec.swept_param, points, spec.family_param, member)
            self.logger.info(f"{spec.name}: {curve.label} done, {len(points)} points")
            curves.append(curve)
        return curves


def sweep(spec: SweepSpec, throughput_mode: str = "payload") -> List[ParetoCurve]:
    return ParetoSweeper(throughput_mode).run(spec)


def curves_to_frame(curves: Sequence[ParetoCurve]) -> pd.DataFrame:
    return pd.concat([c.to_frame() for c in curves], ignore_index=True)


@dataclass(frozen=True)
class PeakPoint:
    value: float
    throughput: float
    reliability: Optional[float]


def find_throughput_peak(curve: ParetoCurve) -> PeakPoint:
    """Grid point with the highest real throughput; ties go to the smaller payload"""
    if curve.swept_param != "payload_v":
        raise ValueError(f"peak search needs a payload sweep, got '{curve.swept_param}'")
    throughput = curve.column("throughput_real")
    best = int(np.argmax(throughput))     # first maximum = smallest payload
    point = curve.points[best]
    return PeakPoint(point.value, point.throughput_real, point.reliability)


def _trend(values: np.ndarray, rtol: float = 1e-12) -> str:
    if len(values) < 2 or np.any(np.isnan(values)):
        return "n/a"
    steps = np.diff(values)
    scale = rtol * max(1.0, float(np.max(np.abs(values))))
    if np.all(steps == 0):
        return "constant"
    if np.all(steps < 0):
        return "decreasing"
    if np.all(steps > 0):
        return "increasing"
    if np.all(steps <= scale):
        return "non-increasing"
    if np.all(steps >= -scale):
        return "non-decreasing"
    return "mixed"


def is_unimodal(values: np.ndarray, rtol: float = 1e-12) -> bool:
    """Rises then falls (either part may be empty), up to a relative tolerance"""
    if len(values) < 3:
        return True
    scale = rtol * max(1.0, float(np.max(np.abs(values))))
    peak = int(np.argmax(values))
    rising = np.diff(values[: peak + 1])
    falling = np.diff(values[peak:])
    return bool(np.all(rising >= -scale) and np.all(falling <= scale))


@dataclass(frozen=True)
class CurveSummary:
    label: str
    first: ParetoPoint
    last: ParetoPoint
    reliability_trend: str
    throughput_trend: str
    throughput_unimodal: bool
    peak: Optional[PeakPoint] = None


def summarize_curve(curve: ParetoCurve) -> CurveSummary:
    reliability = np.array([np.nan if p.reliability is None else p.reliability for p in curve.points])
    throughput = curve.column("throughput_real")
    peak = find_throughput_peak(curve) if curve.swept_param == "payload_v" else None
    return CurveSummary(
        label=curve.label,
        first=curve.points[0],
        last=curve.points[-1],
        reliability_trend=_trend(reliability),
        throughput_trend=_trend(throughput),
        throughput_unimodal=is_unimodal(throughput),
        peak=peak,
    )
