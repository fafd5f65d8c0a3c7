# src/collectors/config_loader.py
import copy
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import ConfigError, ScenarioIssue
from ..sweep.pareto import SweepSpec, linear_grid, log_grid
from .scenario import Scenario, validate_scenario

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_WORKERS = 1
DEFAULT_DATA_DIR = "data"
BLOCK_KEYS = ("sweep", "family", "simulation", "description")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError([ScenarioIssue(name, f"environment value '{raw}' is not an integer")]) from None


def default_seed() -> int:
    return _env_int("BLE_LINK_SEED", DEFAULT_SEED)


def default_workers() -> int:
    return _env_int("BLE_LINK_WORKERS", DEFAULT_WORKERS)


def default_data_dir() -> Path:
    return Path(os.getenv("BLE_LINK_DATA_DIR") or DEFAULT_DATA_DIR)


class SweepBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)

    param: str
    values: Optional[List[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = None
    points: Optional[int] = None
    scale: Literal["linear", "log"] = "linear"

    def grid(self) -> List[float]:
        if self.values is not None:
            return list(self.values)
        if self.start is None or self.stop is None:
            raise ValueError("give either 'values' or 'start' and 'stop'")
        if self.scale == "log":
            return list(log_grid(self.start, self.stop, self.points or 50))
        if self.step is not None:
            return list(linear_grid(self.start, self.stop, self.step))
        if self.points is not None:
            return [float(v) for v in np.linspace(self.start, self.stop, self.points)]
        raise ValueError("a linear range needs 'step' or 'points'")


class FamilyBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)

    param: str
    values: List[float]


class SimulationBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)

    runs: Optional[int] = None
    intervals_per_run: Optional[int] = None
    mode: Optional[Literal["transaction", "coexistence"]] = None
    channel_mode: Optional[Literal["same-channel", "uniform-37", "disjoint"]] = None


@dataclass(frozen=True)
class ConfigDocument:
    """A parsed config file: the base scenario, an optional sweep, simulator overrides"""
    name: str
    scenario: Scenario
    sweep: Optional[SweepSpec] = None
    simulation: Dict[str, Any] = field(default_factory=dict)
    description: str = ""


def _block_issues(block: str, error: ValidationError) -> List[ScenarioIssue]:
    issues = []
    for item in error.errors():
        key = ".".join([block] + [str(p) for p in item.get("loc", ())])
        if item.get("type") == "extra_forbidden":
            issues.append(ScenarioIssue(key, f"unknown key '{key}'"))
        else:
            issues.append(ScenarioIssue(key, item.get("msg", "invalid value")))
    return issues


def parse_config(document: Mapping[str, Any], name: str = "config") -> ConfigDocument:
    """Split a config mapping into scenario keys and the sweep/family/simulation blocks"""
    if not isinstance(document, Mapping):
        raise ConfigError([ScenarioIssue("<config>", "top level must be a JSON object")])

    flat = {k: v for k, v in document.items() if k not in BLOCK_KEYS}
    scenario = validate_scenario(flat)

    issues: List[ScenarioIssue] = []
    sweep_block = family_block = None
    simulation = SimulationBlock()
    for key, model in (("sweep", SweepBlock), ("family", FamilyBlock), ("simulation", SimulationBlock)):
        if key not in document:
            continue
        try:
            parsed = model.model_validate(document[key])
        except ValidationError as e:
            issues.extend(_block_issues(key, e))
            continue
        if key == "sweep":
            sweep_block = parsed
        elif key == "family":
            family_block = parsed
        else:
            simulation = parsed
    if family_block is not None and sweep_block is None:
        issues.append(ScenarioIssue("family", "a curve family needs a sweep block"))
    if issues:
        raise ConfigError(issues)

    spec = None
    if sweep_block is not None:
        try:
            spec = SweepSpec(
                base=scenario,
                swept_param=sweep_block.param,
                values=tuple(sweep_block.grid()),
                family_param=family_block.param if family_block else None,
                family_values=tuple(family_block.values) if family_block else (),
                name=name,
            )
        except ValueError as e:
            raise ConfigError([ScenarioIssue("sweep", str(e))]) from None

    return ConfigDocument(
        name=name,
        scenario=scenario,
        sweep=spec,
        simulation=simulation.model_dump(exclude_none=True),
        description=str(document.get("description", "")),
    )


def load_config_document(path: Union[str, Path]) -> ConfigDocument:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            document = json.load(f)
    except FileNotFoundError:
        raise ConfigError([ScenarioIssue(str(path), "config file not found")]) from None
    except json.JSONDecodeError as e:
        raise ConfigError([ScenarioIssue(str(path), f"not valid JSON: {e}")]) from None
    except OSError as e:
        raise ConfigError([ScenarioIssue(str(path), f"cannot read config: {e}")]) from None
    logger.info(f"Loaded config {path}")
    return parse_config(document, name=path.stem)


def load_config(path: Union[str, Path]) -> Union[Scenario, SweepSpec]:
    """The sweep when the file defines one, otherwise the single scenario"""
    doc = load_config_document(path)
    return doc.sweep if doc.sweep is not None else doc.scenario


# Evaluation set-ups. The BER of the coexistence presets stands in for a
# hardware measurement and is meant to be overridden.
_DISTURBER = {"payload_d_bytes": 50, "n": 10, "ci_d_us": 7500}
_BER_FAMILY = {"param": "ber", "values": [2e-4, 5e-4, 8e-4]}

PRESETS: Dict[str, Dict[str, Any]] = {
    "fig8_base": {
        "description": "Reliability/throughput base point: 50 B, two transactions per event, saturated disturber",
        "ber": 1e-5, "payload_v_bytes": 50, "x": 2, "ci_v_us": 7500, **_DISTURBER,
    },
    "fig8": {
        "description": "BER sweep 1e-5 to 1e-3 for payloads 50/100/150 B",
        "ber": 1e-5, "payload_v_bytes": 50, "x": 2, "ci_v_us": 7500, **_DISTURBER,
        "sweep": {"param": "ber", "start": 1e-5, "stop": 1e-3, "points": 50, "scale": "log"},
        "family": {"param": "payload_v", "values": [50, 100, 150]},
    },
    "fig9": {
        "description": "Payload sweep 0 to 251 B at three BER levels, one transaction per event",
        "ber": 5e-4, "payload_v_bytes": 125, "x": 1, "ci_v_us": 7500, **_DISTURBER,
        "sweep": {"param": "payload_v", "start": 0, "stop": 251, "step": 1},
        "family": _BER_FAMILY,
    },
    "fig10": {
        "description": "Connection interval sweep 7.5 to 45 ms at three BER levels",
        "ber": 5e-4, "payload_v_bytes": 50, "x": 1, "ci_v_us": 7500, **_DISTURBER,
        "sweep": {"param": "ci_v", "start": 7500, "stop": 45000, "step": 2500},
        "family": _BER_FAMILY,
    },
    "a1": {
        "description": "Transactions per event 1 to 5, 50 B victim, 50 B disturber with 4 packets",
        "ber": 1e-4, "payload_v_bytes": 50, "x": 1, "ci_v_us": 7500,
        "payload_d_bytes": 50, "n": 4, "ci_d_us": 7500,
        "sweep": {"param": "x", "values": [1, 2, 3, 4, 5]},
    },
    "a2": {
        "description": "Victim payload 100 to 200 B, 50 B disturber with 6 packets, same channel",
        "ber": 1e-4, "payload_v_bytes": 100, "x": 1, "ci_v_us": 7500,
        "payload_d_bytes": 50, "n": 6, "ci_d_us": 7500,
        "sweep": {"param": "payload_v", "start": 100, "stop": 200, "step": 20},
        "simulation": {"channel_mode": "same-channel"},
    },
    "a3": {
        "description": "As a2 with both connections hopping over 37 data channels",
        "ber": 1e-4, "payload_v_bytes": 100, "x": 1, "ci_v_us": 7500,
        "payload_d_bytes": 50, "n": 6, "ci_d_us": 7500,
        "sweep": {"param": "payload_v", "start": 100, "stop": 200, "step": 20},
        "simulation": {"channel_mode": "uniform-37"},
    },
}


def preset_document(name: str) -> ConfigDocument:
    if name not in PRESETS:
        raise ConfigError([ScenarioIssue("preset", f"unknown preset '{name}', expected one of {sorted(PRESETS)}")])
    return parse_config(copy.deepcopy(PRESETS[name]), name=name)


def write_presets(directory: Union[str, Path]) -> List[Path]:
    """Write every preset as <name>.json under `directory`"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, document in PRESETS.items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    return written
