# src/collectors/scenario.py
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import ScenarioIssue, ScenarioValidationError

logger = logging.getLogger(__name__)

# BLE link-layer constants
AA_BITS = 32
PACKET_OVERHEAD_BYTES = 14   # preamble 1 + AA 4 + header 2 + MIC 4 + CRC 3
MIC_BYTES = 4                # not sent on an empty PDU
MAX_PAYLOAD_BYTES = 251
MIN_CI_US = 7500
IFS_US = 150
DEFAULT_PHY_RATE_BPS = 1_000_000
MIN_PACKET_BITS = 8 * (PACKET_OVERHEAD_BYTES - MIC_BYTES)
MAX_PACKET_BITS = 8 * (MAX_PAYLOAD_BYTES + PACKET_OVERHEAD_BYTES)
HARDWARE_TRANSACTION_CAP = 5


def packet_bits_from_payload(payload_bytes: int) -> int:
    """On-air packet length in bits for a payload size (0 -> 80, 50 -> 512, 251 -> 2120)"""
    if isinstance(payload_bytes, bool) or int(payload_bytes) != payload_bytes:
        raise ValueError(f"payload must be a whole number of bytes, got {payload_bytes!r}")
    if payload_bytes < 0:
        raise ValueError("payload below 0 bytes")
    if payload_bytes > MAX_PAYLOAD_BYTES:
        raise ValueError(f"payload exceeds {MAX_PAYLOAD_BYTES} bytes (BLE specification maximum)")
    if payload_bytes == 0:
        return MIN_PACKET_BITS
    return 8 * (int(payload_bytes) + PACKET_OVERHEAD_BYTES)


def payload_from_packet_bits(bits: int) -> int:
    """Inverse of packet_bits_from_payload"""
    if bits == MIN_PACKET_BITS:
        return 0
    if bits % 8 != 0 or not 8 * (1 + PACKET_OVERHEAD_BYTES) <= bits <= MAX_PACKET_BITS:
        raise ValueError(
            f"packet length {bits} bits is not a BLE packet size "
            f"({MIN_PACKET_BITS}, or a multiple of 8 in [{8 * (1 + PACKET_OVERHEAD_BYTES)}, {MAX_PACKET_BITS}])"
        )
    return bits // 8 - PACKET_OVERHEAD_BYTES


def packet_airtime(bits: int, phy_rate: float = DEFAULT_PHY_RATE_BPS) -> float:
    """Airtime in microseconds of a packet of `bits` at `phy_rate` bits/s"""
    if bits < MIN_PACKET_BITS:
        raise ValueError(f"packet length {bits} bits is shorter than the {MIN_PACKET_BITS}-bit minimum")
    if phy_rate <= 0:
        raise ValueError("phy_rate must be positive")
    return bits * 1e6 / phy_rate


def ber_from_packet_corruption(corruption_rate: float, bits: int, exact: bool = False) -> float:
    """
    BER estimate from a measured packet corruption rate.
    Linear form (rate / bits) is the usual measurement shortcut;
    exact=True inverts rho = (1 - BER)^bits instead.
    """
    if not 0.0 <= corruption_rate <= 1.0:
        raise ValueError("corruption rate must lie in [0, 1]")
    if bits < 1:
        raise ValueError("bits must be at least 1")
    if exact:
        return 1.0 - (1.0 - corruption_rate) ** (1.0 / bits)
    return corruption_rate / bits


@dataclass(frozen=True)
class ChannelCondition:
    ber: float
    phy_rate: float = DEFAULT_PHY_RATE_BPS

    def __post_init__(self):
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError("ber must lie in [0, 1]")
        if self.phy_rate <= 0:
            raise ValueError("phy_rate must be positive")


@dataclass(frozen=True)
class PacketSpec:
    payload_bytes: int
    total_bits: int
    airtime: float          # microseconds
    aa_bits: int = AA_BITS

    def __post_init__(self):
        if self.total_bits != packet_bits_from_payload(self.payload_bytes):
            raise ValueError("total_bits does not match payload_bytes")
        if self.total_bits < self.aa_bits:
            raise ValueError("packet shorter than its access address")

    @classmethod
    def from_payload(cls, payload_bytes: int, phy_rate: float = DEFAULT_PHY_RATE_BPS) -> "PacketSpec":
        bits = packet_bits_from_payload(payload_bytes)
        return cls(payload_bytes=int(payload_bytes), total_bits=bits, airtime=packet_airtime(bits, phy_rate))


@dataclass(frozen=True)
class VictimConfig:
    packet_cp: PacketSpec
    packet_pc: PacketSpec
    x: int
    ci: float               # microseconds

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be at least 1")
        if self.ci < MIN_CI_US:
            raise ValueError(f"connection interval below {MIN_CI_US} us")

    @property
    def m(self) -> int:
        """Victim packets per connection event"""
        return 2 * self.x

    @property
    def mean_bits(self) -> float:
        return (self.packet_cp.total_bits + self.packet_pc.total_bits) / 2

    @property
    def mean_airtime(self) -> float:
        return (self.packet_cp.airtime + self.packet_pc.airtime) / 2


@dataclass(frozen=True)
class DisturberConfig:
    packet: PacketSpec
    n: int
    ci_d: float             # microseconds

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.ci_d < MIN_CI_US:
            raise ValueError(f"disturber connection interval below {MIN_CI_US} us")


@dataclass(frozen=True)
class Scenario:
    channel: ChannelCondition
    victim: VictimConfig
    disturber: Optional[DisturberConfig] = None
    ifs: float = IFS_US

    def __post_init__(self):
        if self.ifs != IFS_US:
            raise ValueError(f"IFS is fixed at {IFS_US} us")

    def to_raw(self) -> Dict[str, Any]:
        """Flat key-value form accepted by validate_scenario"""
        raw = {
            "ber": self.channel.ber,
            "payload_v_bytes": self.victim.packet_cp.payload_bytes,
            "x": self.victim.x,
            "ci_v_us": self.victim.ci,
            "ifs_us": self.ifs,
            "phy_rate_bps": self.channel.phy_rate,
        }
        if self.victim.packet_pc.payload_bytes != self.victim.packet_cp.payload_bytes:
            raw["payload_pc_bytes"] = self.victim.packet_pc.payload_bytes
        if self.disturber is not None:
            raw.update({
                "payload_d_bytes": self.disturber.packet.payload_bytes,
                "n": self.disturber.n,
                "ci_d_us": self.disturber.ci_d,
            })
        return raw


class ScenarioConfig(BaseModel):
    """Schema of the flat scenario document (types and key names only)"""
    model_config = ConfigDict(extra="forbid", strict=True)

    ber: float
    payload_v_bytes: int
    payload_pc_bytes: Optional[int] = None
    x: int = 1
    ci_v_us: float = float(MIN_CI_US)
    payload_d_bytes: Optional[int] = None
    n: Optional[int] = None
    ci_d_us: Optional[float] = None
    ifs_us: float = float(IFS_US)
    phy_rate_bps: float = float(DEFAULT_PHY_RATE_BPS)


DISTURBER_KEYS = ("payload_d_bytes", "n", "ci_d_us")


def _schema_issues(error: ValidationError) -> List[ScenarioIssue]:
    issues = []
    for item in error.errors():
        key = ".".join(str(part) for part in item.get("loc", ())) or "<config>"
        if item.get("type") == "extra_forbidden":
            issues.append(ScenarioIssue(key, f"unknown key '{key}'"))
        elif item.get("type") == "missing":
            issues.append(ScenarioIssue(key, "required key missing"))
        else:
            issues.append(ScenarioIssue(key, f"type mismatch: {item.get('msg')}"))
    return issues


def _check_payload(issues: List[ScenarioIssue], key: str, value: int):
    if value < 0:
        issues.append(ScenarioIssue(key, "payload below 0 bytes"))
    elif value > MAX_PAYLOAD_BYTES:
        issues.append(ScenarioIssue(key, f"payload exceeds {MAX_PAYLOAD_BYTES} bytes (BLE specification maximum)"))


def _check_ci(issues: List[ScenarioIssue], key: str, value: float):
    if not math.isfinite(value) or value < MIN_CI_US:
        issues.append(ScenarioIssue(key, f"connection interval below {MIN_CI_US} us (BLE specification minimum)"))


def validate_scenario(raw: Mapping[str, Any]) -> Scenario:
    """
    Build a Scenario from a flat config mapping.
    Every violated invariant is collected; a ScenarioValidationError carries the full list.
    """
    try:
        cfg = ScenarioConfig.model_validate(dict(raw))
    except ValidationError as e:
        raise ScenarioValidationError(_schema_issues(e)) from None

    issues: List[ScenarioIssue] = []

    if not (math.isfinite(cfg.ber) and 0.0 <= cfg.ber <= 1.0):
        issues.append(ScenarioIssue("ber", "ber must lie in [0, 1]"))
    if not (math.isfinite(cfg.phy_rate_bps) and cfg.phy_rate_bps > 0):
        issues.append(ScenarioIssue("phy_rate_bps", "phy rate must be positive"))
    _check_payload(issues, "payload_v_bytes", cfg.payload_v_bytes)
    if cfg.payload_pc_bytes is not None:
        _check_payload(issues, "payload_pc_bytes", cfg.payload_pc_bytes)
    if cfg.x < 1:
        issues.append(ScenarioIssue("x", "transactions per connection event below 1"))
    _check_ci(issues, "ci_v_us", cfg.ci_v_us)
    if cfg.ifs_us != IFS_US:
        issues.append(ScenarioIssue("ifs_us", f"IFS is fixed at {IFS_US} us"))

    given = [k for k in DISTURBER_KEYS if getattr(cfg, k) is not None]
    has_disturber = bool(given)
    if has_disturber and len(given) != len(DISTURBER_KEYS):
        for k in DISTURBER_KEYS:
            if getattr(cfg, k) is None:
                issues.append(ScenarioIssue(k, "required when any disturber key is given"))
    if cfg.payload_d_bytes is not None:
        _check_payload(issues, "payload_d_bytes", cfg.payload_d_bytes)
    if cfg.n is not None and cfg.n < 1:
        issues.append(ScenarioIssue("n", "disturber packets per event below 1"))
    if cfg.ci_d_us is not None:
        _check_ci(issues, "ci_d_us", cfg.ci_d_us)

    if issues:
        raise ScenarioValidationError(issues)

    if cfg.x > HARDWARE_TRANSACTION_CAP:
        logger.warning(f"x={cfg.x} exceeds the {HARDWARE_TRANSACTION_CAP} transactions most BLE devices allow")

    pc_payload = cfg.payload_v_bytes if cfg.payload_pc_bytes is None else cfg.payload_pc_bytes
    victim = VictimConfig(
        packet_cp=PacketSpec.from_payload(cfg.payload_v_bytes, cfg.phy_rate_bps),
        packet_pc=PacketSpec.from_payload(pc_payload, cfg.phy_rate_bps),
        x=cfg.x,
        ci=float(cfg.ci_v_us),
    )
    disturber = None
    if has_disturber:
        disturber = DisturberConfig(
            packet=PacketSpec.from_payload(cfg.payload_d_bytes, cfg.phy_rate_bps),
            n=cfg.n,
            ci_d=float(cfg.ci_d_us),
        )
    return Scenario(
        channel=ChannelCondition(ber=float(cfg.ber), phy_rate=float(cfg.phy_rate_bps)),
        victim=victim,
        disturber=disturber,
        ifs=float(cfg.ifs_us),
    )
