"""Core domain types for the framed slotted Aloha inventory simulator.

Power convention: the thermal noise floor is normalised to 1.0, so a tag
population with average SNR ``snr_db`` has mean received power
``10 ** (snr_db / 10)`` per transmission.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

TagId = int  # 128-bit identifier, 0 <= id < 2**128

TAG_ID_BITS = 128
FRAME_INDEX_BITS = 16
MAX_FRAME_INDEX = 2**FRAME_INDEX_BITS - 1
MESSAGE_BITS = TAG_ID_BITS + FRAME_INDEX_BITS
NOISE_POWER = 1.0

DEFAULT_INTERLEAVER_SEED = 0x5EED_CAFE_F00D_0001

CHANNEL_KINDS = ("rayleigh", "rician")
FADING_MODES = ("per-frame", "per-cycle")
RECEIVER_MODES = ("capture", "sic", "isic")
MECHANISMS = ("capture", "intra-sic", "isic")


class ConfigError(ValueError):
    """Raised when a configuration file or mapping cannot be turned into a valid config."""


def tag_hex(tag: TagId) -> str:
    """Canonical 32-digit hex rendering of a tag identifier."""
    return f"{tag:032x}"


def splitmix64(x: int) -> int:
    """Deterministic 64-bit mixing function (splitmix64 finaliser).

    Used wherever two integers must be folded into one well-mixed 64-bit
    seed: per-frame interleaver seeds and per-replication cycle seeds.
    """
    z = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


@dataclass(frozen=True)
class TagPopulation:
    """Ordered collection of distinct 128-bit tag identifiers."""

    tags: tuple[TagId, ...]

    def __post_init__(self):
        if len(self.tags) < 1:
            raise ValueError("population must hold at least one tag")
        for t in self.tags:
            if not 0 <= t < 2**TAG_ID_BITS:
                raise ValueError(f"tag id {t!r} outside the 128-bit range")
        if len(set(self.tags)) != len(self.tags):
            raise ValueError("tag ids must be distinct")

    @property
    def size(self) -> int:
        return len(self.tags)

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self):
        return iter(self.tags)


def generate_population(i: int, seed: int) -> TagPopulation:
    """Draw ``i`` distinct uniform 128-bit tag ids, deterministically from ``seed``.

    Duplicates (astronomically unlikely) are redrawn so the result is always
    distinct.
    """
    if i < 1:
        raise ValueError("population size must be at least 1")
    rng = np.random.default_rng(seed)
    out: list[int] = []
    seen: set[int] = set()
    while len(out) < i:
        draw = rng.integers(0, 2**64, size=(i - len(out), 2), dtype=np.uint64)
        hi = draw[:, 0].tolist()
        lo = draw[:, 1].tolist()
        for h, l in zip(hi, lo):
            v = (h << 64) | l
            if v not in seen:
                seen.add(v)
                out.append(v)
    return TagPopulation(tuple(out))


@dataclass(frozen=True)
class ChannelSpec:
    """Selects the fading model applied to every transmission."""

    kind: str = "rayleigh"  # "rayleigh" | "rician"
    k_factor_db: float = 3.0  # Rician K-factor in dB; ignored for Rayleigh
    fading: str = "per-frame"  # "per-frame": fresh draw each frame; "per-cycle": one draw per cycle


@dataclass(frozen=True)
class ProtocolConfig:
    """Protocol and receiver parameters shared by reader and tags."""

    k: int = 128  # slots per frame, power of two
    gamma: float = 2.0  # SINR capture threshold (linear)
    beta: float = 0.0  # residual interference fraction left by a cancellation
    snr_db: float = 20.0  # mean received SNR per tag transmission
    channel: ChannelSpec = field(default_factory=ChannelSpec)
    max_frames: int | None = None  # None -> 10 * ceil(I / k) + 50, fixed at cycle start
    interleaver_seed: int = DEFAULT_INTERLEAVER_SEED

    @property
    def mean_power(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    def frame_budget(self, population_size: int) -> int:
        if self.max_frames is not None:
            return self.max_frames
        return 10 * math.ceil(population_size / self.k) + 50


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def validate_config(cfg: ProtocolConfig) -> list[str]:
    """Check every config invariant; return one message per violated field.

    Returns an empty list when the config is acceptable. Never raises.
    """
    errors: list[str] = []
    if not isinstance(cfg.k, int) or not _is_power_of_two(cfg.k) or cfg.k < 2:
        errors.append(f"k: {cfg.k!r} is not a power of two >= 2")
    elif cfg.k > 2**FRAME_INDEX_BITS:
        errors.append(f"k: {cfg.k!r} exceeds the 2**16 slots addressable by the 16-bit hash")
    if not (isinstance(cfg.gamma, (int, float)) and math.isfinite(cfg.gamma) and cfg.gamma > 0):
        errors.append(f"gamma: {cfg.gamma!r} must be a positive finite threshold")
    if not (isinstance(cfg.beta, (int, float)) and 0.0 <= cfg.beta <= 1.0):
        errors.append(f"beta: {cfg.beta!r} out of [0, 1]")
    if not (isinstance(cfg.snr_db, (int, float)) and math.isfinite(cfg.snr_db)):
        errors.append(f"snr_db: {cfg.snr_db!r} must be finite")
    if cfg.channel.kind not in CHANNEL_KINDS:
        errors.append(f"channel.kind: {cfg.channel.kind!r} not one of {CHANNEL_KINDS}")
    if not (isinstance(cfg.channel.k_factor_db, (int, float)) and math.isfinite(cfg.channel.k_factor_db)):
        errors.append(f"channel.k_factor_db: {cfg.channel.k_factor_db!r} must be finite")
    if cfg.channel.fading not in FADING_MODES:
        errors.append(f"channel.fading: {cfg.channel.fading!r} not one of {FADING_MODES}")
    if cfg.max_frames is not None and (not isinstance(cfg.max_frames, int) or cfg.max_frames < 1):
        errors.append(f"max_frames: {cfg.max_frames!r} must be a positive integer or unset")
    if not isinstance(cfg.interleaver_seed, int) or not 0 <= cfg.interleaver_seed < 2**64:
        errors.append(f"interleaver_seed: {cfg.interleaver_seed!r} outside the 64-bit range")
    return errors


# --- flat key = value config files -------------------------------------------

CONFIG_KEYS = frozenset(
    {
        "k",
        "gamma",
        "beta",
        "snr_db",
        "max_frames",
        "interleaver_seed",
        "channel.kind",
        "channel.k_factor_db",
        "channel.fading",
    }
)


def parse_flat_file(path) -> dict[str, str]:
    """Parse a flat ``key = value`` text file. '#' starts a comment."""
    mapping: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = line.split("=", 1)
            key = key.strip()
            value = value.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if key in mapping:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            mapping[key] = value
    return mapping


def _parse_int(key: str, s: str) -> int:
    try:
        return int(s, 0)  # accepts decimal and 0x-prefixed values
    except ValueError:
        raise ConfigError(f"{key}: {s!r} is not an integer") from None


def _parse_float(key: str, s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{key}: {s!r} is not a number") from None


def config_from_mapping(mapping: dict[str, str]) -> ProtocolConfig:
    """Build a ProtocolConfig from the config subset of a flat mapping.

    Keys outside CONFIG_KEYS are ignored here so experiment files can carry
    extra settings; use load_config for strict parsing of a pure config file.
    """
    base = ProtocolConfig()
    kwargs = {}
    chan = {}
    if "k" in mapping:
        kwargs["k"] = _parse_int("k", mapping["k"])
    if "gamma" in mapping:
        kwargs["gamma"] = _parse_float("gamma", mapping["gamma"])
    if "beta" in mapping:
        kwargs["beta"] = _parse_float("beta", mapping["beta"])
    if "snr_db" in mapping:
        kwargs["snr_db"] = _parse_float("snr_db", mapping["snr_db"])
    if "max_frames" in mapping:
        kwargs["max_frames"] = _parse_int("max_frames", mapping["max_frames"])
    if "interleaver_seed" in mapping:
        kwargs["interleaver_seed"] = _parse_int("interleaver_seed", mapping["interleaver_seed"])
    if "channel.kind" in mapping:
        chan["kind"] = mapping["channel.kind"]
    if "channel.k_factor_db" in mapping:
        chan["k_factor_db"] = _parse_float("channel.k_factor_db", mapping["channel.k_factor_db"])
    if "channel.fading" in mapping:
        chan["fading"] = mapping["channel.fading"]
    if chan:
        kwargs["channel"] = ChannelSpec(**{**base.channel.__dict__, **chan})
    cfg = ProtocolConfig(**kwargs)
    errors = validate_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))
    return cfg


def load_config(path) -> ProtocolConfig:
    """Load a ProtocolConfig from a flat key = value file; unknown keys are errors."""
    mapping = parse_flat_file(path)
    unknown = sorted(set(mapping) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return config_from_mapping(mapping)


# --- per-cycle state ----------------------------------------------------------


@dataclass
class SlotState:
    """Receiver-side view of one slot: superposed components plus noise.

    components maps tag id -> received power. residual_power accumulates the
    fraction beta of every cancelled component. Mutable only while the owning
    cycle is being simulated.
    """

    components: dict[TagId, float] = field(default_factory=dict)
    residual_power: float = 0.0
    noise_power: float = NOISE_POWER

    def copy(self) -> "SlotState":
        return SlotState(dict(self.components), self.residual_power, self.noise_power)


@dataclass
class FrameRecord:
    """One stored transmission frame: slot states plus decode bookkeeping.

    slot_of keeps the reader-side slot position of every tag that transmitted
    in this frame; removed tracks which of those components have left the slot
    (decoded in place or cancelled by inter-frame messages).
    """

    index: int  # 1-based frame number within the cycle
    slots: list[SlotState]
    decoded_here: set[TagId] = field(default_factory=set)
    slot_of: dict[TagId, int] = field(default_factory=dict)
    removed: set[TagId] = field(default_factory=set)


@dataclass(frozen=True)
class DecodeEvent:
    """One first-time tag detection within a cycle."""

    tag: TagId
    frame_decoded: int  # frame whose processing produced the detection
    frame_transmitted: int  # frame holding the slot that was decoded
    mechanism: str  # "capture" | "intra-sic" | "isic"


@dataclass(frozen=True)
class CycleResult:
    """Outcome of one reading cycle."""

    m: int  # frames executed
    residual_trace: tuple[int, ...]  # unacknowledged tags after each frame
    decode_log: tuple[DecodeEvent, ...]
    seed: int
    complete: bool  # False when the frame budget ran out first
    af_lengths: tuple[int, ...]  # acknowledged ids per frame

    def to_json(self) -> str:
        """Deterministic serialization; identical bytes for identical cycles."""
        doc = {
            "m": self.m,
            "seed": self.seed,
            "complete": self.complete,
            "residual_trace": list(self.residual_trace),
            "af_lengths": list(self.af_lengths),
            "decode_log": [
                {
                    "tag": tag_hex(e.tag),
                    "frame_decoded": e.frame_decoded,
                    "frame_transmitted": e.frame_transmitted,
                    "mechanism": e.mechanism,
                }
                for e in self.decode_log
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
