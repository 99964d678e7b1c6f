"""Monte-Carlo simulator of framed slotted Aloha RFID inventory.

Tags pick their slot in every frame through a deterministic hash of their id
and the frame index, so the reader can reconstruct past schedules and cancel
decoded signals from stored frames. Three receiver models are available:
plain capture, intra-slot successive interference cancellation, and the
exhaustive inter-frame cancellation engine.
"""

from .channel import ChannelModel, channel_model, draw_gain, draw_gains
from .isic import IsicConsistencyError, exhaustive_isic, fixpoint_oracle, isic_node
from .metrics import (
    ExperimentSpec,
    SummaryRow,
    ThroughputPoint,
    emit_csv,
    emit_plots,
    load_experiment_spec,
    percentile,
    read_csv,
    residual_trace_aggregate,
    summarize,
    throughput,
)
from .model import (
    ChannelSpec,
    ConfigError,
    CycleResult,
    DecodeEvent,
    FrameRecord,
    ProtocolConfig,
    SlotState,
    TagPopulation,
    generate_population,
    load_config,
    splitmix64,
    tag_hex,
    validate_config,
)
from .receiver import DecodeOutcome, cancel_component, capture_only_decode, sic_decode, sinr_of
from .runner import (
    AckFrame,
    CycleRecord,
    CycleSimulator,
    derive_cycle_seed,
    run_experiment,
    run_reading_cycle,
)
from .slothash import (
    Interleaver,
    SlotSchedule,
    build_interleaver,
    crc16,
    frame_interleaver,
    frame_interleaver_seed,
    golden_records,
    precompute_schedule,
    select_slot,
    select_slots_batch,
    tag_bits_matrix,
    verify_golden,
    write_golden,
)

__version__ = "0.1.0"

__all__ = [
    "AckFrame",
    "ChannelModel",
    "ChannelSpec",
    "ConfigError",
    "CycleRecord",
    "CycleResult",
    "CycleSimulator",
    "DecodeEvent",
    "DecodeOutcome",
    "ExperimentSpec",
    "FrameRecord",
    "Interleaver",
    "IsicConsistencyError",
    "ProtocolConfig",
    "SlotSchedule",
    "SlotState",
    "SummaryRow",
    "TagPopulation",
    "ThroughputPoint",
    "build_interleaver",
    "cancel_component",
    "capture_only_decode",
    "channel_model",
    "crc16",
    "derive_cycle_seed",
    "draw_gain",
    "draw_gains",
    "emit_csv",
    "emit_plots",
    "exhaustive_isic",
    "fixpoint_oracle",
    "frame_interleaver",
    "frame_interleaver_seed",
    "generate_population",
    "golden_records",
    "isic_node",
    "load_config",
    "load_experiment_spec",
    "percentile",
    "precompute_schedule",
    "read_csv",
    "residual_trace_aggregate",
    "run_experiment",
    "run_reading_cycle",
    "select_slot",
    "select_slots_batch",
    "sic_decode",
    "sinr_of",
    "splitmix64",
    "summarize",
    "tag_bits_matrix",
    "tag_hex",
    "throughput",
    "validate_config",
    "verify_golden",
    "write_golden",
]
