"""Reading-cycle orchestration and multi-cycle experiments.

A reading cycle alternates transmission frames and acknowledgment frames:
every still-unacknowledged tag transmits once per frame in its hash-selected
slot, the reader decodes what it can (capture rule, intra-slot SIC, or the
full inter-frame engine depending on the receiver mode), and all first-time
detections are acknowledged at the end of the frame and fall silent. The
cycle ends when no tag remains or the frame budget runs out.

Randomness is keyed so that the three receiver modes consume identical
realisations: the population follows the cycle seed, and the gain of tag i
in frame r is element i of a stream keyed by (cycle seed, r), drawn for the
whole population whether or not a tag still transmits.
"""

from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .channel import channel_model, draw_gains
from .isic import exhaustive_isic
from .model import (
    ConfigError,
    CycleResult,
    DecodeEvent,
    FrameRecord,
    ProtocolConfig,
    RECEIVER_MODES,
    SlotState,
    TagId,
    TagPopulation,
    generate_population,
    splitmix64,
    validate_config,
)
from .receiver import capture_only_decode, sic_decode
from .slothash import select_slots_batch, tag_bits_matrix

_GAIN_DOMAIN = 0xFAD0  # stream separation constant for per-frame gain draws


@dataclass(frozen=True)
class AckFrame:
    """Acknowledgment frame: ids confirmed after one transmission frame, ascending."""

    frame_index: int
    acked_ids: tuple[TagId, ...]


def _snapshot(frame: FrameRecord) -> FrameRecord:
    return FrameRecord(
        index=frame.index,
        slots=[s.copy() for s in frame.slots],
        slot_of=dict(frame.slot_of),
    )


class CycleSimulator:
    """Step-by-step simulation of one reading cycle.

    keep_pristine stores an untouched copy of every frame as built, which the
    equivalence tests feed to the fixed-point oracle. trace and
    delivery_counts are handed through to the inter-frame engine.
    """

    def __init__(
        self,
        cfg: ProtocolConfig,
        population: TagPopulation,
        seed: int,
        mode: str = "isic",
        keep_pristine: bool = False,
        trace: list | None = None,
        delivery_counts: Counter | None = None,
    ):
        errors = validate_config(cfg)
        if errors:
            raise ConfigError("; ".join(errors))
        if mode not in RECEIVER_MODES:
            raise ValueError(f"mode {mode!r} not one of {RECEIVER_MODES}")
        if not isinstance(seed, int) or seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self.cfg = cfg
        self.population = population
        self.seed = seed
        self.mode = mode
        self.trace = trace
        self.delivery_counts = delivery_counts
        self.model = channel_model(cfg)
        self._bits = tag_bits_matrix(population.tags)
        self._budget = cfg.frame_budget(population.size)
        self._active: list[int] = list(range(population.size))  # indices into population.tags
        self.frames: list[FrameRecord] = []
        self.pristine: list[FrameRecord] | None = [] if keep_pristine else None
        self.decoded: set[TagId] = set()
        self.decode_log: list[DecodeEvent] = []
        self.residual_trace: list[int] = []
        self.af_lengths: list[int] = []
        self._gain_cache: np.ndarray | None = None

    @property
    def frames_run(self) -> int:
        return len(self.residual_trace)

    @property
    def done(self) -> bool:
        return not self._active or self.frames_run >= self._budget

    def _frame_gains(self, r: int) -> np.ndarray:
        if self.cfg.channel.fading == "per-cycle":
            if self._gain_cache is None:
                rng = np.random.default_rng([self.seed, _GAIN_DOMAIN, 1])
                self._gain_cache = draw_gains(self.model, rng, self.population.size)
            return self._gain_cache
        rng = np.random.default_rng([self.seed, _GAIN_DOMAIN, r])
        return draw_gains(self.model, rng, self.population.size)

    def run_frame(self) -> tuple[FrameRecord, AckFrame]:
        """Simulate the next transmission frame and its acknowledgment frame."""
        if self.done:
            raise RuntimeError("reading cycle already finished")
        r = self.frames_run + 1
        cfg = self.cfg
        tags = self.population.tags
        slot_choices = select_slots_batch(self._bits[self._active], r, cfg.k, cfg.interleaver_seed)
        gains = self._frame_gains(r)
        frame = FrameRecord(index=r, slots=[SlotState() for _ in range(cfg.k)])
        for row, s in zip(self._active, slot_choices.tolist()):
            tag = tags[row]
            frame.slots[s].components[tag] = float(gains[row])
            frame.slot_of[tag] = s
        self.frames.append(frame)
        if self.pristine is not None:
            self.pristine.append(_snapshot(frame))

        initial: list[TagId] = []
        for s in sorted(set(slot_choices.tolist())):
            if self.mode == "capture":
                outcome = capture_only_decode(frame.slots[s], cfg.gamma)
            else:
                outcome = sic_decode(frame.slots[s], cfg.gamma, cfg.beta)
            if not outcome.decoded:
                continue
            frame.slots[s] = outcome.updated_slot
            for pos, tag in enumerate(outcome.decoded):
                frame.removed.add(tag)
                frame.decoded_here.add(tag)
                self.decoded.add(tag)
                mechanism = "capture" if pos == 0 else "intra-sic"
                self.decode_log.append(DecodeEvent(tag, r, r, mechanism))
            initial.extend(outcome.decoded)

        newly = list(initial)
        if self.mode == "isic":
            all_detections = exhaustive_isic(
                self.frames,
                initial,
                cfg.gamma,
                cfg.beta,
                self.decoded,
                self.population.size,
                trace=self.trace,
                delivery_counts=self.delivery_counts,
            )
            for tag, transmitted in all_detections[len(initial):]:
                self.decode_log.append(DecodeEvent(tag, r, transmitted, "isic"))
                newly.append(tag)

        ack = AckFrame(r, tuple(sorted(newly)))
        confirmed = set(newly)
        self._active = [row for row in self._active if tags[row] not in confirmed]
        self.af_lengths.append(len(newly))
        self.residual_trace.append(len(self._active))
        return frame, ack

    def run(self) -> CycleResult:
        while not self.done:
            self.run_frame()
        return CycleResult(
            m=self.frames_run,
            residual_trace=tuple(self.residual_trace),
            decode_log=tuple(self.decode_log),
            seed=self.seed,
            complete=not self._active,
            af_lengths=tuple(self.af_lengths),
        )


def run_reading_cycle(
    cfg: ProtocolConfig,
    population: TagPopulation,
    seed: int,
    mode: str = "isic",
) -> CycleResult:
    """Simulate one complete reading cycle and return its result."""
    return CycleSimulator(cfg, population, seed, mode).run()


# --- experiments over population sizes and replications -----------------------


def derive_cycle_seed(base_seed: int, i: int, replication: int) -> int:
    """Cycle seed for one (population size, replication) cell.

    Independent of receiver mode and channel, so those comparisons share
    populations and gain streams.
    """
    return (base_seed ^ splitmix64((i << 32) ^ replication)) & 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class CycleRecord:
    """Flat per-cycle summary used for CSV output and metrics."""

    mode: str
    channel: str
    k: int
    i: int
    replication: int
    seed: int
    m: int
    complete: bool
    residual_trace: tuple[int, ...]


def _run_one(cfg: ProtocolConfig, i: int, replication: int, mode: str, base_seed: int) -> CycleRecord:
    seed = derive_cycle_seed(base_seed, i, replication)
    population = generate_population(i, seed)
    result = run_reading_cycle(cfg, population, seed, mode)
    return CycleRecord(
        mode=mode,
        channel=cfg.channel.kind,
        k=cfg.k,
        i=i,
        replication=replication,
        seed=seed,
        m=result.m,
        complete=result.complete,
        residual_trace=result.residual_trace,
    )


def run_experiment(
    cfg: ProtocolConfig,
    i_values,
    replications: int,
    base_seed: int,
    modes=RECEIVER_MODES,
    threads: int = 1,
) -> list[CycleRecord]:
    """Run replications of every (I, mode) cell; deterministic regardless of threads.

    Results are merged by sorting on (i, replication, mode), so a worker pool
    yields byte-identical output to a single-threaded run.
    """
    errors = validate_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))
    i_values = [int(i) for i in i_values]
    modes = list(modes)
    if not i_values or not modes:
        raise ValueError("i_values and modes must be non-empty")
    for mode in modes:
        if mode not in RECEIVER_MODES:
            raise ValueError(f"mode {mode!r} not one of {RECEIVER_MODES}")
    if replications < 1:
        raise ValueError("replications must be at least 1")
    jobs = [
        (i, rep, mode)
        for i in i_values
        for rep in range(replications)
        for mode in modes
    ]
    if threads <= 1:
        records = [_run_one(cfg, i, rep, mode, base_seed) for i, rep, mode in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_one, cfg, i, rep, mode, base_seed) for i, rep, mode in jobs]
            records = [f.result() for f in futures]
    records.sort(key=lambda rec: (rec.i, rec.replication, rec.mode))
    return records
