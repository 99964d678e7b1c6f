"""Deterministic slot selection shared by tags and reader.

A tag's slot in frame r is a pure function of its 128-bit id, the frame
index, and a shared 64-bit interleaver seed: the id (MSB first) is
concatenated with the 16-bit big-endian frame index, the resulting 144-bit
message is permuted by the frame's pseudo-random interleaver, and the
CRC-16/CCITT-FALSE of the permuted bits (grouped into bytes MSB first)
supplies the slot: the log2(K) most significant CRC bits.

The interleaver is re-derived for every frame index (seed mixed with the
frame number through splitmix64). A single fixed permutation would make the
whole map GF(2)-linear in the id: any two tags whose slots coincide in one
frame would then coincide in every frame, and such pairs never resolve. The
per-frame permutation breaks that coupling while staying a pure function of
(seed, r) that tags and reader evaluate independently.

Conventions pinned here so independent implementations agree bit for bit:

* frame seed: splitmix64(interleaver_seed XOR r) for frame index r;
* interleaver: Fisher-Yates over the identity permutation of 144 positions,
  driven by the 64-bit LCG state' = state * 6364136223846793005
  + 1442695040888963407 (mod 2**64), seeded with the frame seed; each step
  uses j = (state' >> 32) mod (i + 1) and swaps positions i and j for
  i = 143 .. 1;
* permutation applied as a gather: output bit n = input bit permutation[n];
* CRC-16/CCITT-FALSE: polynomial 0x1021, initial value 0xFFFF, no bit
  reflection, no final xor (check value over ASCII "123456789" is 0x29B1).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .model import (
    DEFAULT_INTERLEAVER_SEED,
    FRAME_INDEX_BITS,
    MAX_FRAME_INDEX,
    MESSAGE_BITS,
    TAG_ID_BITS,
    TagId,
    splitmix64,
    tag_hex,
)

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1

CRC_POLY = 0x1021
CRC_INIT = 0xFFFF


@dataclass(frozen=True)
class Interleaver:
    """Fixed bijection over bit positions 0 .. len-1."""

    permutation: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError("permutation is not a bijection over 0..len-1")

    def __len__(self) -> int:
        return len(self.permutation)


def build_interleaver(length: int = MESSAGE_BITS, seed: int = DEFAULT_INTERLEAVER_SEED) -> Interleaver:
    """Fisher-Yates shuffle of the identity permutation, driven by the fixed LCG."""
    if length < 1:
        raise ValueError("length must be at least 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed outside the 64-bit range")
    state = seed
    perm = list(range(length))
    for i in range(length - 1, 0, -1):
        state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        j = (state >> 32) % (i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return Interleaver(tuple(perm))


def frame_interleaver_seed(frame_index: int, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> int:
    """64-bit Fisher-Yates seed for one frame: splitmix64(seed XOR frame_index)."""
    if not 0 <= interleaver_seed < 2**64:
        raise ValueError("seed outside the 64-bit range")
    if not 1 <= frame_index <= MAX_FRAME_INDEX:
        raise ValueError(f"frame index {frame_index} outside the 16-bit schedule horizon 1..{MAX_FRAME_INDEX}")
    return splitmix64(interleaver_seed ^ frame_index)


@lru_cache(maxsize=8192)
def frame_interleaver(frame_index: int, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> Interleaver:
    """The 144-position interleaver used by every tag in frame ``frame_index``."""
    return build_interleaver(MESSAGE_BITS, frame_interleaver_seed(frame_index, interleaver_seed))


@lru_cache(maxsize=8192)
def _frame_perm_array(frame_index: int, interleaver_seed: int) -> np.ndarray:
    arr = np.asarray(frame_interleaver(frame_index, interleaver_seed).permutation, dtype=np.intp)
    arr.setflags(write=False)
    return arr


def crc16(bits: Iterable[int]) -> int:
    """Bit-serial CRC-16/CCITT-FALSE over a bit sequence, MSB first.

    An empty sequence yields the initial register value 0xFFFF. For inputs
    that are whole bytes (MSB-first grouping) this matches the standard
    byte-wise algorithm.
    """
    crc = CRC_INIT
    for b in bits:
        top = ((crc >> 15) ^ (b & 1)) & 1
        crc = (crc << 1) & 0xFFFF
        if top:
            crc ^= CRC_POLY
    return crc


def _check_k(k: int) -> int:
    """Validate the frame size and return log2(k)."""
    if not isinstance(k, int) or k < 2 or (k & (k - 1)) != 0:
        raise ValueError(f"k must be a power of two >= 2, got {k!r}")
    log2k = k.bit_length() - 1
    if log2k > 16:
        raise ValueError(f"k={k} exceeds the 16 bits available from the CRC")
    return log2k


def _message_bits(tag: TagId, frame_index: int) -> list[int]:
    bits = [(tag >> (TAG_ID_BITS - 1 - j)) & 1 for j in range(TAG_ID_BITS)]
    bits += [(frame_index >> (FRAME_INDEX_BITS - 1 - j)) & 1 for j in range(FRAME_INDEX_BITS)]
    return bits


def select_slot(tag: TagId, frame_index: int, k: int, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> int:
    """Slot chosen by ``tag`` in frame ``frame_index`` for frame size ``k``.

    Slots are 0-based internally; human-facing output adds 1 where needed.
    """
    log2k = _check_k(k)
    if not 0 <= tag < 2**TAG_ID_BITS:
        raise ValueError("tag id outside the 128-bit range")
    interleaver = frame_interleaver(frame_index, interleaver_seed)
    bits = _message_bits(tag, frame_index)
    permuted = [bits[p] for p in interleaver.permutation]
    return crc16(permuted) >> (16 - log2k)


@dataclass(frozen=True)
class SlotSchedule:
    """Slots selected by one tag for frames 1 .. len(slots)."""

    tag: TagId
    k: int
    slots: tuple[int, ...]

    def slot_for(self, frame_index: int) -> int:
        return self.slots[frame_index - 1]


def precompute_schedule(tag: TagId, k: int, horizon: int, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> SlotSchedule:
    """Precompute a tag's slots for frames 1..horizon."""
    if not 1 <= horizon <= MAX_FRAME_INDEX:
        raise ValueError(f"horizon {horizon} outside the 16-bit schedule range 1..{MAX_FRAME_INDEX}")
    slots = tuple(select_slot(tag, r, k, interleaver_seed) for r in range(1, horizon + 1))
    return SlotSchedule(tag, k, slots)


# --- vectorised path used by the cycle simulator ------------------------------


def _make_crc_table() -> np.ndarray:
    table = np.zeros(256, dtype=np.uint16)
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ CRC_POLY) & 0xFFFF if crc & 0x8000 else (crc << 1) & 0xFFFF
        table[byte] = crc
    return table


_CRC_TABLE = _make_crc_table()


def tag_bits_matrix(tags: Sequence[TagId]) -> np.ndarray:
    """(n, 128) uint8 matrix of tag id bits, MSB first per row."""
    buf = b"".join(t.to_bytes(16, "big") for t in tags)
    return np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(len(tags), 16), axis=1)


def select_slots_batch(bits128: np.ndarray, frame_index: int, k: int, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> np.ndarray:
    """Vectorised select_slot for many tags at one frame index.

    ``bits128`` is a (n, 128) uint8 matrix as produced by tag_bits_matrix.
    Bit-exact with the scalar path.
    """
    log2k = _check_k(k)
    perm = _frame_perm_array(frame_index, interleaver_seed)
    n = bits128.shape[0]
    msg = np.empty((n, MESSAGE_BITS), dtype=np.uint8)
    msg[:, :TAG_ID_BITS] = bits128
    msg[:, TAG_ID_BITS:] = np.unpackbits(np.frombuffer(frame_index.to_bytes(2, "big"), dtype=np.uint8))
    msg = msg[:, perm]
    packed = np.packbits(msg, axis=1)  # (n, 18), MSB-first grouping
    crc = np.full(n, CRC_INIT, dtype=np.uint16)
    for col in range(packed.shape[1]):
        idx = (crc >> 8) ^ packed[:, col]
        crc = (crc << 8) ^ _CRC_TABLE[idx]
    return (crc >> (16 - log2k)).astype(np.int64)


# --- golden vectors -----------------------------------------------------------

GOLDEN_TAG = 0x0123_4567_89AB_CDEF_0FED_CBA9_8765_4321  # fixed first record
DEFAULT_GOLDEN_SEED = 0x601D_601D_601D_601D
_GOLDEN_K_CYCLE = (2, 8, 128, 1024, 65536)


def golden_records(
    count: int = 128,
    seed: int = DEFAULT_GOLDEN_SEED,
    interleaver_seed: int = DEFAULT_INTERLEAVER_SEED,
) -> list[tuple[int, int, int, int]]:
    """Deterministic (tag, frame_index, k, slot) records for cross-checking."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    records = []
    for n in range(count):
        if n == 0:
            tag, r, k = GOLDEN_TAG, 1, 128
        elif n == 1:
            tag, r, k = int.from_bytes(rng.bytes(16), "big"), MAX_FRAME_INDEX, 128
        else:
            tag = int.from_bytes(rng.bytes(16), "big")
            r = int(rng.integers(1, 2001))
            k = _GOLDEN_K_CYCLE[n % len(_GOLDEN_K_CYCLE)]
        records.append((tag, r, k, select_slot(tag, r, k, interleaver_seed)))
    return records


def format_golden(records: Iterable[tuple[int, int, int, int]]) -> str:
    """One record per line: 32-digit hex id, frame index, k, slot."""
    return "".join(f"{tag_hex(tag)} {r} {k} {slot}\n" for tag, r, k, slot in records)


def write_golden(path, records: Iterable[tuple[int, int, int, int]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_golden(records))


def parse_golden(path) -> list[tuple[int, int, int, int]]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 'hex_id frame k slot', got {raw!r}")
            records.append((int(parts[0], 16), int(parts[1]), int(parts[2]), int(parts[3])))
    return records


def verify_golden(path, interleaver_seed: int = DEFAULT_INTERLEAVER_SEED) -> list[str]:
    """Recompute each stored vector; return one message per mismatch."""
    mismatches = []
    for lineno, (tag, r, k, slot) in enumerate(parse_golden(path), start=1):
        got = select_slot(tag, r, k, interleaver_seed)
        if got != slot:
            mismatches.append(f"line {lineno}: tag {tag_hex(tag)} r={r} k={k}: stored {slot}, computed {got}")
    return mismatches
