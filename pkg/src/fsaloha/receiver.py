"""Slot-level decoding: capture rule, intra-slot SIC, component cancellation.

All operations treat the incoming SlotState as read-only and return fresh
state when anything changes (the untouched input object may be returned
as-is when nothing does). Interference sums are always accumulated in the
canonical component order, strongest first with ties broken by ascending tag
id, so independent code paths agree bit for bit.
"""

from dataclasses import dataclass

from .model import SlotState, TagId


@dataclass
class DecodeOutcome:
    """Tags decoded from one slot (strongest first) plus the slot afterwards."""

    decoded: list[TagId]
    updated_slot: SlotState


def _ranked(slot: SlotState) -> list[tuple[TagId, float]]:
    """Components ordered strongest first, ties broken by ascending tag id."""
    return sorted(slot.components.items(), key=lambda kv: (-kv[1], kv[0]))


def _interference(ranked: list[tuple[TagId, float]], skip: int, residual: float, noise: float) -> float:
    """Sum of all powers except ranked[skip], accumulated in canonical order."""
    total = residual + noise
    for pos, (_, power) in enumerate(ranked):
        if pos != skip:
            total += power
    return total


def sinr_of(slot: SlotState, candidate: TagId) -> float:
    """SINR of one component against everything else in the slot."""
    power = slot.components[candidate]
    ranked = _ranked(slot)
    skip = next(pos for pos, (tag, _) in enumerate(ranked) if tag == candidate)
    return power / _interference(ranked, skip, slot.residual_power, slot.noise_power)


def capture_only_decode(slot: SlotState, gamma: float) -> DecodeOutcome:
    """Decode the single strongest component iff its SINR clears gamma.

    No cancellation takes place and no second component is attempted.
    """
    if not slot.components:
        return DecodeOutcome([], slot)
    ranked = _ranked(slot)
    tag, power = ranked[0]
    interference = _interference(ranked, 0, slot.residual_power, slot.noise_power)
    if power / interference < gamma:
        return DecodeOutcome([], slot)
    updated = slot.copy()
    del updated.components[tag]
    return DecodeOutcome([tag], updated)


def sic_decode(slot: SlotState, gamma: float, beta: float) -> DecodeOutcome:
    """Iterate the capture rule with cancellation until the strongest fails.

    Each cancelled component leaves beta times its power behind as residual
    interference. The first decode is exactly capture_only_decode's decision.
    """
    if not slot.components:
        return DecodeOutcome([], slot)
    ranked = _ranked(slot)
    residual = slot.residual_power
    noise = slot.noise_power
    decoded: list[TagId] = []
    for pos, (tag, power) in enumerate(ranked):
        interference = _interference(ranked[pos:], 0, residual, noise)
        if power / interference < gamma:
            break
        decoded.append(tag)
        residual += beta * power
    if not decoded:
        return DecodeOutcome([], slot)
    updated = slot.copy()
    for tag in decoded:
        del updated.components[tag]
    updated.residual_power = residual
    return DecodeOutcome(decoded, updated)


def cancel_component(slot: SlotState, tag: TagId, beta: float) -> SlotState:
    """Remove a known tag's component, leaving beta times its power as residual.

    Idempotent: a tag absent from the slot leaves it unchanged.
    """
    if tag not in slot.components:
        return slot
    updated = slot.copy()
    power = updated.components.pop(tag)
    updated.residual_power += beta * power
    return updated
