"""Inter-frame successive interference cancellation over the stored frame history.

When frame r_bar finishes, every tag decoded so far in the cycle can be
cancelled from the earlier frames in which it also transmitted, which may
free further tags there, and so on. exhaustive_isic propagates detections
through the frame history with alternating backward (r_bar-1 .. 1) and
forward (2 .. r_bar) sweeps until an entire iteration yields nothing new.

Messages are sets of decoded tag ids. B[r] denotes the backward message from
node r to node r-1 and F[r] the forward message from node r to node r+1. A
sweep at node r cancels the incoming tags from frame r and re-runs intra-slot
SIC on every slot that changed. The outgoing message unions the node's fresh
detections with the incoming stream plus a re-injection term that turns
around content which originated at this node in the opposite direction,
minus anything the node has already forwarded, so each detection reaches
each frame exactly once.

fixpoint_oracle is an intentionally naive global alternative (cancel all
decoded tags everywhere, re-decode every slot, repeat) used to cross-check
the message passing; it is only defined for beta = 0 where cancellation
order cannot matter.
"""

from collections import Counter

from .model import FrameRecord, TagId
from .receiver import cancel_component, sic_decode

_EMPTY: frozenset = frozenset()


class IsicConsistencyError(RuntimeError):
    """Internal bookkeeping violation inside the inter-frame cancellation engine."""


def isic_node(
    frame: FrameRecord,
    incoming: frozenset[TagId] | set[TagId],
    gamma: float,
    beta: float,
    cycle_decoded: set[TagId],
    delivery_counts: Counter | None = None,
) -> list[TagId]:
    """Apply one incoming message to one stored frame.

    Cancels every incoming tag's component at its recorded slot (skipping
    tags already removed from this frame), re-runs intra-slot SIC on the
    slots that changed, and returns first-time detections in deterministic
    order. cycle_decoded is updated in place with those detections.
    """
    if not incoming:
        return []
    changed: set[int] = set()
    for tag in sorted(incoming):
        if delivery_counts is not None:
            delivery_counts[(tag, frame.index)] += 1
        if tag in frame.removed:
            continue
        slot_index = frame.slot_of.get(tag)
        if slot_index is None or tag not in frame.slots[slot_index].components:
            raise IsicConsistencyError(
                f"tag {tag:#x} announced to frame {frame.index} but no component found"
            )
        frame.slots[slot_index] = cancel_component(frame.slots[slot_index], tag, beta)
        frame.removed.add(tag)
        changed.add(slot_index)
    newly: list[TagId] = []
    for slot_index in sorted(changed):
        outcome = sic_decode(frame.slots[slot_index], gamma, beta)
        if not outcome.decoded:
            continue
        frame.slots[slot_index] = outcome.updated_slot
        for tag in outcome.decoded:
            frame.removed.add(tag)
            if tag not in cycle_decoded:
                cycle_decoded.add(tag)
                frame.decoded_here.add(tag)
                newly.append(tag)
    return newly


def exhaustive_isic(
    frames: list[FrameRecord],
    initial: list[TagId],
    gamma: float,
    beta: float,
    cycle_decoded: set[TagId],
    max_iterations: int,
    trace: list | None = None,
    delivery_counts: Counter | None = None,
) -> list[tuple[TagId, int]]:
    """Run the full inter-frame cancellation pass after the newest frame.

    ``frames`` is the cycle history 1..r_bar (the newest frame last) whose
    intra-frame decoding already happened; ``initial`` lists the tags it
    detected, which must already be members of ``cycle_decoded``. Frame
    states are mutated in place. Returns every detection as (tag, frame
    transmitted) pairs, the initial ones first, in detection order.

    ``max_iterations`` bounds the sweep count; each iteration that keeps the
    loop alive must detect at least one of the at most I tags, so exceeding
    the population size indicates a bookkeeping bug. ``trace`` (if given)
    collects (iteration, direction, frame, tag) tuples for new detections.
    ``delivery_counts`` (if given) counts message deliveries per
    (tag, frame); correct set-difference bookkeeping never exceeds 1.
    """
    r_bar = len(frames)
    detected: list[tuple[TagId, int]] = [(tag, r_bar) for tag in initial]
    if not initial or r_bar == 1:
        return detected

    def visit(node_r: int, incoming, iteration: int, direction: str) -> frozenset[TagId]:
        found = isic_node(frames[node_r - 1], incoming, gamma, beta, cycle_decoded, delivery_counts)
        if found:
            detected.extend((tag, node_r) for tag in found)
            if trace is not None:
                trace.extend((iteration, direction, node_r, tag) for tag in found)
        return frozenset(found)

    cur_b: dict[int, frozenset] = {r_bar: frozenset(initial)}
    cur_f: dict[int, frozenset] = {}
    prev_b: dict[int, frozenset] = {}
    prev_f: dict[int, frozenset] = {}
    d_count = len(initial)
    iteration = 1
    while d_count > 0:
        if iteration > max_iterations:
            raise IsicConsistencyError(
                f"no convergence after {max_iterations} iterations; message bookkeeping is wrong"
            )
        d_next = 0
        for r in range(r_bar - 1, 1, -1):
            d_r = visit(r, cur_b[r + 1], iteration, "backward")
            turnaround = prev_f.get(r, _EMPTY) - (prev_f.get(r - 1, _EMPTY) | prev_b.get(r, _EMPTY))
            cur_b[r] = d_r | cur_b[r + 1] | turnaround
            d_next += len(d_r)
        d_one = visit(1, cur_b[2], iteration, "backward")
        d_next += len(d_one)
        cur_f[1] = d_one
        for r in range(2, r_bar):
            d_r = visit(r, cur_f[r - 1], iteration, "forward")
            turnaround = cur_b.get(r, _EMPTY) - (cur_b.get(r + 1, _EMPTY) | prev_f.get(r, _EMPTY))
            cur_f[r] = d_r | cur_f[r - 1] | turnaround
            d_next += len(d_r)
        d_top = visit(r_bar, cur_f[r_bar - 1], iteration, "forward")
        d_next += len(d_top)
        prev_b, prev_f = cur_b, cur_f
        cur_b = {r_bar: d_top}
        cur_f = {}
        d_count = d_next
        iteration += 1
    return detected


def fixpoint_oracle(frames: list[FrameRecord], gamma: float, beta: float = 0.0) -> set[TagId]:
    """Global fixed point of decode-everywhere / cancel-everywhere (beta = 0 only).

    Operates on copies of the given frames, so pristine frame snapshots can
    be checked against a finished cycle without interference.
    """
    if beta != 0.0:
        raise ValueError("the fixed-point oracle is only defined for beta = 0")
    slots = [[s.copy() for s in f.slots] for f in frames]
    slot_of = [dict(f.slot_of) for f in frames]
    cancelled: list[set[TagId]] = [set() for _ in frames]
    decoded: set[TagId] = set()
    while True:
        progressed = False
        for frame_slots in slots:
            for si, slot in enumerate(frame_slots):
                outcome = sic_decode(slot, gamma, 0.0)
                if outcome.decoded:
                    frame_slots[si] = outcome.updated_slot
                    decoded.update(outcome.decoded)
                    progressed = True
        for fi in range(len(slots)):
            for tag in sorted(decoded - cancelled[fi]):
                cancelled[fi].add(tag)
                si = slot_of[fi].get(tag)
                if si is not None and tag in slots[fi][si].components:
                    slots[fi][si] = cancel_component(slots[fi][si], tag, 0.0)
                    progressed = True
        if not progressed:
            return decoded
