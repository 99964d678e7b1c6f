"""Inter-frame cancellation engine against its naive fixed-point oracle."""

from collections import Counter

import numpy as np
import pytest

from fsaloha import (
    ChannelSpec,
    CycleSimulator,
    FrameRecord,
    IsicConsistencyError,
    ProtocolConfig,
    SlotState,
    exhaustive_isic,
    fixpoint_oracle,
    generate_population,
    isic_node,
)

A, B, C = 0xA, 0xB, 0xC


def frame_with(index: int, slots: dict[int, dict[int, float]], k: int = 4) -> FrameRecord:
    fr = FrameRecord(index=index, slots=[SlotState() for _ in range(k)])
    for si, comps in slots.items():
        for tag, power in comps.items():
            fr.slots[si].components[tag] = power
            fr.slot_of[tag] = si
    return fr


def test_isic_node_unlocks_the_partner():
    fr = frame_with(1, {0: {A: 50.0, B: 50.0}})
    decoded = {A}
    found = isic_node(fr, {A}, gamma=2.0, beta=0.0, cycle_decoded=decoded)
    assert found == [B]
    assert decoded == {A, B}
    assert A in fr.removed and B in fr.removed
    assert fr.slots[0].components == {}


def test_isic_node_skips_already_removed():
    fr = frame_with(1, {0: {A: 50.0, B: 50.0}})
    fr.removed.add(A)
    del fr.slots[0].components[A]
    assert isic_node(fr, {A}, 2.0, 0.0, {A}) == []


def test_isic_node_reports_missing_component():
    fr = frame_with(1, {0: {A: 50.0}})
    with pytest.raises(IsicConsistencyError):
        isic_node(fr, {B}, 2.0, 0.0, {B})


def test_isic_node_empty_message_is_noop():
    fr = frame_with(1, {0: {A: 50.0, B: 50.0}})
    assert isic_node(fr, frozenset(), 2.0, 0.0, set()) == []


def test_two_frame_backward_then_forward():
    # frame 1: A and B jam each other; frame 2: A decoded alone while B is
    # collided again (4 / 2.5 < 2, 1.5 / 5 < 2). The backward pass must free
    # B in frame 1 and the forward pass must clear B from frame 2 without
    # pushing C over the threshold (1.5 / 1 < 2).
    f1 = frame_with(1, {0: {A: 50.0, B: 50.0}})
    f2 = frame_with(2, {1: {A: 60.0}, 2: {B: 4.0, C: 1.5}})
    f2.decoded_here.add(A)
    f2.removed.add(A)
    del f2.slots[1].components[A]

    decoded = {A}
    counts: Counter = Counter()
    trace: list = []
    detections = exhaustive_isic([f1, f2], [A], 2.0, 0.0, decoded, 10, trace=trace, delivery_counts=counts)
    assert detections == [(A, 2), (B, 1)]
    assert decoded == {A, B}
    assert B in f2.removed
    assert C not in decoded  # 1.5 / 1.0 stays under gamma after B leaves
    assert max(counts.values()) == 1
    assert trace == [(1, "backward", 1, B)]


def test_initial_detections_come_first_and_short_histories_return_early():
    f1 = frame_with(1, {0: {A: 50.0}})
    out = exhaustive_isic([f1], [A], 2.0, 0.0, {A}, 5)
    assert out == [(A, 1)]
    out = exhaustive_isic([f1], [], 2.0, 0.0, set(), 5)
    assert out == []


def test_fixpoint_oracle_requires_beta_zero():
    with pytest.raises(ValueError):
        fixpoint_oracle([frame_with(1, {0: {A: 50.0}})], 2.0, beta=0.1)


def test_fixpoint_oracle_leaves_frames_untouched():
    f1 = frame_with(1, {0: {A: 50.0, B: 50.0}})
    f2 = frame_with(2, {1: {A: 60.0}, 2: {B: 50.0}})
    decoded = fixpoint_oracle([f1, f2], 2.0)
    assert decoded == {A, B}
    assert f1.slots[0].components == {A: 50.0, B: 50.0}
    assert f2.slots[1].components == {A: 60.0}


def test_engine_matches_oracle_on_random_instances():
    rng = np.random.default_rng(99)
    for _ in range(150):
        i = int(rng.integers(3, 17))
        k = int(rng.choice([2, 4, 8]))
        kind = "rayleigh" if rng.integers(2) else "rician"
        cfg = ProtocolConfig(
            k=k,
            gamma=float(rng.choice([1.5, 2.0, 3.0])),
            beta=0.0,
            channel=ChannelSpec(kind),
            max_frames=int(rng.integers(2, 7)),
        )
        pop = generate_population(i, int(rng.integers(0, 2**31)))
        counts: Counter = Counter()
        sim = CycleSimulator(
            cfg, pop, int(rng.integers(0, 2**31)), mode="isic", keep_pristine=True, delivery_counts=counts
        )
        result = sim.run()
        decoded = {e.tag for e in result.decode_log}
        assert decoded == fixpoint_oracle(sim.pristine, cfg.gamma)
        if counts:
            assert max(counts.values()) == 1


def test_engine_respects_nonzero_beta_residuals():
    # beta > 0: cancelling A leaves residual power behind, so B must clear
    # gamma against it; with beta = 0.5 the 50-power residual blocks B.
    f1 = frame_with(1, {0: {A: 50.0, B: 50.0}})
    decoded = {A}
    found = isic_node(f1, {A}, gamma=2.0, beta=0.5, cycle_decoded=decoded)
    assert found == []
    assert f1.slots[0].residual_power == pytest.approx(25.0)
    assert f1.slots[0].components == {B: 50.0}


def test_max_iteration_guard_raises():
    f1 = frame_with(1, {0: {A: 50.0, B: 50.0}})
    f2 = frame_with(2, {1: {A: 60.0}})
    f2.decoded_here.add(A)
    f2.removed.add(A)
    del f2.slots[1].components[A]
    with pytest.raises(IsicConsistencyError):
        exhaustive_isic([f1, f2], [A], 2.0, 0.0, {A}, max_iterations=0)
