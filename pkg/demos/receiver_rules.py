"""Show the three receiver rules on a handful of crafted slots.

All decisions happen in the power domain: a component decodes when its
power over (everything else + residual + noise) clears gamma. The capture
receiver tries only the strongest signal per slot. Intra-slot SIC repeats
the rule after subtracting each success, leaving beta times the cancelled
power behind, and stops the moment the strongest survivor fails.
"""

from fsaloha import SlotState, capture_only_decode, cancel_component, sic_decode, sinr_of

GAMMA = 2.0


def show(label: str, components: dict[int, float], beta: float = 0.0) -> None:
    slot = SlotState(components=dict(components))
    print(f"{label}: {components}")
    for tag in sorted(components, key=lambda t: (-components[t], t)):
        print(f"  sinr of tag {tag}: {sinr_of(slot, tag):.3f}")
    cap = capture_only_decode(slot, GAMMA)
    sic = sic_decode(slot, GAMMA, beta)
    print(f"  capture decodes {cap.decoded}, sic (beta={beta:g}) decodes {sic.decoded}")
    if sic.updated_slot.residual_power:
        print(f"  residual power left behind: {sic.updated_slot.residual_power:g}")
    print()


def main() -> None:
    print(f"noise power 1.0, gamma {GAMMA:g}\n")

    show("singleton, strong", {1: 100.0})
    show("balanced pair never resolves", {1: 100.0, 2: 100.0})
    show("lopsided pair, capture stops after one", {1: 100.0, 2: 10.0})
    show("three tags peel in order", {1: 400.0, 2: 60.0, 3: 8.0})
    # tag 3 alone would clear gamma (3 / 1 = 3), but SIC stops at the first
    # failure instead of skipping past tag 2, so only tag 1 gets out
    show("stall in the middle", {1: 400.0, 2: 4.0, 3: 3.0})
    show("imperfect cancellation hurts the second tag", {1: 100.0, 2: 10.0}, beta=0.5)

    # cancellation by id is what the inter-frame engine uses on past frames
    slot = SlotState(components={7: 80.0, 9: 30.0})
    after = cancel_component(slot, 7, beta=0.25)
    print("cancel tag 7 at beta=0.25 from", slot.components, "->", after.components,
          f"residual {after.residual_power:g}")
    print("original slot object untouched:", slot.components, slot.residual_power)


if __name__ == "__main__":
    main()
