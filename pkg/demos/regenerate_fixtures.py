"""Regenerate the frozen test fixtures under tests/fixtures/.

Run this only when protocol behaviour changes on purpose (hash conventions,
receiver rules, seeding); the point of the fixtures is to make any other
change fail loudly. Output is byte-stable, so running it twice in a row must
produce no diff.
"""

from pathlib import Path

from fsaloha import ChannelSpec, ProtocolConfig, golden_records, run_experiment, write_golden
from fsaloha.model import DEFAULT_INTERLEAVER_SEED
from fsaloha.slothash import build_interleaver

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
BASE_SEED = 20260825


def write_slot_golden() -> None:
    path = FIXTURES / "slot_golden.txt"
    write_golden(path, golden_records())
    print(f"wrote {path}")


def write_interleaver_permutation() -> None:
    path = FIXTURES / "interleaver_default.txt"
    perm = build_interleaver().permutation
    seed_text = "0x5EED_CAFE_F00D_0001"
    assert int(seed_text, 0) == DEFAULT_INTERLEAVER_SEED
    lines = [
        f"# Fisher-Yates permutation of 144 positions at seed {seed_text}",
        "# (direct LCG shuffle output; per-frame seed mixing is not applied here)",
        " ".join(str(p) for p in perm),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def write_regression_sums() -> None:
    path = FIXTURES / "regression_m.txt"
    lines = [
        "# sum of reading-cycle lengths M over 20 replications, I=500 K=128 defaults,",
        f"# base seed {BASE_SEED}, cycle seeds derive_cycle_seed(base, I, rep).",
        "# Regenerate with demos/regenerate_fixtures.py when protocol behaviour changes.",
    ]
    for kind in ("rayleigh", "rician"):
        cfg = ProtocolConfig(k=128, channel=ChannelSpec(kind))
        records = run_experiment(cfg, [500], 20, BASE_SEED)
        for mode in ("capture", "sic", "isic"):
            total = sum(r.m for r in records if r.mode == mode)
            lines.append(f"{mode} {kind} {total}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    write_slot_golden()
    write_interleaver_permutation()
    write_regression_sums()
