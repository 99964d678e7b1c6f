"""End-to-end command line behaviour and exit codes."""

import pytest

from fsaloha import read_csv
from fsaloha.cli import main


def write_spec(path, extra="", k=32, i_values="16", reps=2, seed=404):
    path.write_text(
        f"k = {k}\n"
        f"i_values = {i_values}\n"
        f"replications = {reps}\n"
        f"base_seed = {seed}\n"
        + extra
    )
    return str(path)


def test_golden_emit_then_verify(tmp_path, capsys):
    path = tmp_path / "golden.txt"
    assert main(["golden", "emit", str(path), "--count", "32"]) == 0
    out = capsys.readouterr().out
    assert "wrote 32 golden vectors" in out
    assert main(["golden", "verify", str(path)]) == 0
    assert "all vectors verified" in capsys.readouterr().out


def test_golden_verify_flags_corruption(tmp_path, capsys):
    path = tmp_path / "golden.txt"
    main(["golden", "emit", str(path), "--count", "8"])
    capsys.readouterr()
    lines = path.read_text().splitlines()
    tag, r, k, slot = lines[3].split()
    lines[3] = f"{tag} {r} {k} {(int(slot) + 1) % int(k)}"
    path.write_text("\n".join(lines) + "\n")
    assert main(["golden", "verify", str(path)]) == 1
    err = capsys.readouterr().err
    assert "mismatch: line 4" in err


def test_golden_bad_paths_and_seeds(tmp_path, capsys):
    assert main(["golden", "verify", str(tmp_path / "absent.txt")]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["golden", "emit", str(tmp_path / "g.txt"), "--interleaver-seed", str(2**64)]) == 1
    assert "64-bit" in capsys.readouterr().err
    bad = tmp_path / "malformed.txt"
    bad.write_text("deadbeef 1 128\n")
    assert main(["golden", "verify", str(bad)]) == 1


def test_run_writes_csv_and_summary(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg", extra=f"out_dir = {tmp_path}/out\n")
    assert main(["run", spec]) == 0
    out = capsys.readouterr().out
    assert "wrote" in out and "results.csv" in out
    for mode in ("capture", "sic", "isic"):
        assert mode in out
    assert "P=" in out and "complete" in out
    records = read_csv(tmp_path / "out" / "results.csv")
    assert len(records) == 6  # 1 population size x 2 replications x 3 modes
    assert {r.mode for r in records} == {"capture", "sic", "isic"}


def test_run_is_deterministic_across_invocations(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg")
    assert main(["run", spec, "--out-dir", str(tmp_path / "a")]) == 0
    assert main(["run", spec, "--out-dir", str(tmp_path / "b"), "--threads", "2"]) == 0
    capsys.readouterr()
    a = (tmp_path / "a" / "results.csv").read_bytes()
    b = (tmp_path / "b" / "results.csv").read_bytes()
    assert a == b


def test_run_channel_both_covers_two_fading_models(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg", reps=1)
    assert main(["run", spec, "--out-dir", str(tmp_path / "o"), "--channel", "both"]) == 0
    capsys.readouterr()
    records = read_csv(tmp_path / "o" / "results.csv")
    assert {r.channel for r in records} == {"rayleigh", "rician"}


def test_run_modes_override(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg", reps=1)
    assert main(["run", spec, "--out-dir", str(tmp_path / "o"), "--modes", "capture"]) == 0
    capsys.readouterr()
    records = read_csv(tmp_path / "o" / "results.csv")
    assert {r.mode for r in records} == {"capture"}


def test_run_rejects_broken_specs(tmp_path, capsys):
    missing = tmp_path / "absent.cfg"
    assert main(["run", str(missing)]) == 1
    assert "error:" in capsys.readouterr().err

    bad_k = write_spec(tmp_path / "badk.cfg", k=12)
    assert main(["run", bad_k]) == 1
    assert "k" in capsys.readouterr().err

    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("i_values = 8\nframe_sze = 4\n")
    assert main(["run", str(unknown)]) == 1
    assert "frame_sze" in capsys.readouterr().err

    bad_mode = write_spec(tmp_path / "badmode.cfg")
    assert main(["run", bad_mode, "--out-dir", str(tmp_path / "o"), "--modes", "dfsa"]) == 1
    assert "dfsa" in capsys.readouterr().err


def test_run_flags_incomplete_cycles_with_exit_2(tmp_path, capsys):
    spec = write_spec(
        tmp_path / "exp.cfg",
        extra="max_frames = 1\n",
        k=32,
        i_values="60",
        reps=1,
    )
    assert main(["run", spec, "--out-dir", str(tmp_path / "o")]) == 2
    captured = capsys.readouterr()
    assert "exceed the budget" in captured.err
    assert (tmp_path / "o" / "results.csv").exists()
    records = read_csv(tmp_path / "o" / "results.csv")
    assert records and not any(r.complete for r in records)


def test_run_respects_incomplete_budget(tmp_path, capsys):
    spec = write_spec(
        tmp_path / "exp.cfg",
        extra="max_frames = 1\nincomplete_budget = 3\n",
        k=32,
        i_values="60",
        reps=1,
    )
    assert main(["run", spec, "--out-dir", str(tmp_path / "o")]) == 0
    capsys.readouterr()


def test_isic_trace_matches_untraced_run(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg", k=8, i_values="32", reps=1, seed=77)
    assert main(["run", spec, "--out-dir", str(tmp_path / "plain")]) == 0
    assert main(["run", spec, "--out-dir", str(tmp_path / "traced"), "--isic-trace"]) == 0
    captured = capsys.readouterr()
    plain = (tmp_path / "plain" / "results.csv").read_bytes()
    traced = (tmp_path / "traced" / "results.csv").read_bytes()
    assert plain == traced
    assert "trace: I=32 rep=0 mode=isic tau=" in captured.err


def test_plot_renders_three_figures(tmp_path, capsys):
    spec = write_spec(tmp_path / "exp.cfg", i_values="16, 32", reps=2)
    assert main(["run", spec, "--out-dir", str(tmp_path / "o")]) == 0
    csv_path = tmp_path / "o" / "results.csv"
    prefix = str(tmp_path / "figs" / "run_")
    assert main(["plot", str(csv_path), "--out-prefix", prefix]) == 0
    out = capsys.readouterr().out
    for name in ("throughput", "reading_time", "residuals"):
        target = tmp_path / "figs" / f"run_{name}.svg"
        assert target.exists() and target.stat().st_size > 0
        assert str(target) in out


def test_plot_rejects_bad_inputs(tmp_path, capsys):
    assert main(["plot", str(tmp_path / "absent.csv")]) == 1
    assert "error:" in capsys.readouterr().err
    empty = tmp_path / "empty.csv"
    empty.write_text("mode,channel,K,I,seed,M,complete,residuals\n")
    assert main(["plot", str(empty)]) == 1
    assert "no records" in capsys.readouterr().err


def test_unknown_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["inventory"])
    assert exc.value.code == 2
    assert "invalid choice" in capsys.readouterr().err
