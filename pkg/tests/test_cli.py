"""End-to-end CLI checks: golden output, artifacts, exit codes."""

import json

import pytest

from approxmul.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, main

GOLDEN_HEADER = "kind,wl,vbl,hbl,k,n,mean,mse,error_prob,min_error,max_error"
GOLDEN_ROW_WL8_VBL6 = "broken-booth-t0,8,6,0,0,65536,-61.5,5046.25,0.9375,-171,0"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "approxmul" in capsys.readouterr().out


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_dotcount_golden(capsys):
    code, out, _ = run(capsys, "dotcount", "--wl", "12", "--vbl", "11")
    assert code == EXIT_OK
    assert out == "36/77\n"


def test_quap_golden(capsys):
    code, out, _ = run(capsys, "quap", "--snr", "25.0", "--area", "12.3", "--power", "17.1")
    assert code == EXIT_OK
    assert out.splitlines() == ["quap 131456", "quap/1e4 13.1456"]
    code, out, _ = run(capsys, "quap", "--snr", "23.1", "--area", "7.38", "--power", "19.8")
    assert code == EXIT_OK
    assert out.splitlines() == ["quap 77973.2", "quap/1e4 7.79732"]


def test_characterize_artifacts_and_golden_row(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "characterize",
        "--kind", "broken-booth-t0",
        "--wl", "8",
        "--vbl", "6",
        "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    assert GOLDEN_HEADER in out
    assert GOLDEN_ROW_WL8_VBL6 in out

    base = tmp_path / "characterize_broken-booth-t0_wl8_vbl6_hbl0_k0"
    csv_text = base.with_suffix(".csv").read_text()
    assert csv_text == GOLDEN_HEADER + "\n" + GOLDEN_ROW_WL8_VBL6 + "\n"

    record = json.loads(base.with_suffix(".json").read_text())
    assert record["kind"] == "broken-booth-t0"
    assert record["mse"] == pytest.approx(5046.25)

    manifest = json.loads((tmp_path / (base.name + ".manifest.json")).read_text())
    assert manifest["command"] == "characterize"
    assert manifest["parameters"]["wl"] == 8
    assert manifest["seed"] is None
    assert "tool_version" in manifest and "timestamp" in manifest


def test_characterize_threads_do_not_change_bytes(capsys, tmp_path):
    dirs = [tmp_path / "a", tmp_path / "b"]
    for directory, threads in zip(dirs, ("1", "4")):
        code, _, _ = run(
            capsys,
            "characterize",
            "--kind", "broken-booth-t1",
            "--wl", "8",
            "--vbl", "5",
            "--threads", threads,
            "--out", str(directory),
        )
        assert code == EXIT_OK
    name = "characterize_broken-booth-t1_wl8_vbl5_hbl0_k0"
    for ext in (".csv", ".json"):
        a = (dirs[0] / name).with_suffix(ext).read_bytes()
        b = (dirs[1] / name).with_suffix(ext).read_bytes()
        assert a == b


def test_characterize_sampled_names_seed(capsys, tmp_path):
    code, _, _ = run(
        capsys,
        "characterize",
        "--kind", "bam",
        "--wl", "8",
        "--vbl", "4",
        "--mode", "sampled",
        "--samples", "5000",
        "--seed", "42",
        "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    base = tmp_path / "characterize_bam_wl8_vbl4_hbl0_k0_sampled_seed42_n5000"
    assert base.with_suffix(".csv").exists()
    manifest = json.loads((tmp_path / (base.name + ".manifest.json")).read_text())
    assert manifest["seed"] == 42


def test_sweep_sorted_and_monotone(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "sweep",
        "--kind", "broken-booth-t0",
        "--wl", "8",
        "--values", "6,0,2,4",
        "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == GOLDEN_HEADER
    rows = [line.split(",") for line in lines[1:5]]
    vbls = [int(r[2]) for r in rows]
    mses = [float(r[7]) for r in rows]
    assert vbls == [0, 2, 4, 6]
    assert mses == sorted(mses)
    assert mses[0] == 0.0
    assert (tmp_path / "sweep_broken-booth-t0_wl8_vbl.csv").exists()


def test_sweep_empty_values(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "sweep",
        "--kind", "block",
        "--wl", "4",
        "--values", "",
        "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    assert out.splitlines()[0] == GOLDEN_HEADER
    assert (tmp_path / "sweep_block_wl4_k.csv").read_text() == GOLDEN_HEADER + "\n"


def test_bad_spec_combination_exits_2(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "characterize",
        "--kind", "broken-booth-t0",
        "--wl", "8",
        "--hbl", "2",
        "--out", str(tmp_path),
    )
    assert code == EXIT_USAGE
    assert "error:" in err


def test_bad_values_list_exits_2(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "sweep",
        "--kind", "bam",
        "--wl", "4",
        "--values", "1,x",
        "--out", str(tmp_path),
    )
    assert code == EXIT_USAGE
    assert "error:" in err


def test_budget_exceeded_exits_3(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "characterize",
        "--kind", "broken-booth-t0",
        "--wl", "8",
        "--vbl", "4",
        "--budget", "1000",
        "--out", str(tmp_path),
    )
    assert code == EXIT_BUDGET
    assert "error:" in err


def test_out_dir_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("APPROXMUL_OUT_DIR", str(tmp_path / "env"))
    code, _, _ = run(capsys, "dotcount", "--wl", "8", "--vbl", "0")
    assert code == EXIT_OK  # dotcount writes nothing; env must not break it
    code, _, _ = run(
        capsys, "characterize", "--kind", "accurate-booth", "--wl", "4"
    )
    assert code == EXIT_OK
    assert (tmp_path / "env" / "characterize_accurate-booth_wl4_vbl0_hbl0_k0.csv").exists()


def test_out_flag_overrides_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("APPROXMUL_OUT_DIR", str(tmp_path / "env"))
    code, _, _ = run(
        capsys,
        "characterize",
        "--kind", "accurate-booth",
        "--wl", "4",
        "--out", str(tmp_path / "flag"),
    )
    assert code == EXIT_OK
    assert (tmp_path / "flag" / "characterize_accurate-booth_wl4_vbl0_hbl0_k0.csv").exists()
    assert not (tmp_path / "env").exists()


@pytest.fixture(scope="module")
def small_fir_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "testbed.json"
    from approxmul.fir import TestbedConfig

    path.write_text(TestbedConfig(n_samples=8192).to_json())
    return path


def test_fir_double_artifacts(capsys, tmp_path, small_fir_config):
    code, out, _ = run(
        capsys,
        "fir",
        "--double",
        "--config", str(small_fir_config),
        "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    assert out.splitlines()[0] == "wl,vbl,kind,snr_in_db,snr_out_db"
    base = tmp_path / "fir_double_wl0_vbl0"
    record = json.loads(base.with_suffix(".json").read_text())
    assert record["kind"] == "double"
    assert record["config"]["n_samples"] == 8192
    assert 20.0 < record["snr_out_db"] < 28.0


def test_fir_bytes_deterministic(capsys, tmp_path, small_fir_config):
    dirs = [tmp_path / "r1", tmp_path / "r2"]
    for directory in dirs:
        code, _, _ = run(
            capsys,
            "fir",
            "--kind", "broken-booth-t0",
            "--wl", "8",
            "--vbl", "3",
            "--config", str(small_fir_config),
            "--out", str(directory),
        )
        assert code == EXIT_OK
    name = "fir_broken-booth-t0_wl8_vbl3"
    for ext in (".csv", ".json"):
        assert (dirs[0] / name).with_suffix(ext).read_bytes() == (
            dirs[1] / name
        ).with_suffix(ext).read_bytes()


def test_fir_missing_config_exits_2(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "fir",
        "--config", str(tmp_path / "nope.json"),
        "--out", str(tmp_path),
    )
    assert code == EXIT_USAGE
    assert "error:" in err


def test_fir_bad_config_field_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_samples": 8192, "mystery": 1}')
    code, _, err = run(capsys, "fir", "--config", str(bad), "--out", str(tmp_path))
    assert code == EXIT_USAGE
    assert "error:" in err
