import json
import math

import numpy as np
import pytest

from qtomo import ParseError, ValidationError, parse_config, run, serialize
from qtomo.cli import main

OSC_VERIFY = """
# comment line
system.kind = oscillator
system.m = 1.0
system.omega = const:1.0
task.kind = verify
task.times = 0.0, 0.5, 1.0
task.dt = 1e-3
"""

OSC_PROPAGATE = """
system.kind = oscillator
system.omega = const:1.0
system.f = const:0.3
task.kind = propagate
task.t_end = 1.0
task.dt = 1e-3
task.stride = 100
"""


def test_parse_and_roundtrip():
    cfg = parse_config(OSC_VERIFY)
    assert cfg.get_str("system.kind") == "oscillator"
    assert cfg.get_float("system.m") == 1.0
    assert cfg.get_floats("task.times") == [0.0, 0.5, 1.0]
    again = parse_config(serialize(cfg))
    assert again == cfg


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 1"):
        parse_config("not a key value line")
    with pytest.raises(ParseError, match="line 3"):
        parse_config("a.b = 1\n\na.b = 2")
    with pytest.raises(ParseError, match="line 2"):
        parse_config("a.b = 1\nnodots = 3")
    with pytest.raises(ParseError, match="line 1"):
        parse_config("a.b =")


def test_typed_getters():
    cfg = parse_config(
        "x.f = 2.5\nx.i = 7\nx.b = yes\nx.c = 0.5+0.3j\nx.list = 1, 2, 3\n"
    )
    assert cfg.get_float("x.f") == 2.5
    assert cfg.get_int("x.i") == 7
    assert cfg.get_bool("x.b") is True
    assert cfg.get_complex("x.c") == 0.5 + 0.3j
    assert cfg.get_floats("x.list") == [1.0, 2.0, 3.0]
    assert cfg.get_float("x.absent", 9.0) == 9.0
    with pytest.raises(ValidationError):
        cfg.get_float("x.b")
    with pytest.raises(ValidationError):
        cfg.get_int("x.f")
    with pytest.raises(ValidationError):
        cfg.get_str("x.missing")


def test_frame_list_parsing():
    cfg = parse_config("task.frames = 1,0; 0.6,0.8 ; 0,1\n")
    assert cfg.get_frames("task.frames") == [(1.0, 0.0), (0.6, 0.8), (0.0, 1.0)]
    bad = parse_config("task.frames = 0,0\n")
    with pytest.raises(ValidationError):
        bad.get_frames("task.frames")
    malformed = parse_config("task.frames = 1,2,3\n")
    with pytest.raises(ValidationError):
        malformed.get_frames("task.frames")


def test_funcspec_variants(tmp_path):
    cfg = parse_config(
        "f.const = const:2.0\nf.bare = 1.5\nf.poly = poly:1,0.5,2\nf.bad = wiggle:1\n"
    )
    assert cfg.get_func("f.const")(3.0) == 2.0
    assert cfg.get_func("f.bare")(0.0) == 1.5
    poly = cfg.get_func("f.poly")
    assert poly(2.0) == pytest.approx(1.0 + 0.5 * 2.0 + 2.0 * 4.0)
    with pytest.raises(ValidationError):
        cfg.get_func("f.bad")
    assert cfg.get_func("f.absent", None) is None


def test_table_funcspec(tmp_path):
    tab = tmp_path / "ramp.csv"
    tab.write_text("0.0,1.0\n1.0,2.0\n2.0,0.5\n")
    cfg = parse_config(f"f.t = table:{tab.name}\n", base_dir=str(tmp_path))
    f = cfg.get_func("f.t")
    assert f(0.0) == 1.0
    assert f(0.5) == pytest.approx(1.5)
    assert f(2.0) == 0.5
    # clamped beyond the tabulated range
    assert f(-1.0) == 1.0
    assert f(9.0) == 0.5
    missing = parse_config("f.t = table:nope.csv\n", base_dir=str(tmp_path))
    with pytest.raises(ValidationError):
        missing.get_func("f.t")
    bad = tmp_path / "bad.csv"
    bad.write_text("0.0,1.0\n0.0,2.0\n")
    decreasing = parse_config(f"f.t = table:{bad.name}\n", base_dir=str(tmp_path))
    with pytest.raises(ValidationError):
        decreasing.get_func("f.t")


def test_run_verify_clean_system():
    result = run(parse_config(OSC_VERIFY))
    assert result.status == 0
    assert result.table.metadata["gate_passed"] == "true"
    assert result.table.columns[0] == "time"
    assert len(result.table.rows) == 3
    assert all(row[-1] == 1.0 for row in result.table.rows)


def test_run_verify_corrupted_frame_fails_gate():
    cfg = parse_config(OSC_VERIFY + "system.a_x = 1.4142135623730951\n")
    result = run(cfg)
    assert result.status == 3
    # the broken commutator shows up as a residual of exactly 1
    assert result.table.rows[0][4] == pytest.approx(1.0, rel=1e-12)


def test_run_propagate_and_stride():
    result = run(parse_config(OSC_PROPAGATE))
    assert result.status == 0
    assert len(result.table.rows) == 11
    assert result.table.rows[-1][0] == pytest.approx(1.0)
    lp_re, lp_im = result.table.rows[-1][1], result.table.rows[-1][2]
    want = 1j / math.sqrt(2.0) * np.exp(1j)
    assert lp_re == pytest.approx(want.real, abs=1e-10)
    assert lp_im == pytest.approx(want.imag, abs=1e-10)


def test_run_unknown_task_and_kind():
    with pytest.raises(ValidationError):
        run(parse_config("task.kind = juggle\n"))
    with pytest.raises(ValidationError):
        run(parse_config("system.kind = pendulum\ntask.kind = verify\n"))


def test_run_tomogram_normalization_metadata():
    cfg = parse_config(
        "system.kind = oscillator\nsystem.omega = const:1.0\n"
        "task.kind = tomogram\ntask.t = 0.7\ntask.alpha = 0.5+0.3j\n"
        "task.frames = 1,0; 0.6,0.8\ntask.points = 401\n"
    )
    result = run(cfg)
    assert result.status == 0
    assert result.table.columns == ("x", "w_f1", "w_f2")
    d1 = float(result.table.metadata["normalization_defect_f1"])
    assert d1 < 1e-6
    w = np.array([row[1] for row in result.table.rows])
    assert w.min() >= 0.0


def test_run_sumrule_table_consistency():
    cfg = parse_config("task.kind = sumrule\ntask.theta = 0.5\ntask.max_m = 60\n")
    result = run(cfg)
    assert result.status == 0
    rows = np.array(result.table.rows)
    np.testing.assert_allclose(np.cumsum(rows[:, 1]), rows[:, 2], rtol=1e-12)
    assert rows[-1, 2] == pytest.approx(float(result.table.metadata["partial_sum"]))
    assert float(result.table.metadata["target"]) == pytest.approx(math.cosh(0.5))


def test_run_transitions_row_sums():
    cfg = parse_config(
        "task.kind = transitions\ntask.theta = 0.5\ntask.max_n = 1\ntask.max_m = 30\n"
    )
    result = run(cfg)
    assert result.status == 0
    rows = np.array(result.table.rows)
    assert rows.shape == (2 * 31, 5)
    for n in (0, 1):
        s = rows[rows[:, 0] == n][:, 4].sum()
        assert s == pytest.approx(1.0, abs=1e-8)


def test_tol_override_flips_gate(tmp_path):
    path = tmp_path / "p.conf"
    path.write_text(OSC_PROPAGATE)
    assert main([str(path), "--quiet"]) == 0
    assert main([str(path), "--quiet", "--tol", "1e-30"]) == 3


def test_main_exit_codes(tmp_path):
    good = tmp_path / "ok.conf"
    good.write_text(OSC_VERIFY)
    assert main([str(good), "--quiet"]) == 0

    assert main([str(tmp_path / "absent.conf"), "--quiet"]) == 1

    bad = tmp_path / "bad.conf"
    bad.write_text("just text\n")
    assert main([str(bad), "--quiet"]) == 1

    runaway = tmp_path / "runaway.conf"
    runaway.write_text(
        "system.kind = custom-quadratic\nsystem.b_pp = const:1.0\n"
        "system.b_xx = const:-1.0\nsystem.b_px = const:2.0\n"
        "task.kind = verify\ntask.times = 20.0\n"
    )
    assert main([str(runaway), "--quiet"]) == 2

    corrupted = tmp_path / "corrupt.conf"
    corrupted.write_text(OSC_VERIFY + "system.a_x = 1.4142135623730951\n")
    assert main([str(corrupted), "--quiet"]) == 3


def test_output_formats_and_determinism(tmp_path):
    conf = tmp_path / "c.conf"
    conf.write_text(OSC_PROPAGATE)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main([str(conf), "--out", str(out1), "--quiet"]) == 0
    assert main([str(conf), "--out", str(out2), "--quiet"]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    text = b1.decode("utf-8")
    lines = text.strip().split("\n")
    meta = [ln for ln in lines if ln.startswith("# ")]
    assert meta == sorted(meta)
    header = next(ln for ln in lines if not ln.startswith("#"))
    assert header.split(",")[0] == "time"
    assert "generated_at" not in text

    out_json = tmp_path / "a.json"
    assert main([str(conf), "--format", "json", "--out", str(out_json), "--quiet"]) == 0
    payload = json.loads(out_json.read_text())
    assert payload["columns"][0] == "time"
    assert len(payload["rows"]) == 11
    assert payload["metadata"]["gate_passed"] == "true"


def test_timestamp_opt_in(tmp_path):
    conf = tmp_path / "c.conf"
    conf.write_text(OSC_PROPAGATE + "output.timestamp = true\n")
    out = tmp_path / "stamped.csv"
    assert main([str(conf), "--out", str(out), "--quiet"]) == 0
    assert "generated_at" in out.read_text()


def test_custom_quadratic_system():
    cfg = parse_config(
        "system.kind = custom-quadratic\nsystem.b_pp = const:1.0\n"
        "system.b_xx = poly:1,0.2\ntask.kind = propagate\n"
        "task.t_end = 2.0\ntask.dt = 1e-3\ntask.stride = 200\n"
    )
    result = run(cfg)
    assert result.status == 0
    assert float(result.table.metadata["residual_max"]) < 1e-10
