import json
import subprocess
import sys

import pytest

from liefourier.cli import emit_report, fmt, main, run_config
from liefourier.errors import ConfigurationError, PreconditionError


def _write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def _selftest_cfg(**over):
    cfg = {"task": "selftest", "group": {"kind": "torus", "dim": 1}, "lam": 32.0, "seed": 7}
    cfg.update(over)
    return cfg


def test_selftest_ok(tmp_path):
    out = tmp_path / "out"
    assert run_config(_selftest_cfg(), out) == 0
    report = (out / "selftest_report.csv").read_text()
    assert "plancherel" in report and ",ok" in report and "fail" not in report
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert float(manifest["headline"]["plancherel_residual"]) <= 1e-10
    assert manifest["version"]


def test_determinism_byte_identical(tmp_path):
    cfg = {
        "task": "bound-sweep",
        "group": {"kind": "torus", "dim": 1},
        "lams": [8.0, 16.0],
        "symbol": {"type": "power_it", "t": 2.0},
        "specs": [{"r": 0, "p": 2, "q": 2}],
        "ensemble": {"kind": "gaussian-coefficients", "count": 3},
        "seed": 5,
    }
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_config(dict(cfg), out1) == 0
    assert run_config(dict(cfg), out2) == 0
    assert (out1 / "bound-sweep_report.csv").read_bytes() == (out2 / "bound-sweep_report.csv").read_bytes()
    assert (out1 / "run_manifest.json").read_bytes() == (out2 / "run_manifest.json").read_bytes()


def test_unknown_field_rejected(tmp_path):
    cfg = _selftest_cfg(bogus=1)
    out = tmp_path / "out"
    assert run_config(cfg, out) == 1
    assert not (out / "selftest_report.csv").exists()


def test_unknown_tolerance_rejected(tmp_path):
    cfg = _selftest_cfg(tolerances={"nope": 1.0})
    assert run_config(cfg, tmp_path / "out") == 1


def test_malformed_config_cli_exit1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad), "--out", str(tmp_path / "o")]) == 1


def test_wave_divergence_flag_exit2(tmp_path):
    cfg = {
        "task": "check-symbol",
        "group": {"kind": "torus", "dim": 1},
        "lams": [32.0, 128.0],
        "symbol": {"type": "wave"},
        "checker": "marcinkiewicz",
        "order": 1,
        "tolerances": {"max_growth": 3.0},
        "seed": 1,
    }
    out = tmp_path / "out"
    assert run_config(cfg, out) == 2
    report = (out / "check-symbol_report.csv").read_text()
    assert "growth[(1,)]" in report and "fail" in report


def test_bound_sweep_trend_assertion(tmp_path):
    cfg = {
        "task": "bound-sweep",
        "group": {"kind": "torus", "dim": 1},
        "lams": [16.0, 32.0],
        "symbol": {"type": "identity"},
        "specs": [{"r": 0, "p": 2, "q": 2}],
        "ensemble": {"kind": "gaussian-coefficients", "count": 3},
        "trend": "increasing",
        "seed": 5,
    }
    # identity ratios are flat at 1, so the increasing-trend assertion fails
    assert run_config(cfg, tmp_path / "out") == 2
    report = (tmp_path / "out" / "bound-sweep_report.csv").read_text()
    assert "fail" in report


def test_tl_norm_task(tmp_path):
    cfg = {
        "task": "tl-norm",
        "group": {"kind": "torus", "dim": 1},
        "lam": 16.0,
        "specs": [{"r": 0, "p": 2, "q": 2}, {"r": 0, "p": 1, "q": 2}],
        "count": 2,
        "seed": 3,
    }
    out = tmp_path / "out"
    assert run_config(cfg, out) == 0
    lines = (out / "tl-norm_report.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    header = lines[0].split(",")
    assert "weak_norm" in header


def test_kernel_decay_task(tmp_path):
    cfg = {
        "task": "kernel-decay",
        "group": {"kind": "torus", "dim": 1},
        "lam": 64.0,
        "symbol": {"type": "power_it", "t": 1.0},
        "windows": [2, 3, 4],
        "z_distance": 0.1 * 3.141592653589793,
        "seed": 0,
    }
    out = tmp_path / "out"
    assert run_config(cfg, out) == 0
    report = (out / "kernel-decay_report.csv").read_text()
    assert "slope" in report


def test_transform_task_and_seed_override(tmp_path):
    cfg = _selftest_cfg(task="transform", count=2)
    path = _write(tmp_path, cfg)
    out = tmp_path / "o1"
    assert main(["--config", str(path), "--out", str(out), "--seed", "9"]) == 0
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["seed"] == 9


def test_tol_override_can_fail_run(tmp_path):
    path = _write(tmp_path, _selftest_cfg())
    # impossible roundtrip tolerance forces status fail -> exit 2
    code = main(["--config", str(path), "--out", str(tmp_path / "o"), "--tol", "roundtrip_max=1e-30"])
    assert code == 2


def test_json_row_format(tmp_path):
    path = _write(tmp_path, _selftest_cfg(format="json"))
    out = tmp_path / "o"
    assert main(["--config", str(path), "--out", str(out)]) == 0
    rows = json.loads((out / "selftest_report.json").read_text())
    assert isinstance(rows, list) and rows[0]["task"] == "selftest"


def test_emit_report_contract(tmp_path):
    with pytest.raises(PreconditionError):
        emit_report([], tmp_path / "x.csv")
    with pytest.raises(ConfigurationError):
        emit_report([{"a": 1}], tmp_path / "x.xml", "xml")
    with pytest.raises(PreconditionError):
        emit_report([{"a": 1}, {"b": 2}], tmp_path / "x.csv")
    emit_report([{"a": 1.5}], tmp_path / "x.csv")
    assert (tmp_path / "x.csv").read_text() == "a\n1.5\n"


def test_fmt_17_digits():
    assert fmt(1.0 / 3.0) == "0.33333333333333331"
    assert fmt(7) == "7"
    assert fmt(True) == "true"


def test_shipped_example_configs_validate(tmp_path):
    # the configs under scripts/configs must stay schema-valid; run the two
    # cheap ones end to end, only validate the expensive ones
    from pathlib import Path

    from liefourier.cli import _validate_config

    cfg_dir = Path(__file__).resolve().parent.parent / "scripts" / "configs"
    configs = sorted(cfg_dir.glob("*.json"))
    assert len(configs) >= 4
    for path in configs:
        _validate_config(json.loads(path.read_text()))
    cheap = json.loads((cfg_dir / "selftest_torus.json").read_text())
    assert run_config(cheap, tmp_path / "self") == 0
    diverge = json.loads((cfg_dir / "wave_divergence.json").read_text())
    assert run_config(diverge, tmp_path / "wave") == 2  # divergence flagged


def test_console_entry_point(tmp_path):
    path = _write(tmp_path, _selftest_cfg())
    proc = subprocess.run(
        [sys.executable, "-m", "liefourier.cli", "--config", str(path), "--out", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "selftest: ok" in proc.stderr
