"""Suite runner, config loader, and CLI contract."""

import json

import numpy as np
import pytest

from crossedlab.cli import main
from crossedlab.config import LabConfig, TestInputSpec, load_config
from crossedlab.errors import ConfigError
from crossedlab.schwartz import CircleGrid, LineGrid
from crossedlab.verify import (
    DEFAULT_TOLERANCES,
    SUITES,
    random_plane,
    random_schwartz,
    run_suite,
)

FAST = LabConfig(trials=1)


def test_config_defaults_and_replace():
    cfg = LabConfig()
    assert cfg.points == 512 and cfg.circle_points == 128 and cfg.dim == 2
    cfg2 = cfg.replace(seed=1, trials=5)
    assert cfg2.seed == 1 and cfg2.trials == 5 and cfg.seed != 1


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        LabConfig(action_kind="exotic")
    with pytest.raises(ConfigError):
        LabConfig(trials=0)


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(
        json.dumps(
            {
                "dim": 2,
                "action_kind": "unitary",
                "generator": [[1.0, [0.0, -0.5]], [[0.0, 0.5], -1.0]],
                "seed": 7,
                "trials": 2,
                "suites": ["fourier"],
                "tolerances": {"fourier/roundtrip": 1e-9},
                "input": {"sigma": 0.4},
            }
        )
    )
    cfg = load_config(str(path))
    assert cfg.seed == 7
    assert cfg.generator[0, 1] == -0.5j
    assert np.allclose(cfg.generator, cfg.generator.conj().T)
    assert cfg.suites == ("fourier",)
    assert cfg.tolerances["fourier/roundtrip"] == 1e-9
    assert cfg.input.sigma == 0.4


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"grid_size": 512}')
    with pytest.raises(ConfigError):
        load_config(str(path))
    path.write_text("not json")
    with pytest.raises(ConfigError):
        load_config(str(path))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_load_config_matrix_dim_inference(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"generator": [[0.0, [0.0, -1.0], 0.0], [[0.0, 1.0], 0.0, 0.0], [0.0, 0.0, 0.0]]}')
    cfg = load_config(str(path))
    assert cfg.dim == 3
    path.write_text('{"dim": 2, "generator": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]}')
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_random_schwartz_decays():
    rng = np.random.default_rng(0)
    spec = TestInputSpec()
    f = random_schwartz(LineGrid(10.0, 256), 2, spec, rng)
    interior = np.max(np.abs(f.values))
    edge = np.max(np.abs(f.values[:4])) + np.max(np.abs(f.values[-4:]))
    assert edge < 1e-12 * interior
    c = random_schwartz(CircleGrid(64), 2, spec, rng)
    assert c.values.shape == (64, 2, 2)
    W = random_plane(LineGrid(10.0, 256), 1, spec, rng)
    assert W.values.shape == (256, 256, 1, 1)


def test_run_suite_deterministic():
    r1 = run_suite("operator-T", FAST)
    r2 = run_suite("operator-T", FAST)
    assert r1.to_dict(include_timings=False) == r2.to_dict(include_timings=False)
    r3 = run_suite("operator-T", FAST.replace(seed=99))
    assert r1.to_dict(include_timings=False) != r3.to_dict(include_timings=False)


def test_every_check_has_a_registered_tolerance():
    # cheap suites at small circle size; names stripped of [group] must hit
    # an explicit entry in DEFAULT_TOLERANCES, not the fallback
    cfg = FAST.replace(circle_points=64)
    for name in ("action", "operator-T", "scalar-sequences", "hadamard"):
        rep = run_suite(name, cfg)
        for c in rep.checks:
            base = c.name.split("[", 1)[0]
            assert base in DEFAULT_TOLERANCES, c.name


def test_tolerance_override_applies():
    cfg = FAST.replace(tolerances={"operator-T/twist-roundtrip": 1e-30})
    rep = run_suite("operator-T", cfg)
    bad = [c for c in rep.checks if not c.passed]
    assert bad and all(c.name.startswith("operator-T/twist-roundtrip") for c in bad)
    assert not rep.passed


def test_report_dict_shape():
    rep = run_suite("fourier", FAST)
    d = rep.to_dict()
    assert d["suite"] == "fourier"
    assert {"name", "statement", "residual", "tolerance", "passed"} <= set(d["checks"][0])
    assert "elapsed_s" in d
    assert "elapsed_s" not in rep.to_dict(include_timings=False)
    assert json.dumps(d)  # serializable


def test_unknown_suite_raises():
    with pytest.raises(ValueError):
        run_suite("no-such", FAST)


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in SUITES:
        assert name in out


def test_cli_run_writes_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(["run", "--suite", "fourier", "--trials", "1", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["reports"][0]["suite"] == "fourier"
    text = capsys.readouterr().out
    assert "[PASS] fourier" in text


def test_cli_json_only_deterministic(capsys):
    assert main(["run", "--suite", "operator-T", "--trials", "1", "--json-only"]) == 0
    a = json.loads(capsys.readouterr().out)
    assert main(["run", "--suite", "operator-T", "--trials", "1", "--json-only"]) == 0
    b = json.loads(capsys.readouterr().out)
    for doc in (a, b):
        for r in doc["reports"]:
            r.pop("elapsed_s")
    assert a == b


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"action_kind": "bogus"}')
    assert main(["run", "--config", str(bad)]) == 2
    strict = tmp_path / "strict.json"
    strict.write_text('{"tolerances": {"fourier/roundtrip": 1e-30}, "suites": ["fourier"]}')
    assert main(["run", "--config", str(strict), "--trials", "1"]) == 1
    assert main(["run", "--suite", "no-such"]) == 2
    capsys.readouterr()


def test_cli_convergence_points_contract(capsys):
    # single size: one-row table, no ratio check, clean exit
    assert main(["convergence", "--suite", "operator-T", "--points", "128"]) == 0
    assert main(["convergence", "--points", "x,y"]) == 2
    assert main(["convergence", "--suite", "fourier"]) == 2  # not a convergence suite
    capsys.readouterr()
