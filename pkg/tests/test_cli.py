import json

import pytest

from mtrap import __version__
from mtrap.cli import PRESETS, list_presets, load_scenario, main, run_scenario
from mtrap.errors import ConfigError

TORUS = """[scenario]
name = "torus"
theorem = "corollary1"
signature = [1, 1]
sigma = "0.5"
[verify]
grid = [8, 8]
[output]
mesh = "torus.csv"
"""


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    assert "cylinder-thm-zero" in out and "null-hyperplane-graph" in out and "latitude-corollary3" in out
    assert len(PRESETS) >= 8
    assert out.strip() == list_presets()
    names = [line.split()[0] for line in out.strip().splitlines()]
    assert names == sorted(names)


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_run_torus_writes_report_and_mesh(tmp_path, capsys):
    cfg = tmp_path / "torus.toml"
    cfg.write_text(TORUS)
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "torus.json").read_text())
    assert report["status"] == "pass"
    assert report["checks"]["residual_mt"]["max"] < 1e-10
    assert report["tau"]["range"] == [0.0, 0.0]
    lines = (tmp_path / "torus.csv").read_text().splitlines()
    assert lines[0] == "u1,u2,phi1,phi2,phi3,phi4,residual_mt,degenerate"
    assert len(lines) == 65


def test_grid_override(tmp_path):
    cfg = tmp_path / "torus.toml"
    cfg.write_text(TORUS)
    assert main(["run", str(cfg), "--out", str(tmp_path), "--grid", "3x4", "--mode", "fd"]) == 0
    report = json.loads((tmp_path / "torus.json").read_text())
    assert report["aggregates"]["samples"] == 12 and report["scenario"]["mode"] == "fd"


def test_zero_sigma_exit_one_without_mesh(tmp_path, capsys):
    cfg = tmp_path / "zero.toml"
    cfg.write_text(TORUS.replace('"0.5"', '"0"').replace('"torus"', '"zero"'))
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 1
    assert "NothingVerifiable" in capsys.readouterr().out
    report = json.loads((tmp_path / "zero.json").read_text())
    assert report["failures"] == ["NothingVerifiable"]
    assert not (tmp_path / "torus.csv").exists()
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp")] == []


def test_malformed_expression_exit_two(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(TORUS.replace('"0.5"', '"cos("'))
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "offset 4" in err and "line 5" in err and "column 14" in err
    assert not (tmp_path / "torus.json").exists()


@pytest.mark.parametrize(
    "text, line",
    [
        ('[scenario]\nname = "x"\ntheorem = "corollary1"\nsigma = = 1\n', 4),
        ('[scenario]\nname = "x"\ntheorem = "nonsense"\n', 3),
        ('[scenario]\nname = "x"\ntheorem = "corollary1"\nsignature = [2, 0]\nsigma = "1"\n', 4),
        ('[scenario]\nname = "x"\ntheorem = "corollary1"\nsigma = "1"\n[verify]\nmode = "exact"\n', 6),
        ('[scenario]\nname = "x"\ntheorem = "corollary1"\nsigma = "1"\n[verify]\ngrids = [2, 2]\n', 6),
        ('[scenario]\nname = "x"\ntheorem = "correspondence"\nsignature = [1, 1]\nsigma = "1"\n', 4),
    ],
)
def test_config_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as info:
        load_scenario(text)
    assert info.value.line == line


def test_config_error_exit_code(capsys):
    assert run_scenario('[scenario]\ntheorem = "corollary1"\nsigma = "u + q"\n') == 2
    assert "unknown symbol 'q'" in capsys.readouterr().err


def test_unknown_preset(capsys):
    assert main(["run", "preset:nope"]) == 2


def test_check_failure_names_check(tmp_path, capsys):
    assert run_scenario(PRESETS["cylinder-thm-zero"].text, str(tmp_path)) == 1
    assert "FAIL residual_mt" in capsys.readouterr().out
    report = json.loads((tmp_path / "cylinder-thm-zero.json").read_text())
    assert report["failures"] == ["residual_mt"]
    assert report["checks"]["lemma_metric"]["pass"] and report["tau"]["accepted"] == [2.0]
