"""Command line interface: exit codes, JSON output, config precedence."""

import json

import pytest

from chball.cli import main
from chball.holo import PolynomialFunction, save_poly
from chball.norms import exact_hardy_norm_p2


def _battery_poly(n=1):
    return PolynomialFunction.coordinate(0, n) + PolynomialFunction.constant(0.5, n)


def test_verify_geometry_passes(tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(
        [
            "verify",
            "--suite",
            "geometry",
            "--n",
            "1",
            "--samples",
            "2048",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    text = capsys.readouterr().out
    assert "FAIL" not in text
    assert "0 failed" in text
    assert (out / "report.json").is_file()


def test_verify_config_file_and_flag_precedence(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps(
            {
                "suites": ["geometry"],
                "n_list": [1],
                "sample_budget": 2048,
                "seed": 7,
                "output_dir": str(tmp_path / "from_file"),
            }
        )
    )
    flag_out = tmp_path / "from_flag"
    rc = main(["verify", "--config", str(cfg_path), "--out", str(flag_out)])
    assert rc == 0
    capsys.readouterr()
    doc = json.loads((flag_out / "report.json").read_text())
    assert doc["seed"] == 7
    assert doc["sample_budget"] == 2048
    assert doc["suites"] == ["geometry"]
    assert not (tmp_path / "from_file").exists()


def test_verify_rejects_bad_config(tmp_path, capsys):
    assert main(["verify", "--suite", "nonsense", "--out", str(tmp_path)]) == 2
    assert main(["verify", "--n", "1,zebra", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"unknown_key": 1}')
    assert main(["verify", "--config", str(bad), "--out", str(tmp_path)]) == 2
    bad.write_text("not json")
    assert main(["verify", "--config", str(bad), "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_argparse_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["ineq", "--check", "definitely-not-a-check"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    capsys.readouterr()


def test_norms_output_matches_exact_norm(tmp_path, capsys):
    f = _battery_poly()
    path = tmp_path / "f.json"
    save_poly(f, path)
    rc = main(
        ["norms", "--f", str(path), "--space", "hardy", "--p", "2", "--samples", "4096"]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["space"] == "hardy"
    assert doc["p"] == 2.0
    assert doc["samples"] == 4096
    assert doc["stderr"] > 0.0
    assert abs(doc["value"] - exact_hardy_norm_p2(f)) <= 5.0 * doc["stderr"]


def test_norms_bergman_requires_alpha(tmp_path, capsys):
    path = tmp_path / "f.json"
    save_poly(_battery_poly(), path)
    rc = main(["norms", "--f", str(path), "--space", "bergman", "--p", "2"])
    assert rc == 2
    assert "alpha" in capsys.readouterr().err
    rc = main(
        [
            "norms",
            "--f",
            str(path),
            "--space",
            "bergman",
            "--p",
            "2",
            "--alpha",
            "2.5",
        ]
    )
    assert rc == 0
    capsys.readouterr()


def test_norms_missing_file_exits_2(tmp_path, capsys):
    rc = main(["norms", "--f", str(tmp_path / "nope.json"), "--space", "hardy", "--p", "2"])
    assert rc == 2
    capsys.readouterr()


@pytest.mark.parametrize(
    "argv",
    [
        ["ineq", "--check", "iso-refined", "--n", "2"],
        ["ineq", "--check", "iso-model", "--n", "1"],
        ["ineq", "--check", "sobolev-I", "--n", "1", "--samples", "2048"],
        ["ineq", "--check", "sobolev-III", "--n", "2", "--samples", "2048"],
        ["ineq", "--check", "hardy-weighted"],
        ["ineq", "--check", "kalaj"],
    ],
)
def test_ineq_checks_pass(argv, capsys):
    rc = main(argv)
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["passed"] is True


def test_ineq_invalid_regime_dimension_exits_2(capsys):
    rc = main(["ineq", "--check", "sobolev-III", "--n", "1"])
    assert rc == 2
    capsys.readouterr()


def test_curves_subcommand_writes_files(tmp_path, capsys):
    rc = main(
        [
            "curves",
            "--n",
            "1",
            "--samples",
            "1024",
            "--points",
            "16",
            "--out",
            str(tmp_path),
            "--label",
            "demo",
        ]
    )
    assert rc == 0
    text = capsys.readouterr().out
    assert "curves_demo.csv" in text
    assert (tmp_path / "curves_demo.csv").is_file()
    assert (tmp_path / "rearrangement_demo.csv").is_file()
