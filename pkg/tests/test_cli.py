import json
import os
from tempfile import TemporaryDirectory

from curvatura.cli import build_parser, config_from_args, main


def test_list_zoo_to_a_file():
    with TemporaryDirectory() as tmpdir:
        out = os.path.join(tmpdir, "zoo.json")
        assert main(["list-zoo", "--out", out]) == 0
        with open(out) as f:
            rows = json.load(f)
    names = [row["name"] for row in rows]
    assert "clifford-torus-s3" in names
    assert len(names) == 15


def test_list_zoo_to_stdout(capsys):
    assert main(["list-zoo"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert any(row["name"] == "sphere" for row in rows)


def test_invariants_report_file():
    with TemporaryDirectory() as tmpdir:
        out = os.path.join(tmpdir, "sphere.json")
        assert main(["invariants", "--manifold", "sphere", "--resolution", "8", "--out", out]) == 0
        with open(out) as f:
            document = json.load(f)
    assert document["passed"] is True
    assert document["command"] == "invariants"
    assert document["settings"]["resolution"] == 8


def test_report_on_stdout(capsys):
    code = main(["invariants", "--manifold", "sphere", "--param", "r=2.0", "--resolution", "6", "--p", "0"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["parameters"]["r"] == 2.0
    assert document["settings"]["p"] == [0]


def test_csv_format_writes_tables():
    with TemporaryDirectory() as tmpdir:
        out = os.path.join(tmpdir, "run.json")
        code = main(["tube", "--manifold", "sphere", "--resolution", "6", "--radii", "0.25", "--out", out, "--format", "csv"])
        assert code == 0
        assert sorted(os.listdir(tmpdir)) == ["run.json", "run.radii.csv"]


def test_usage_errors_exit_with_two():
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["invariants"]) == 2
    assert main(["invariants", "--manifold", "no-such-manifold"]) == 2
    assert main(["invariants", "--manifold", "sphere", "--p", "5"]) == 2
    assert main(["invariants", "--manifold", "sphere", "--tol-overrides", "bogus=1"]) == 2
    assert main(["invariants", "--manifold", "sphere", "--format", "csv"]) == 2
    assert main(["invariants", "--manifold", "sphere", "--param", "novalue"]) == 2


def test_precondition_failure_exits_with_one(capsys):
    assert main(["cp-check", "--manifold", "sphere", "--resolution", "4"]) == 1
    assert "PreconditionError" in capsys.readouterr().err


def test_config_file_with_flag_overrides():
    """Flags win over the file, and --manifold replaces the file's manifold entirely."""
    with TemporaryDirectory() as tmpdir:
        path = os.path.join(tmpdir, "run.toml")
        with open(path, "w") as f:
            f.write('command = "tube"\nresolution = 12\nseed = 3\n\n[manifold]\nname = "torus-of-revolution"\n\n[manifold.parameters]\nR = 3.0\n')
        args = build_parser().parse_args(["invariants", "--config", path, "--manifold", "sphere", "--resolution", "6"])
        config = config_from_args(args)
    assert config.command == "invariants"
    assert config.manifold.name == "sphere"
    assert config.manifold.parameters == {}
    assert config.resolution == 6
    assert config.seed == 3


def test_config_file_alone():
    with TemporaryDirectory() as tmpdir:
        path = os.path.join(tmpdir, "run.json")
        with open(path, "w") as f:
            json.dump({"command": "tube", "manifold": {"name": "ellipsoid", "parameters": {"a": 1.5}}}, f)
        args = build_parser().parse_args(["austere", "--config", path, "--tol-overrides", "austerity=1e-4"])
        config = config_from_args(args)
    assert config.command == "austere"
    assert config.manifold.name == "ellipsoid"
    assert config.manifold.parameters == {"a": 1.5}
    assert config.tolerances.austerity == 1e-4
