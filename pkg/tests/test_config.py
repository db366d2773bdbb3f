"""Tests for run configuration and its parsers."""

import json
from pathlib import Path
from tempfile import TemporaryDirectory

import pytest

from curvatura.config import (
    RunConfig,
    Tolerances,
    load_run_config,
    merge_payloads,
    parse_int_list,
    parse_overrides,
)
from curvatura.errors import UsageError
from curvatura.parsers import JsonConfigParser, TomlConfigParser, parser_for_path

TOML_CONFIG = """
command = "el-check"
p = [0, 1, 2]
resolution = 6

[manifold]
name = "quadric-cp3"

[manifold.parameters]
c = 4.0

[tolerances]
el = 1e-6
"""


def test_defaults():
    config = load_run_config({"command": "invariants", "manifold": {"name": "sphere"}})
    assert isinstance(config, RunConfig)
    assert config.format == "json"
    assert config.seed == 0
    assert config.p is None
    assert config.tolerances == Tolerances()
    assert config.steps.fd_step == 1e-5
    assert config.manifold.label == "sphere"


def test_unknown_command_is_a_usage_error():
    with pytest.raises(UsageError, match="Invalid run configuration"):
        load_run_config({"command": "bogus", "manifold": {"name": "sphere"}})


def test_manifold_needs_exactly_one_source():
    with pytest.raises(UsageError, match="exactly one"):
        load_run_config({"command": "tube", "manifold": {"name": "sphere", "factory": "a.b"}})
    with pytest.raises(UsageError, match="exactly one"):
        load_run_config({"command": "tube", "manifold": {}})


def test_unknown_keys_are_rejected():
    with pytest.raises(UsageError, match="Invalid run configuration"):
        load_run_config({"command": "tube", "manifold": {"name": "sphere"}, "colour": "red"})
    with pytest.raises(UsageError, match="Invalid run configuration"):
        load_run_config({"command": "tube", "manifold": {"name": "sphere"}, "tolerances": {"nope": 1.0}})


def test_resolution_lower_bound():
    with pytest.raises(UsageError):
        load_run_config({"command": "tube", "manifold": {"name": "sphere"}, "resolution": 2})


def test_merge_payloads_is_recursive_and_skips_none():
    base = {"command": "tube", "tolerances": {"el": 1.0, "cp": 2.0}, "seed": 3}
    merged = merge_payloads(base, {"tolerances": {"cp": 5.0}, "seed": None, "fields": 2})
    assert merged == {"command": "tube", "tolerances": {"el": 1.0, "cp": 5.0}, "seed": 3, "fields": 2}
    assert base["tolerances"]["cp"] == 2.0


def test_parse_overrides():
    assert parse_overrides(["el=1e-6", " cp = 0.5"]) == {"el": 1e-6, "cp": 0.5}
    with pytest.raises(UsageError, match="Unknown tolerance 'bogus'"):
        parse_overrides(["bogus=1"])
    with pytest.raises(UsageError, match="key=value"):
        parse_overrides(["el"])
    with pytest.raises(UsageError, match="needs a number"):
        parse_overrides(["el=small"])


@pytest.mark.parametrize(
    "text, values",
    [("0,1,2", [0, 1, 2]), ("0-2", [0, 1, 2]), ("1", [1]), ("0, 2-3", [0, 2, 3])],
)
def test_parse_int_list(text, values):
    assert parse_int_list(text) == values


def test_parse_int_list_rejects_words():
    with pytest.raises(UsageError, match="Expected a list"):
        parse_int_list("one")


def test_toml_parser_initialize():
    config = TomlConfigParser(TOML_CONFIG).initialize()
    assert config.command == "el-check"
    assert config.p == [0, 1, 2]
    assert config.manifold.name == "quadric-cp3"
    assert config.manifold.parameters == {"c": 4.0}
    assert config.tolerances.el == 1e-6
    assert config.tolerances.cp == Tolerances().cp


def test_toml_parser_overrides_win():
    config = TomlConfigParser(TOML_CONFIG).initialize({"resolution": 8, "tolerances": {"cp": 1e-4}})
    assert config.resolution == 8
    assert config.tolerances.cp == 1e-4
    assert config.tolerances.el == 1e-6


def test_toml_parser_invalid_document():
    with pytest.raises(UsageError, match="Invalid TOML"):
        TomlConfigParser("command = ")


def test_json_parser_initialize():
    payload = {"command": "tube", "manifold": {"name": "sphere", "parameters": {"r": 2.0}}, "radii": [0.1]}
    config = JsonConfigParser(json.dumps(payload)).initialize()
    assert config.command == "tube"
    assert config.manifold.parameters == {"r": 2.0}
    assert config.radii == [0.1]


def test_json_parser_invalid_documents():
    with pytest.raises(UsageError, match="Invalid JSON"):
        JsonConfigParser("{not json")
    with pytest.raises(UsageError, match="must be an object"):
        JsonConfigParser("[1, 2]")


def test_json_parser_payload_is_a_copy():
    parser = JsonConfigParser(json.dumps({"command": "tube"}))
    parser.payload["command"] = "changed"
    assert parser.payload["command"] == "tube"


def test_parser_for_path_picks_by_suffix():
    with TemporaryDirectory() as tmpdir:
        toml_path = Path(tmpdir) / "run.toml"
        toml_path.write_text(TOML_CONFIG, encoding="utf-8")
        assert isinstance(parser_for_path(toml_path), TomlConfigParser)

        json_path = Path(tmpdir) / "run.JSON"
        json_path.write_text(json.dumps({"command": "tube"}), encoding="utf-8")
        assert isinstance(parser_for_path(json_path), JsonConfigParser)

        with pytest.raises(UsageError, match="Unsupported configuration format"):
            parser_for_path(Path(tmpdir) / "run.yaml")
        with pytest.raises(UsageError, match="Cannot read configuration file"):
            parser_for_path(Path(tmpdir) / "missing.toml")
