import json

import pytest

from iqgklo.cli import (
    SCHEMA_ID, instance_from_description, load_config, main,
)
from iqgklo.errors import ParseError, ValidationError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_catalog_structured(capsys):
    code, out, _ = run_cli(capsys, "catalog", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    names = [e["name"] for e in doc["catalog"]]
    assert len(names) == 10 and "qsA2-v11" in names


def test_validate_instance_text(capsys):
    code, out, _ = run_cli(capsys, "validate", "--instance", "qsA4")
    assert code == 0
    assert "valid: True" in out


def test_validate_unknown_instance(capsys):
    code, _, err = run_cli(capsys, "validate", "--instance", "nope")
    assert code == 2
    assert "error:" in err


def test_image_single_generator(capsys):
    code, out, _ = run_cli(capsys, "image", "B1",
                           "--instance", "sA1-v1-t0",
                           "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert list(doc["images"]) == ["B1"]
    assert "delta[" in doc["images"]["B1"]


def test_image_unknown_generator(capsys):
    code, _, err = run_cli(capsys, "image", "B9",
                           "--instance", "sA1-v1-t0")
    assert code == 2
    assert "unknown generator" in err


def test_check_pass_and_report_shape(capsys):
    code, out, _ = run_cli(capsys, "check", "--instance", "sA1-v1-t0",
                           "--relations", "BB2,HB", "--trials", "5",
                           "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["series_soundness"] == "pass"
    assert doc["oracle_concordance"] == "pass"
    assert {r["check"] for r in doc["results"]} == {"BB2[1,1]", "HB[1,1]"}
    assert all(r["status"] == "pass" for r in doc["results"])


def test_check_failure_exit_code(capsys):
    code, out, _ = run_cli(capsys, "check", "--instance", "qsA3-t0",
                           "--relations", "BB1",
                           "--bb1-convention", "i",
                           "--format", "structured")
    assert code == 1
    doc = json.loads(out)
    assert any(r["status"] == "fail" for r in doc["results"])


def test_check_unknown_relation_kind(capsys):
    code, _, err = run_cli(capsys, "check", "--instance", "sA1-v1-t0",
                           "--relations", "BOGUS")
    assert code == 2
    assert "unknown relation kinds" in err


def test_identities_verb(capsys):
    code, out, _ = run_cli(capsys, "identities", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["results"]) == 13
    assert all(r["status"] == "pass" for r in doc["results"])


def test_load_config_inline_instance(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "schema": SCHEMA_ID,
        "instance": {"type": "A", "rank": 2, "tau": [[1, 2]],
                     "framing": [1, 1], "shift": [0, 0]},
        "relations": ["BB3"], "trials": 5, "seed": 7, "order": 4,
    }))
    cfg = load_config(str(cfg_path))
    inst = cfg["instance"]
    assert inst.diagram.rank == 2 and inst.diagram.t(1) == 2
    assert inst.mult == (1, 1)       # recomputed, never read from input
    assert cfg["trials"] == 5 and cfg["seed"] == 7 and cfg["order"] == 4


def test_config_flag_precedence(capsys, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "schema": SCHEMA_ID, "catalog": "sA1-v1-t0",
        "relations": ["BB2"], "trials": 4, "seed": 9, "order": 3,
    }))
    code, out, _ = run_cli(capsys, "check", "--config", str(cfg_path),
                           "--order", "5", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    # config values survive; explicit flags win
    assert doc["trials"] == 4 and doc["seed"] == 9
    assert doc["series_order"] == 5


def test_load_config_rejects_bad_schema():
    with pytest.raises(ParseError):
        load_config(text=json.dumps({"schema": "other/9"}))


def test_load_config_rejects_bad_json():
    with pytest.raises(ParseError):
        load_config(text="{not json")


def test_load_config_requires_source():
    with pytest.raises(ParseError):
        load_config(text=json.dumps({"schema": SCHEMA_ID}))


def test_inline_instance_validation():
    with pytest.raises(ValidationError):
        instance_from_description({"type": "D", "rank": 4,
                                   "framing": [0, 0, 0, 2], "shift": [0] * 4})
    with pytest.raises(ValidationError):
        instance_from_description({"type": "A", "rank": 3,
                                   "tau": [[1, 2, 3]],
                                   "framing": [1, 0, 1], "shift": [0, 0, 0]})


def test_inline_instance_adjacent_involution():
    inst = instance_from_description({
        "type": "A", "rank": 4, "tau": [[1, 4], [2, 3]],
        "framing": [1, 0, 0, 1], "shift": [0, 0, 0, 0]})
    assert inst.diagram.t(2) == 3 and inst.mult == (1, 1, 1, 1)
