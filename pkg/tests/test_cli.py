import json

import pytest

from braidkex.braid import BraidContext, Word, canonical_bytes, to_normal_form
from braidkex.cli import main
from braidkex.scenario import (
    ScenarioError,
    attack,
    bundled_scenarios,
    load_scenario,
    parse_scenario,
    reverify,
    simulate,
    transcript_from_json,
    transcript_json,
)

BUNDLED = ["aag-b4", "aag-b4-centralizer-central", "aag-b4-centralizer-fail", "kolee-b4", "kolee-b4-commuting"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.split() == BUNDLED == bundled_scenarios()


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "1 2 1", "-n", "3")
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.splitlines())
    assert lines["delta_power"] == "1" and lines["factors"] == "[]"
    assert lines["hex"] == canonical_bytes(to_normal_form(BraidContext(3), Word((1, 2, 1)))).hex()


def test_normal_form_empty_word(capsys):
    code, out, _ = run(capsys, "normal-form", "", "-n", "3")
    assert code == 0 and "delta_power=0" in out and "factors=[]" in out


@pytest.mark.parametrize("word", ["5", "0", "1 x"])
def test_normal_form_bad_input(capsys, word):
    code, _, err = run(capsys, "normal-form", word, "-n", "3")
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("name", BUNDLED)
def test_simulate_bundled(capsys, name):
    code, out, _ = run(capsys, "simulate", name)
    report = json.loads(out)
    assert code == 0 and report["match"] is True
    assert report["keys"]["alice"] == report["keys"]["bob"]


@pytest.mark.parametrize(
    "name, match, predicted",
    [
        ("kolee-b4", True, None),
        ("kolee-b4-commuting", True, None),
        ("aag-b4", True, True),
        ("aag-b4-centralizer-central", True, True),
        ("aag-b4-centralizer-fail", False, False),
    ],
)
def test_attack_bundled(capsys, name, match, predicted):
    code, out, _ = run(capsys, "attack", name, "--no-timing")
    report = json.loads(out)
    assert code == 0
    assert report["match"] is match
    assert report.get("predicted_success") is predicted
    assert report["elapsed_ms"] == 0


def test_centralizer_fail_candidates_still_verify(capsys):
    _, out, _ = run(capsys, "attack", "aag-b4-centralizer-fail", "--no-timing")
    report = json.loads(out)
    assert report["solution"]["verified"] == {"alice": True, "bob": True}
    assert report["recovered_key"] != report["honest_key"]


def test_attack_output_is_deterministic(capsys):
    outs = {run(capsys, "attack", name, "--no-timing")[1] for name in ["kolee-b4"] * 3}
    assert len(outs) == 1


def test_malformed_json_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "simulate", str(bad))
    assert code == 2 and "malformed JSON" in err
    code, _, _ = run(capsys, "simulate", str(tmp_path / "missing.json"))
    assert code == 2


@pytest.mark.parametrize(
    "patch",
    [
        {"schema": 7},
        {"protocol": "rsa"},
        {"n": 1},
        {"public": {"w": [2], "split": 3}},
        {"public": {"w": [0], "split": 2}},
        {"private": {"alice": [[2, 1]], "bob": [[1, 1]]}},
        {"private": {"alice": {"length": 0}, "bob": [[1, 1]]}},
    ],
)
def test_invalid_scenarios_rejected(capsys, tmp_path, patch):
    obj = {
        "schema": 1,
        "protocol": "kolee",
        "n": 4,
        "public": {"w": [2], "split": 2},
        "private": {"alice": [[1, 1]], "bob": [[1, 1]]},
    }
    obj.update(patch)
    path = tmp_path / "sc.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(ScenarioError):
        load_scenario(path)
    assert run(capsys, "simulate", str(path))[0] == 2


def test_gen_then_simulate(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--n", "5", "--seed", "11")
    assert code == 0
    again = run(capsys, "gen", "--n", "5", "--seed", "11")[1]
    assert out == again
    path = tmp_path / "gen.json"
    path.write_text(out)
    code, out, _ = run(capsys, "simulate", str(path))
    assert code == 0 and json.loads(out)["match"] is True


def test_gen_aag(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--protocol", "aag", "--n", "4", "--seed", "2")
    assert code == 0
    sc = parse_scenario(json.loads(out))
    assert simulate(sc)["match"]


def test_seeded_private_lengths_are_reproducible():
    obj = {
        "schema": 1,
        "protocol": "kolee",
        "n": 5,
        "seed": 42,
        "public": {"w": [2, 3, -1], "split": 2},
        "private": {"alice": {"length": 3}, "bob": {"length": 2}},
    }
    first, second = parse_scenario(obj), parse_scenario(dict(obj))
    assert first.alice == second.alice and len(first.alice) == 3
    assert simulate(first) == simulate(second)


def test_verify_round_trip(capsys, tmp_path):
    for name in ["kolee-b4", "aag-b4"]:
        saved = tmp_path / f"{name}.out.json"
        saved.write_text(run(capsys, "simulate", name)[1])
        code, out, _ = run(capsys, "verify", name, str(saved))
        assert code == 0 and json.loads(out)["match"]


def test_verify_detects_tampering(capsys, tmp_path):
    report = json.loads(run(capsys, "simulate", "kolee-b4")[1])
    report["keys"]["alice"] = "00"
    saved = tmp_path / "tampered.json"
    saved.write_text(json.dumps(report))
    assert run(capsys, "verify", "kolee-b4", str(saved))[0] == 3


def test_transcript_json_round_trip():
    sc = load_scenario("aag-b4")
    report = simulate(sc)
    t = transcript_from_json(report["transcript"])
    assert transcript_json(t) == report["transcript"]
    assert reverify(sc, report["transcript"])["keys"] == report["keys"]


def test_attack_api_matches_cli(capsys):
    sc = load_scenario("kolee-b4")
    report = attack(sc, timing=False)
    assert json.loads(run(capsys, "attack", "kolee-b4", "--no-timing")[1]) == report
    assert report["solution"]["x_plain"] == [-1] and report["solution"]["x_prime"] == [[1, -1]]
