import json

import pytest

from khtorsion.diagram import parse_word, torus
from khtorsion.homology import AbelianGroup
from khtorsion.les import VIOLATION, critical_pairs, torus_les_instance
from khtorsion.surveyor import (EXIT_OK, EXIT_SKIPPED, EXIT_USAGE, EXIT_VIOLATION, STORE_ENV,
                                ResultStore, canonical, main, parse_k_range, parse_table_csv,
                                record_id, render_table)

TREFOIL_ID = "2a9463f2a35956d384211b2921a465e84fb10cae4de1e5c6190ab4868fa04d62"


@pytest.fixture
def store(tmp_path, monkeypatch):
    path = tmp_path / "store.jsonl"
    monkeypatch.setenv(STORE_ENV, str(path))
    return path


def records(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def test_record_id_is_stable():
    assert record_id(parse_word("2: 1 1 1"), "classical") == TREFOIL_ID
    assert record_id(parse_word("1 1 1"), "classical") == TREFOIL_ID
    assert record_id(parse_word("2: 1 1 1"), "framed") != TREFOIL_ID
    assert record_id(parse_word("2: 1 1 1"), "reduced", 1) != \
        record_id(parse_word("2: 1 1 1"), "reduced", 2)


def test_canonical_serialisation():
    assert canonical({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_compute_trefoil(store, capsys):
    assert main(["compute", "--word", "2: 1 1 1", "--classical"]) == EXIT_OK
    (rec,) = records(store)
    assert rec["id"] == TREFOIL_ID
    assert rec["schema"] == 1
    assert (rec["strands"], rec["writhe"], rec["components"], rec["kind"]) == (2, 3, 1, "classical")
    groups = {(g["i"], g["j"]): AbelianGroup(g["free_rank"], tuple(g["invariant_factors"]))
              for g in rec["groups"]}
    z = AbelianGroup(1)
    assert groups == {(0, 1): z, (0, 3): z, (2, 5): z, (3, 9): z, (3, 7): AbelianGroup(0, (2,))}
    assert [(g["i"], g["j"]) for g in rec["groups"]] == sorted(groups)
    assert rec["groups"][3]["primary"] == [2]
    line = store.read_text().splitlines()[0]
    assert line == canonical(rec)


def test_compute_is_idempotent_and_append_only(store, capsys):
    main(["compute", "--word", "2: 1 1 1"])
    before = store.read_text()
    assert main(["compute", "--word", "2: 1 1 1", "--classical"]) == EXIT_OK
    assert "already stored" in capsys.readouterr().out
    assert store.read_text() == before
    main(["compute", "--word", "2: 1 1 1", "--framed"])
    assert store.read_text().startswith(before)
    assert len(records(store)) == 2


def test_compute_fans_out_kinds(store):
    assert main(["compute", "--torus", "3", "4", "0", "--classical", "--reduced"]) == EXIT_OK
    assert [r["kind"] for r in records(store)] == ["classical", "reduced"]
    assert records(store)[0]["word"] == torus(3, 4).render()


def test_compute_parse_error(store, capsys):
    assert main(["compute", "--word", "2: 0"]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err
    assert not store.exists()


def test_usage_errors(store):
    assert main([]) == EXIT_USAGE
    assert main(["compute"]) == EXIT_USAGE
    assert main(["compute", "--word", "1 1", "--torus", "2", "3", "0"]) == EXIT_USAGE
    assert main(["family", "--torus", "3", "5", "--k", "3..1"]) == EXIT_USAGE


def test_compute_resource_guard(store, capsys):
    assert main(["compute", "--torus", "3", "4", "0", "--max-generators", "100"]) == EXIT_SKIPPED
    assert "skipped" in capsys.readouterr().out


def test_store_flag_overrides_env(store, tmp_path):
    other = tmp_path / "other.jsonl"
    main(["compute", "--word", "1:", "--store", str(other)])
    assert other.exists() and not store.exists()


def test_table_trefoil(store, capsys):
    main(["compute", "--word", "2: 1 1 1"])
    capsys.readouterr()
    assert main(["table", TREFOIL_ID[:8]]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].split("|")[2:-1] == [" 0 ", " 1 ", " 2 ", " 3 "]
    rows = [line.split("|")[1:-1] for line in out[2:]]
    assert [r[0].strip() for r in rows] == ["9", "7", "5", "3", "1"]
    cells = [c.strip() for r in rows for c in r[1:] if c.strip()]
    assert sorted(cells) == ["Z", "Z", "Z", "Z", "Z_2"]


def test_table_unknot_reduced(store, capsys):
    main(["compute", "--word", "1:", "--reduced"])
    rid = records(store)[0]["id"]
    capsys.readouterr()
    main(["table", rid, "--format", "csv"])
    assert capsys.readouterr().out == "reduced j\\i,0\n0,Z\n"


def test_table_unknown_id(store, capsys):
    assert main(["table", "deadbeef"]) == EXIT_USAGE


def test_render_layout():
    rec = {"kind": "classical", "groups": [
        {"i": 0, "j": 0, "free_rank": 2, "invariant_factors": [2, 4]},
        {"i": 2, "j": 2, "free_rank": 0, "invariant_factors": [3]}]}
    md = render_table(rec, "md")
    assert "| 2 |  |  | Z_3 |" in md
    assert "| 0 | Z^2 + Z_2 + Z_4 |  |  |" in md
    kind, groups = parse_table_csv(render_table(rec, "csv"))
    assert kind == "classical"
    assert groups == {(0, 0): AbelianGroup(2, (2, 4)), (2, 2): AbelianGroup(0, (3,))}


def test_csv_roundtrips_through_diff(store, tmp_path, capsys):
    main(["compute", "--torus", "3", "4", "0"])
    rid = records(store)[0]["id"]
    capsys.readouterr()
    main(["table", rid, "--format", "csv"])
    path = tmp_path / "t34.csv"
    path.write_text(capsys.readouterr().out)
    assert main(["diff", rid, str(path), "--strict"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "identical"


def test_diff_self_and_shift(store, capsys):
    main(["compute", "--word", "2: 1 1 1"])
    capsys.readouterr()
    assert main(["diff", TREFOIL_ID, TREFOIL_ID]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "identical"
    assert main(["diff", TREFOIL_ID, TREFOIL_ID, "--shift", "0", "2", "--strict"]) == \
        EXIT_VIOLATION


def test_diff_identification(store, capsys):
    main(["compute", "--torus", "3", "4", "0"])
    main(["compute", "--torus", "3", "5", "-2"])
    a, b = (r["id"] for r in records(store))
    capsys.readouterr()
    assert main(["diff", a, b, "--strict"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "identical"


def test_diff_consecutive_twists_only_critical(store, capsys):
    main(["compute", "--torus", "3", "5", "1"])
    main(["compute", "--torus", "3", "5", "0"])
    a, b = (r["id"] for r in records(store))
    capsys.readouterr()
    main(["diff", a, b, "--shift", "0", "-1"])
    lines = capsys.readouterr().out.strip().splitlines()
    inst = torus_les_instance(3, 5, 1)
    crit = {str(bd) for bd in critical_pairs(inst.w, inst.w_B).pairs}
    assert lines and all(line.split(":")[0] in crit for line in lines)


def test_diff_kind_mismatch(store, capsys):
    main(["compute", "--word", "2: 1 1 1", "--classical", "--framed"])
    a, b = (r["id"] for r in records(store))
    assert main(["diff", a, b]) == EXIT_USAGE


def test_parse_k_range():
    assert parse_k_range("-4..4") == list(range(-4, 5))
    assert parse_k_range("0..0") == [0]


def test_family_cabling_is_skipped(store, capsys):
    assert main(["family", "--cabling", "1", "--k", "0..0"]) == EXIT_SKIPPED
    assert "skipped" in capsys.readouterr().out
    assert not store.exists() or records(store) == []


def test_family_conjecture_small(store, tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(["family", "--torus", "2", "4", "--k", "0..2", "--check-conjecture",
                 "--report", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert [c["status"] for c in data["conjecture"]] == ["pass"] * 3
    assert len(records(store)) == 3


def test_family_torsion_check(store, capsys):
    code = main(["family", "--torus", "4", "5", "--k", "0..1", "--check-torsion", "9,25+k:Z4"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("torsion T^(") == 2 and "fail" not in out


def test_family_torsion_failure_exit_code(store, capsys):
    code = main(["family", "--torus", "2", "3", "--k", "0..0", "--check-torsion", "3,7:Z4"])
    assert code == EXIT_VIOLATION


def test_family_les(store, tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(["family", "--torus", "3", "5", "--k", "-4..4", "--verify-les",
                 "--report", str(report)])
    assert code == EXIT_OK
    assert len(records(store)) == 9
    data = json.loads(report.read_text())
    assert data["violations"] == 0
    assert len(data["les"]) == 8
    assert all(entry["status"] == "pass" and entry["counts"].get(VIOLATION, 0) == 0
               for entry in data["les"])


def test_verify_les_cli(capsys):
    assert main(["verify-les", "--word", "2: 1 1 1", "--at", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "D_A = 2: 1 1" in out and "framed unknot" in out
    assert main(["verify-les", "--word", "2: 1 1 1"]) == EXIT_USAGE
    assert main(["verify-les", "--word", "2: -1", "--at", "1"]) == EXIT_USAGE


def test_selftest(capsys):
    assert main(["selftest"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 7


def test_store_rejects_corrupt_lines(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("{not json}\n")
    with pytest.raises(LookupError):
        list(ResultStore(str(path)).records())
