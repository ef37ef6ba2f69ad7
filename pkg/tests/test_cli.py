import csv
import dataclasses
import io
import json

import pytest
from gmpy2 import mpq

import pzf.cli as cli
from pzf.cli import SMALL_GRAPHS, main
from pzf.engine import ept_graph
from pzf.goldens import load_goldens


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_ept_family_text(capsys):
    rc, out, err = run(capsys, "ept", "--family", "paw")
    assert rc == 0
    assert err == ""
    assert "21/8" in out
    assert "min" in out
    assert "{0}" in out  # per-vertex rows


def test_ept_single_vertex_graph(capsys):
    rc, out, _ = run(capsys, "ept", "--family", "k 1")
    assert rc == 0
    lines = [l for l in out.splitlines() if l.startswith("k 1")]
    assert len(lines) == 2  # vertex 0 plus the min row


def test_ept_initial_override(capsys):
    rc, out, _ = run(capsys, "ept", "--family", "path 3",
                     "--initial", "0", "1")
    assert rc == 0
    assert "{0,1}" in out
    assert out.count("path 3") == 1  # no per-vertex or min rows


def test_ept_graph6_source(capsys):
    rc, out, _ = run(capsys, "ept", "--graph6", "Bw")
    assert rc == 0
    assert out.count("Bw") == 4  # three vertices plus the min row


def test_ept_edge_file(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("3 2\n0 1\n1 2\n")
    rc, out, _ = run(capsys, "ept", "--edge-file", str(f))
    assert rc == 0
    assert "min" in out


def test_ept_graph6_file_multi(capsys, tmp_path):
    f = tmp_path / "codes.g6"
    f.write_text("Bw\nBg\n")
    rc, out, _ = run(capsys, "ept", "--graph6-file", str(f))
    assert rc == 0
    assert "Bw" in out and "Bg" in out


def test_matrix_output(capsys):
    rc, out, _ = run(capsys, "matrix", "--family", "cycle 4",
                     "--initial", "0")
    assert rc == 0
    assert "# states of cycle 4" in out
    assert "# transition probabilities" in out
    assert "1/4" in out


def test_matrix_requires_initial():
    with pytest.raises(SystemExit) as exc:
        main(["matrix", "--family", "cycle 4"])
    assert exc.value.code == 2


def test_version():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_exit2_unknown_family(capsys):
    rc, _, err = run(capsys, "ept", "--family", "zzz 3")
    assert rc == 2
    assert "unknown family" in err


def test_exit2_bad_family_arity(capsys):
    rc, _, err = run(capsys, "ept", "--family", "k")
    assert rc == 2
    assert "argument" in err


def test_exit2_two_sources(capsys):
    rc, _, err = run(capsys, "ept", "--family", "k 3", "--graph6", "Bw")
    assert rc == 2
    assert "exactly one" in err


def test_exit2_no_source(capsys):
    rc, _, err = run(capsys, "ept")
    assert rc == 2
    assert "exactly one" in err


def test_exit2_table_over_cap(capsys):
    rc, _, err = run(capsys, "table", "kn", "--max", "60")
    assert rc == 2
    assert "50" in err


def test_exit2_spectrum_non_k(capsys):
    rc, _, err = run(capsys, "family", "kmn 2 3", "--spectrum")
    assert rc == 2
    assert "spectrum" in err


def test_exit2_bad_digits(capsys):
    rc, _, err = run(capsys, "ept", "--family", "k 3", "--digits", "0")
    assert rc == 2


def test_exit2_bad_trials(capsys):
    rc, _, err = run(capsys, "simulate", "--family", "k 3", "--trials", "0")
    assert rc == 2


def test_exit2_bad_state_cap(capsys):
    rc, _, err = run(capsys, "ept", "--family", "k 3", "--state-cap", "0")
    assert rc == 2


def test_exit3_state_cap(capsys):
    rc, _, err = run(capsys, "ept", "--family", "k 12", "--state-cap", "100")
    assert rc == 3
    assert "cap" in err


def test_env_state_cap(capsys, monkeypatch):
    monkeypatch.setenv("PZF_STATE_CAP", "100")
    rc, _, _ = run(capsys, "ept", "--family", "k 12")
    assert rc == 3
    monkeypatch.setenv("PZF_STATE_CAP", "abc")
    rc, _, err = run(capsys, "ept", "--family", "k 12")
    assert rc == 2
    assert "PZF_STATE_CAP" in err


def test_flag_overrides_env(capsys, monkeypatch):
    monkeypatch.setenv("PZF_STATE_CAP", "100")
    rc, _, _ = run(capsys, "ept", "--family", "k 12",
                   "--state-cap", "100000")
    assert rc == 0


def test_table_small_assert_passes(capsys):
    rc, out, err = run(capsys, "table", "small", "--assert")
    assert rc == 0
    assert err == ""
    assert "2911/1140" in out


def test_table_kn_assert_passes(capsys):
    rc, out, _ = run(capsys, "table", "kn", "--max", "10", "--assert")
    assert rc == 0
    assert "3.57753" in out


def test_table_kmn_values(capsys):
    rc, out, _ = run(capsys, "table", "kmn", "--max", "4", "--assert")
    assert rc == 0
    assert "3.29626" in out and "3.29506" in out


def test_table_sun_default_digits(capsys):
    rc, out, _ = run(capsys, "table", "sun", "--max", "7", "--assert")
    assert rc == 0
    assert "6.14172265492263" in out
    assert "0.695575654706038" in out


def test_exit4_assert_mismatch(capsys, monkeypatch):
    gold = load_goldens()
    rows = list(gold["small"])
    rows[0] = dataclasses.replace(rows[0], value=rows[0].value + 1)
    fake = dict(gold)
    fake["small"] = rows
    monkeypatch.setattr(cli, "load_goldens", lambda: fake)
    rc, out, err = run(capsys, "table", "small", "--assert")
    assert rc == 4
    assert "mismatch" in err
    assert out  # the table still prints before the verdict


def test_csv_round_trip(capsys):
    rc, out, _ = run(capsys, "table", "small", "--format", "csv")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["graph", "ept", "decimal", "digits"]
    exact = {name: ept_graph(g)[0] for name, g in SMALL_GRAPHS}
    assert len(rows) == len(exact) + 1
    for name, ept_text, _, _ in rows[1:]:
        assert mpq(ept_text) == exact[name]


def test_csv_multi_block_sections(capsys):
    rc, out, _ = run(capsys, "matrix", "--family", "path 3",
                     "--initial", "0", "--format", "csv")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "section"
    assert {r[0] for r in rows[1:]} == {"states of path 3",
                                        "transition probabilities"}


def test_json_shape(capsys):
    rc, out, _ = run(capsys, "ept", "--family", "k 3", "--format", "json")
    assert rc == 0
    data = json.loads(out)
    assert data["command"] == "ept"
    rows = data["sections"][0]["rows"]
    assert rows[-1]["initial"] == "min"
    assert rows[-1]["argmin"] == "{0,1,2}"
    assert rows[0]["ept"] == "2"
    assert rows[0]["argmin"] is None


def test_out_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "out.csv"
    rc, _, _ = run(capsys, "table", "small", "--format", "csv",
                   "--out", str(target))
    assert rc == 0
    rc, out, _ = run(capsys, "table", "small", "--format", "csv")
    assert target.read_text() == out


def test_simulate_deterministic(capsys):
    args = ("simulate", "--family", "path 3", "--trials", "200",
            "--seed", "7")
    rc1, out1, _ = run(capsys, *args)
    rc2, out2, _ = run(capsys, *args)
    assert rc1 == rc2 == 0
    assert out1 == out2
    assert "z" in out1.splitlines()[1]


def test_simulate_closed_form_fallback(capsys):
    rc, out, _ = run(capsys, "simulate", "--family", "k 12",
                     "--state-cap", "100", "--trials", "50")
    assert rc == 0
    assert "3.71241" in out  # exact column from the closed form


def test_family_spectrum(capsys):
    rc, out, _ = run(capsys, "family", "k 5", "--spectrum")
    assert rc == 0
    assert "# diagonal spectrum" in out
    assert "81/256" in out


def test_family_kmn_min(capsys):
    rc, out, _ = run(capsys, "family", "kmn 1 3")
    assert rc == 0
    assert "21/8" in out
    assert "min" in out


def test_family_sun_small_fallback(capsys):
    rc, out, _ = run(capsys, "family", "sun 4")
    assert rc == 0
    assert "min" in out


def test_family_bad_spec(capsys):
    rc, _, err = run(capsys, "family", "k")
    assert rc == 2


def test_bounds_smoke(capsys):
    rc, out, _ = run(capsys, "bounds", "--fit-max", "5")
    assert rc == 0
    assert "FAIL" not in out
    assert "borderline" not in out
    assert "natural log" in out


def test_conjectures_kmn(capsys):
    rc, out, _ = run(capsys, "conjectures", "kmn", "--kmn-max", "6")
    assert rc == 0
    assert "VIOLATION" not in out
    assert "outside hypothesis" in out
    assert "consistent" in out


def test_conjectures_sun_range_check(capsys):
    rc, _, err = run(capsys, "conjectures", "sun", "--sun-max", "4")
    assert rc == 2


def test_add_edge_closed_form(capsys):
    rc, out, _ = run(capsys, "add-edge", "5")
    assert rc == 0
    assert "19/162" in out
    assert "strict increase holds" in out
    assert " NO" not in out  # agree column all yes
    assert " yes" in out


def test_add_edge_small_guard(capsys):
    rc, _, err = run(capsys, "add-edge", "3")
    assert rc == 2
    assert "--allow-small" in err
    rc, out, _ = run(capsys, "add-edge", "3", "--allow-small")
    assert rc == 0
    assert "strict increase holds" in out


def test_census(capsys, tmp_path):
    f = tmp_path / "codes.g6"
    f.write_text("Bw\nBg\nA?\n")
    rc, out, _ = run(capsys, "census", "--graph6-file", str(f))
    assert rc == 0
    assert "connected" in out  # disconnected graph noted, not fatal
    assert "2" in out


def test_census_requires_file():
    with pytest.raises(SystemExit) as exc:
        main(["census"])
    assert exc.value.code == 2
