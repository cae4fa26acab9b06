import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from toricmot.cli import parse_input, run, InputError
from toricmot.motser import curve_closed_form
from toricmot.report import ReportDoc, expansion_from_json, rational_from_json
from toricmot.rational import expand

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, tmp_path, command, doc, *flags, name="in.json"):
    path = write(tmp_path, name, doc if isinstance(doc, str) else json.dumps(doc))
    code, out, err = invoke(capsys, command, "--input", path, "--json", "-", *flags)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data, out


def test_compute_curve_matches_closed_form(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "compute", {"d": 1, "gens": [2, 3], "series": "arithmetic", "expand": 10})
    r = rational_from_json(data["series"]["arithmetic"]["raw"])
    assert r == curve_closed_form([2, 3])
    assert rational_from_json(data["series"]["arithmetic"]["irredundant"]) == r
    assert expansion_from_json(data["expansion"]["arithmetic"]) == expand(r, 10)
    assert data["nicaise"]["holds"] is False


def test_compute_surface_report(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "compute", {"lattice_rank": 2, "generators": [[5, 0], [0, 2], [0, 3], [6, 2]]}, "--series", "both")
    assert data["q"] == {"q_Lambda_local": 10, "q_Lambda": 10}
    assert [1, 3] in data["poles"]["B_ar_faces"] and [1, 3] not in data["poles"]["B_ar"]
    assert {"arithmetic", "geometric"} == set(data["series"])
    empty = [(s["j"], s["theta"]) for s in data["strata"] if s["empty"]]
    assert empty == [(1, [[2, 5]]), (2, [[3, 5]]), (3, [[1, 6]])]
    assert len(data["faces"]) == 4


def test_rational_fields_reexpand_to_table(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "compute", {"d": 2, "gens": [[5, 0], [0, 2], [0, 3], [6, 2]]}, "--series", "difference", "--expand", "12")
    for key, entry in data["series"].items():
        table = expansion_from_json(data["expansion"][key])
        assert expand(rational_from_json(entry["raw"]), 12) == table
        assert expand(rational_from_json(entry["irredundant"]), 12) == table


def test_determinism_and_round_trip(capsys, tmp_path):
    doc = {"d": 2, "gens": [[1, 0], [1, 1], [1, 2]], "normal": True}
    _, out1 = report(capsys, tmp_path, "compute", doc, "--expand", "5")
    _, out2 = report(capsys, tmp_path, "compute", doc, "--expand", "5")
    assert out1 == out2
    rd = ReportDoc.from_json(out1)
    assert rd.to_json() == out1
    assert ReportDoc.from_json(rd.to_json()) == rd
    tampered = out1.replace('"holds": true', '"holds": false')
    with pytest.raises(ValueError):
        ReportDoc.from_json(tampered)


def test_global_mode(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "compute", "lattice_rank = 2\ngenerators = [[1, 0], [1, 1], [1, 2]]\nnormal = true\n", "--mode", "global", name="a1.toml")
    g = rational_from_json(data["series"]["global"]["irredundant"])
    assert g.den == ((2, 1),)
    assert g.num.terms() == [(2, 0, 1)]


def test_strata_command(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "strata", {"d": 1, "gens": [8, 18, 20, 21]})
    assert [s["q"] for s in data["strata"]] == [8, 2, 2, 1]
    assert "series" not in data
    data, _ = report(capsys, tmp_path, "strata", {"d": 2, "gens": [[1, 0], [0, 1]]})
    assert all(s["q"] == 1 for s in data["strata"] if not s["empty"])


def test_strata_text_table(capsys, tmp_path):
    path = write(tmp_path, "s.json", json.dumps({"d": 2, "gens": [[5, 0], [0, 2], [0, 3], [6, 2]]}))
    code, out, _ = invoke(capsys, "strata", "--input", path)
    assert code == 0
    assert "j  theta" in out and "(2,5) (3,5)" in out and "empty" in out


def test_oracle_command(capsys, tmp_path):
    data, _ = report(capsys, tmp_path, "oracle", {"d": 1, "gens": [2, 3]}, "--expand", "10")
    assert expansion_from_json(data["expansion"]["arithmetic"]) == expand(curve_closed_form([2, 3]), 10)
    surf = {"d": 2, "gens": [[5, 0], [0, 2], [0, 3], [6, 2]]}
    o, _ = report(capsys, tmp_path, "oracle", surf, "--expand", "25", "--series", "both")
    c, _ = report(capsys, tmp_path, "compute", surf, "--expand", "25", "--series", "both")
    assert o["expansion"] == c["expansion"]


@pytest.mark.parametrize(
    "gens,holds,count",
    [([[1, 0], [1, 1], [1, 2]], True, 4), ([[2], [3]], False, 1), ([[1, 0], [0, 1]], True, None)],
)
def test_check_nicaise(capsys, tmp_path, gens, holds, count):
    data, _ = report(capsys, tmp_path, "check-nicaise", {"d": len(gens[0]), "gens": gens})
    assert data["nicaise"]["holds"] is holds
    if count is not None and holds:
        assert len(data["nicaise"]["certificate"]) == count
    if not holds:
        assert [c["vertex"] for c in data["nicaise"]["certificate"] if c["subset"] is None] == [[2]]


def test_exit_code_validation(capsys, tmp_path):
    path = write(tmp_path, "bad.json", json.dumps({"d": 1, "gens": [2, 4]}))
    code, _, err = invoke(capsys, "compute", "--input", path)
    assert code == 2 and "index 2" in err
    path = write(tmp_path, "nm.json", json.dumps({"d": 1, "gens": [2, 3, 5]}))
    code, _, err = invoke(capsys, "compute", "--input", path)
    assert code == 2 and "[5] = [2] + [3]" in err


def test_line_column_diagnostics(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"d": 2,\n "gens": [[1, 0],\n   [1, "x"]]}')
    code, _, err = invoke(capsys, "compute", "--input", path)
    assert code == 2 and "bad.json:3:4:" in err
    path = write(tmp_path, "syn.json", '{"d": 2,\n "gens": [[1,0],, ]}')
    code, _, err = invoke(capsys, "compute", "--input", path)
    assert code == 2 and "syn.json:2:17:" in err
    path = write(tmp_path, "len.toml", "d = 2\ngens = [\n  [1, 0],\n  [1, 1, 1],\n]\n")
    code, _, err = invoke(capsys, "compute", "--input", path)
    assert code == 2 and "len.toml:4:3:" in err


def test_parse_input_rejects_unknown_and_bools():
    with pytest.raises(InputError):
        parse_input('{"d": 1, "gens": [2, 3], "colour": 1}')
    with pytest.raises(InputError):
        parse_input('{"d": 1, "gens": [true, 3]}')


def test_exit_code_flags(capsys, tmp_path):
    path = write(tmp_path, "c.json", json.dumps({"d": 2, "gens": [[5, 0], [0, 2], [0, 3], [6, 2]]}))
    assert invoke(capsys, "compute", "--input", path, "--mode", "global")[0] == 4
    assert invoke(capsys, "oracle", "--input", path)[0] == 4
    assert invoke(capsys, "compute", "--input", path, "--series", "nonsense")[0] == 4
    assert invoke(capsys, "compute", "--input", path, "--guard", "0")[0] == 4
    code, _, err = invoke(capsys, "compute", "--input", path, "--normal")
    assert code == 2 and "not saturated" in err


def test_missing_file(capsys, tmp_path):
    assert invoke(capsys, "compute", "--input", str(tmp_path / "nope.json"))[0] == 2


def test_exit_code_certification(capsys, tmp_path, monkeypatch):
    from toricmot import report as rep
    from toricmot.motser import CertificationError

    def boom(*a, **k):
        raise CertificationError("guard window nonzero")

    monkeypatch.setattr(rep, "par_local", boom)
    path = write(tmp_path, "c.json", json.dumps({"d": 1, "gens": [2, 3]}))
    assert invoke(capsys, "compute", "--input", path)[0] == 3


def test_json_file_output_and_console_script(tmp_path):
    path = write(tmp_path, "c.json", json.dumps({"d": 1, "gens": [2, 3]}))
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "toricmot.cli", "compute", "--input", path, "--json", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert "irredundant" in proc.stdout
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)
