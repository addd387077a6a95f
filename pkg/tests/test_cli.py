import io
import json
import subprocess
import sys

import pytest

from cubical_sc.cli import InputError, main, parse_condition

from conftest import CORPUS


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def data_rows(text):
    return [line.split("\t") for line in text.splitlines() if line and not line.startswith("#")]


def corpus_file(name):
    return str(CORPUS / f"{name}.scp")


def test_parse_condition():
    assert parse_condition("C:9") == ("C", 9)
    assert parse_condition("C':1/6")[1] * 6 == 1
    assert parse_condition("Cprime:1/4")[0] == "C'"
    for bad in ("C:x", "D:3", "C'", "C':1/0"):
        with pytest.raises(InputError):
            parse_condition(bad)


def test_check_holds_and_fails():
    code, out = run("check", corpus_file("surf2"), "--condition", "C:8")
    assert code == 0 and "HOLDS" in out
    assert "# condition" in out
    code, out = run("check", corpus_file("surf2"), "--condition", "C:9")
    assert code == 1 and "abABcdCD" in out


def test_check_several_conditions():
    code, out = run("check", corpus_file("a8w"), "--condition", "C:7", "--condition", "C':1/6")
    assert code == 1
    rows = data_rows(out)
    cells = {c for r in rows for c in r}
    assert {"HOLDS", "FAILS"} <= cells


def test_input_errors(tmp_path):
    assert run("check", str(tmp_path / "missing.scp"), "--condition", "C:3")[0] == 3
    bad = tmp_path / "bad.scp"
    bad.write_text("gens a\nrel a x\n")
    assert run("check", str(bad), "--condition", "C:3")[0] == 3
    assert run("check", corpus_file("surf2"), "--condition", "nonsense")[0] == 3
    assert run("no-such-command")[0] == 3


def test_pieces_listing():
    code, out = run("pieces", corpus_file("a6w"))
    assert code == 0
    assert "aaaaa" in out
    header, *rows = data_rows(out)
    assert header[:2] == ["kind", "path"]
    assert rows == sorted(rows, key=lambda r: (r[0], -int(r[2]), r[1]))


def test_metric_report():
    code, out = run("metric", corpus_file("surf2"), "--radius", "3")
    assert code == 0
    assert "457" in out


def test_metric_pair():
    code, out = run("metric", corpus_file("surf2"), "--radius", "3", "--from", "1", "--to", "ab")
    assert code == 0
    assert "ab" in out


def test_metric_dot():
    code, out = run("metric", corpus_file("a6w"), "--radius", "3", "--dot")
    assert code == 0
    assert out.startswith("graph") or "graph" in out.splitlines()[0]
    assert "dashed" in out


def test_bigons_free():
    code, out = run("bigons", corpus_file("free"), "--radius", "3")
    assert code == 0
    assert data_rows(out)[-1][2] == "0"


def test_diagram_pipeline(tmp_path):
    code, text = run("diagram", "random", corpus_file("surf2"), "--seed", "3", "--cells", "4")
    assert code == 0
    path = tmp_path / "d.json"
    path.write_text(text[text.index("{"):])
    code, reduced = run("diagram", "reduce", str(path), "--presentation", corpus_file("surf2"), "--mode", "weak")
    assert code == 0
    data = json.loads(reduced)
    assert data["format"] == "scd/1"
    path.write_text(reduced)
    code, out = run("diagram", "classify", str(path), "--presentation", corpus_file("surf2"))
    assert code == 0
    assert "LADDER" in out or "EXPOSED" in out


def test_classify_needs_weak_reduction(tmp_path):
    from cubical_sc.diagrams import WEAK, is_reduced, random_classical_diagram
    from conftest import corpus
    p = corpus("surf2")
    d = next(d for d in (random_classical_diagram(p, s) for s in range(20)) if not is_reduced(d, WEAK))
    path = tmp_path / "d.json"
    path.write_text(d.to_json())
    assert run("diagram", "classify", str(path), "--presentation", corpus_file("surf2"))[0] == 3


def test_sandwich_command(tmp_path):
    from cubical_sc.diagrams import rectangle
    from conftest import corpus
    d, _ = rectangle(corpus("torus_squares"), 3)
    path = tmp_path / "r.json"
    path.write_text(d.to_json())
    code, out = run("diagram", "sandwich", str(path), "--presentation", corpus_file("torus_squares"),
                    "--split", "4")
    assert code == 0


def test_version_and_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cubical_sc.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "scp/1" in proc.stdout and "scd/1" in proc.stdout
