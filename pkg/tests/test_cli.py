import json
import subprocess
import sys

import pytest

from hcolor.certify import Certificate, replay
from hcolor.cli import main
from hcolor.graphs import make_hind, make_T, read_graph, write_graph, write_tree, make_E
from hcolor.orbits import OrbitQuotient


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "tree,target,expected",
    [("path:7", "t:18,3,32", "81558090"), ("e:7", "t:18,3,32", "81548856"), ("path:1", "t:2,2,2", "15")],
)
def test_count_examples(capsys, tree, target, expected):
    code, out, _ = run(capsys, "count", tree, target)
    assert code == 0 and out.strip() == expected


def test_count_both_engines(capsys):
    code, out, _ = run(capsys, "count", "path:7", "t:7,1,9", "--engine", "both")
    assert code == 0 and out.strip() == "106302"


def test_count_structured(capsys):
    code, out, _ = run(capsys, "count", "star:5", "hind", "--format", "structured")
    assert code == 0
    assert json.loads(out)["count"] == "17"


def test_count_prints_full_decimal(capsys):
    code, out, _ = run(capsys, "count", "path:40", "that:400,3,800")
    assert code == 0
    assert out.strip().isdigit() and len(out.strip()) > 40


def test_count_files(capsys, tmp_path):
    tree = tmp_path / "tree.json"
    tree.write_text(write_tree(make_E(8)))
    target = tmp_path / "target.json"
    target.write_text(write_graph(make_T(2, 1, 2, True)))
    code, out, _ = run(capsys, "count", str(tree), str(target), "--engine", "both")
    assert code == 0
    big = tmp_path / "big.json"
    big.write_text(write_graph(make_T(3, 2, 3)))
    code2, out2, _ = run(capsys, "count", str(tree), str(big), "--engine", "both")
    code3, out3, _ = run(capsys, "count", "e:8", "t:3,2,3")
    assert code2 == code3 == 0 and out2 == out3


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "bogus:3", "t:1,1,1"],
        ["count", "path:3", "t:1,1"],
        ["count", "path:0", "t:1,1,1"],
        ["count", "e:5", "t:1,1,1"],
        ["count", "path:3", "t:0,1,1"],
        ["count", "path:3", "/no/such/file.json"],
        ["certify", "odd", "hind"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_usage_exit(capsys):
    with pytest.raises(SystemExit) as info:
        main(["count"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["certify", "dominant", "that:1,1,1", "--width", "0"])
    assert info.value.code == 2


def test_bad_graph_document(capsys, tmp_path):
    doc = tmp_path / "dup.json"
    doc.write_text('{"vertices": 2, "edges": [[0,1],[1,0]], "loops": []}')
    code, _, err = run(capsys, "orbits", str(doc))
    assert code == 2 and "multi-edge" in err


def test_orbits_t(capsys):
    code, out, _ = run(capsys, "orbits", "t:7,1,9", "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert doc["sizes"] == [1, 7, 7, 63]
    assert doc["matrix"] == [[0, 7, 0, 0], [1, 0, 1, 0], [0, 1, 0, 9], [0, 0, 1, 0]]
    assert OrbitQuotient.from_dict(doc).k == 4


def test_orbits_looped_and_hind(capsys, tmp_path):
    code, out, _ = run(capsys, "orbits", "that:400,3,800", "--format", "structured")
    assert json.loads(out)["matrix"][0][0] == 1
    doc = tmp_path / "hind.json"
    doc.write_text(write_graph(make_hind()))
    code, out, _ = run(capsys, "orbits", str(doc), "--format", "structured")
    assert code == 0 and json.loads(out)["classes"] == [[0], [1]]
    code, out, _ = run(capsys, "orbits", "t:7,1,9")
    assert "sizes: [1, 7, 7, 63]" in out


def test_orbits_size_limit(capsys):
    code, _, err = run(capsys, "orbits", "k:20")
    assert code == 2 and "verify_equitable" in err


def test_certify_odd(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "odd", "t:7,1,9", "--out", str(tmp_path))
    assert code == 0
    assert "odd n >= " in out
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    cert = Certificate.loads(files[0].read_text())
    assert replay(cert)
    assert f">= {cert.threshold_n}" in out
    code, out, _ = run(capsys, "replay", str(files[0]))
    assert code == 0 and out.strip() == "pass"


def test_certify_even_reversed(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "even", "t:7,1,9", "--out", str(tmp_path))
    assert code == 0 and "reversed" in out


def test_certify_dominant(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "dominant", "that:400,3,800", "--out", str(tmp_path), "--format", "structured")
    assert code == 0
    assert json.loads(out)["conclusion"] == "A_exceeds_B_eventually"


def test_certify_structure_error(capsys, tmp_path):
    code, _, err = run(capsys, "certify", "dominant", "t:7,1,9", "--out", str(tmp_path))
    assert code == 3 and "negatives of each other" in err
    code, _, err = run(capsys, "certify", "odd", "that:7,1,9", "--out", str(tmp_path))
    assert code == 3


def test_certify_inconclusive_exit(capsys, tmp_path, monkeypatch):
    import hcolor.cli as cli
    from hcolor.certify import INCONCLUSIVE, certify_parity

    def stub(*args, **kw):
        cert = certify_parity(7, 1, 9, "odd")
        cert.conclusion = INCONCLUSIVE
        return cert

    monkeypatch.setattr(cli, "certify_parity", stub)
    code, out, _ = run(capsys, "certify", "odd", "t:7,1,9", "--out", str(tmp_path))
    assert code == 4 and "inconclusive" in out


def test_replay_detects_tampering(capsys, tmp_path):
    run(capsys, "certify", "odd", "t:7,1,9", "--out", str(tmp_path))
    path = next(tmp_path.glob("*.json"))
    doc = json.loads(path.read_text())
    doc["threshold_n"] += 2
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 3 and out.strip() == "fail"
    path.write_text("{")
    code, _, _ = run(capsys, "replay", str(path))
    assert code == 2


def test_search_single_cell(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"x": [18, 18], "y": [3, 3], "z": [32, 32], "n": [3]}))
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "search", str(spec), "--out", str(out_dir))
    assert code == 0 and "hits: 1" in out
    summary = json.loads((out_dir / "summary.json").read_text())
    assert len(summary["hits"]) == 1
    assert len(list((out_dir / "hits").iterdir())) == 1


def test_search_empty_range(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"x": [5, 1], "y": [1, 1], "z": [1, 1]}))
    code, _, err = run(capsys, "search", str(spec))
    assert code == 2


def test_search_worker_determinism(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"x": [1, 5], "y": [1, 5], "z": [1, 5], "n": [3, 5]}))
    outs = []
    for w in ("1", "8"):
        code, out, _ = run(capsys, "search", str(spec), "--workers", w, "--format", "structured")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hcolor", "count", "path:5", "t:7,1,9"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "9366"


def test_graph_documents_from_structured_output(capsys, tmp_path):
    target = tmp_path / "t.json"
    target.write_text(write_graph(make_T(1, 2, 1)))
    assert read_graph(target.read_text()) == make_T(1, 2, 1)
    code, out, _ = run(capsys, "orbits", str(target), "--format", "structured")
    assert code == 0 and json.loads(out)["kind"] == "orbit"
