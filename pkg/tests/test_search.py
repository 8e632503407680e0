import json

import pytest

from hcolor.certify import Certificate, exact_compare, replay
from hcolor.graphs import e_family, path_family
from hcolor.orbits import structural_orbits_T
from hcolor.search import (
    DOMINANT_CERTIFICATE,
    FINITE_N,
    PARITY_CERTIFICATE,
    SearchSpec,
    SearchSpecError,
    evaluate_cell,
    report,
    report_table,
    scan,
)


def spec(**kw):
    doc = {"x": [1, 1], "y": [1, 1], "z": [1, 1]}
    doc.update(kw)
    return SearchSpec.from_dict(doc)


def test_known_finite_cell_is_a_hit():
    result = scan(spec(x=[18, 18], y=[3, 3], z=[32, 32], n=[3]))
    assert len(result.hits) == 1
    rows = result.hits[0].evidence["counts"]
    assert rows[0]["count_a"] == "81558090" and rows[0]["count_b"] == "81548856"
    assert result.hits[0].margin == 9234


def test_odd_parity_cell_is_a_hit():
    result = scan(spec(x=[7, 7], y=[1, 1], z=[9, 9], mode=PARITY_CERTIFICATE, parity="odd"))
    assert len(result.hits) == 1
    cert = Certificate.from_dict(result.hits[0].evidence["certificate"])
    assert replay(cert)
    assert result.hits[0].margin == cert.a_lower - cert.b_upper


def test_looped_dominant_cell_is_a_hit():
    s = spec(x=[400, 400], y=[3, 3], z=[800, 800], looped=[True], mode=DOMINANT_CERTIFICATE)
    result = scan(s)
    assert [h.cell for h in result.hits] == [(400, 3, 800, True)]
    assert replay(result.hits[0].evidence["certificate"])


def test_tiny_cell_by_exact_counts():
    result = scan(spec(n=[3]))
    row = exact_compare(path_family(), e_family(), structural_orbits_T(1, 1, 1), [3])[0]
    assert (len(result.hits) == 1) == (row.difference > 0)
    assert result.cells_scanned == 1


def test_screening_skips_cells():
    s = spec(x=[7, 7], y=[1, 1], z=[9, 9], mode=PARITY_CERTIFICATE, screen_n=[3])
    assert evaluate_cell(s, (7, 1, 9, False)) is None


def test_empty_report():
    result = scan(spec(n=[1]))
    summary = report(result)
    assert summary["hits"] == [] and summary["cells_scanned"] == 1
    assert "hits: 0" in report_table(summary)


def test_one_hit_margin_row():
    summary = report(scan(spec(x=[18, 18], y=[3, 3], z=[32, 32], n=[3])))
    assert summary["hits"][0]["margin"] == "9234/1"
    assert "9234" in report_table(summary)


def test_determinism_across_workers():
    s = spec(x=[1, 6], y=[1, 6], z=[1, 6], n=[3, 5], looped=[False, True])
    one = json.dumps(report(scan(s, workers=1)))
    many = json.dumps(report(scan(s, workers=4)))
    assert one == many


def test_hits_are_lexicographic_and_recount():
    s = spec(x=[10, 20, 2], y=[1, 3], z=[20, 40, 4], n=[3])
    result = scan(s, workers=3)
    cells = [h.cell for h in result.hits]
    assert cells and cells == sorted(cells)
    for h in result.hits:
        x, y, z, looped = h.cell
        rows = exact_compare(path_family(), e_family(), structural_orbits_T(x, y, z, looped), [3])
        assert [r.to_dict() for r in rows] == h.evidence["counts"]


def test_partial_results_on_timeout():
    s = spec(x=[1, 30], y=[1, 3], z=[1, 30], n=[3, 5, 7])
    result = scan(s, workers=1, max_seconds=0)
    assert not result.complete
    assert result.cells_scanned < result.cells_total
    summary = report(result)
    assert summary["complete"] is False
    assert "stopped early" in report_table(summary)


def test_partial_results_parallel():
    s = spec(x=[1, 40], y=[1, 4], z=[1, 40], mode=FINITE_N, n=[3, 5, 7, 9])
    result = scan(s, workers=2, max_seconds=0.05)
    done = result.cells_scanned
    expected = s.cells()[done - 1] if done else None
    assert result.completed_through == expected
    assert [h.cell for h in result.hits] == sorted(h.cell for h in result.hits)


@pytest.mark.parametrize(
    "doc",
    [
        {"x": [3, 1], "y": [1, 1], "z": [1, 1]},
        {"x": [0, 2], "y": [1, 1], "z": [1, 1]},
        {"x": [1, 2, 0], "y": [1, 1], "z": [1, 1]},
        {"x": [1, 2], "y": [1, 1]},
        {"x": [1, 2], "y": [1, 1], "z": [1, 1], "mode": "bogus"},
        {"x": [1, 2], "y": [1, 1], "z": [1, 1], "n": []},
        {"x": [1, 2], "y": [1, 1], "z": [1, 1], "width": "0"},
    ],
)
def test_bad_specs(doc):
    with pytest.raises(SearchSpecError):
        SearchSpec.from_dict(doc)


def test_spec_text_errors():
    with pytest.raises(SearchSpecError):
        SearchSpec.loads("{")
    with pytest.raises(SearchSpecError):
        SearchSpec.loads("[1, 2]")
