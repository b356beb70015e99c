import json

from synthdg.errors import RelationViolated
from synthdg.report import EXIT_LAW_FAILURE, EXIT_OK, Report, derive_seed, law, render


def test_witness_only_for_failures():
    assert law("a", "anchor", "instance", True, x=1).witness is None
    assert law("a", "anchor", "instance", False, x=1).witness == {"x": "1"}


def test_entries_are_ordered_by_id():
    report = Report("suite", 1)
    report.extend([law("b", "x", "", True), law("a", "x", "", False, error=RelationViolated("X^2"))])
    data = json.loads(report.to_json())
    assert [e["id"] for e in data["entries"]] == ["a", "b"]
    assert data["entries"][0]["witness"]["error"].startswith("Relation [X^2]")
    assert (data["passed"], data["failed"]) == (1, 1)
    assert report.exit_code == EXIT_LAW_FAILURE


def test_text_rendering():
    report = Report("suite", 3)
    report.extend([law("a", "x", "one", True)])
    assert render(report, as_json=False) == "suite: 1 passed, 0 failed (seed 3)"
    assert render(report, as_json=False, verbose=True).startswith("PASS a [x] one")
    assert report.exit_code == EXIT_OK


def test_derived_seeds():
    assert derive_seed(42, "algebra") == derive_seed(42, "algebra")
    assert derive_seed(42, "algebra") != derive_seed(42, "tensor")
    assert derive_seed(42, "algebra") != derive_seed(43, "algebra")
