import json
import shutil

import pytest

from cxxrefactor.detectors import RefactoringType
from cxxrefactor.errors import HarnessError
from cxxrefactor.evaluation import TABLE_ROWS, bundled_corpus, load_corpus, run_eval

from conftest import DATA


def test_bundled_corpus_has_one_fixture_per_row():
    manifests = load_corpus(bundled_corpus())
    assert len(manifests) == 16
    expected_types = sorted(m.expected[0][0] for m in manifests)
    assert expected_types == sorted(t.value for t in TABLE_ROWS)
    assert all(len(m.expected) == 1 for m in manifests)


def test_bundled_corpus_scores():
    result = run_eval()
    assert result.precision == 1.0 and result.recall == 1.0 and result.f1 == 1.0
    assert all(f.passed for f in result.fixtures)
    rows = result.per_type()
    assert [r.type for r in rows] == [t.value for t in TABLE_ROWS]
    assert all((r.tp, r.fp, r.fn) == (1, 0, 0) for r in rows)


def test_empty_corpus_warns(tmp_path):
    with pytest.warns(RuntimeWarning):
        result = run_eval(tmp_path)
    assert result.fixtures == []
    assert result.precision is None and result.recall is None and result.f1 is None
    assert result.warnings
    assert "n/a" in result.to_text()


def test_negative_control_is_flagged():
    result = run_eval(DATA / "negative_corpus")
    (fixture,) = result.fixtures
    assert not fixture.passed
    assert fixture.recall == 0.0
    assert result.recall < 1.0
    assert "wrong_type" in result.to_text()


def test_missing_corpus_directory(tmp_path):
    with pytest.raises(HarnessError):
        run_eval(tmp_path / "absent")


@pytest.mark.parametrize("manifest", [
    "{",
    "[]",
    '{"id": "x", "before": "before.cpp", "after": "after.cpp"}',
    '{"id": "x", "before": "before.cpp", "after": "after.cpp", '
    '"expected": [{"type": "Teleport", "detail": {}}]}',
    '{"id": "x", "before": "nope.cpp", "after": "after.cpp", "expected": []}',
])
def test_invalid_manifest_names_fixture(tmp_path, manifest):
    fixture = tmp_path / "broken_one"
    shutil.copytree(bundled_corpus() / "rename_method", fixture)
    (fixture / "manifest.json").write_text(manifest)
    with pytest.raises(HarnessError) as info:
        run_eval(tmp_path)
    assert info.value.fixtures == ["broken_one"]


def test_unparseable_fixture_is_a_harness_error(tmp_path):
    fixture = tmp_path / "lambda"
    fixture.mkdir()
    shutil.copy(DATA / "lambda.cpp", fixture / "before.cpp")
    shutil.copy(DATA / "lambda.cpp", fixture / "after.cpp")
    (fixture / "manifest.json").write_text(json.dumps(
        {"id": "lambda", "before": "before.cpp", "after": "after.cpp", "expected": []}))
    with pytest.raises(HarnessError, match="lambda"):
        run_eval(tmp_path)


def test_result_document(tmp_path):
    doc = run_eval().to_dict()
    assert doc["precision"] == 1.0
    assert len(doc["fixtures"]) == 16
    assert {r["type"] for r in doc["perType"]} == {t.value for t in TABLE_ROWS}
    json.dumps(doc)


def test_f1_is_harmonic_mean():
    result = run_eval(DATA / "negative_corpus")
    p, r = result.precision, result.recall
    assert result.f1 == (0.0 if p + r == 0 else 2 * p * r / (p + r))


def test_every_expected_type_is_known():
    known = {t.value for t in RefactoringType}
    for m in load_corpus(bundled_corpus()):
        assert all(t in known for t, _ in m.expected)
