"""End-to-end smoke tests for the Python bindings."""

import math

import pytest

import mrcst


def make_cohort(n_subjects=6, rows=5, features=4):
    """Tiny two-class cohort: class 1 scatters wide, class 0 narrow."""
    segments = []
    for s in range(n_subjects):
        label = s % 2
        spread = 1.0 if label else 0.05
        subject_rows = [
            [0.5 + spread * math.sin(1.0 + s + 3.1 * r + 0.7 * j) for j in range(features)]
            for r in range(rows)
        ]
        segments.append((f"subj_{s}", label, subject_rows))
    return segments


def test_envelope_hand_numbers():
    rows = [[1.0], [2.0], [3.0]]
    mean, median, trimmed, stddev, iqr, mad = mrcst.envelope(rows)
    assert mean == [2.0]
    assert median == [2.0]
    assert trimmed == [1.5]  # retained ranks 1..2
    assert stddev == [1.0]
    assert iqr == [1.0]  # ranks round(0.75)=1 and round(2.25)=2
    assert mad == [pytest.approx(2.0 / 3.0)]
    assert mrcst.envelope(rows, trim="paper")[2] == [1.0]
    assert mrcst.ENVELOPE_ROWS[0] == "mean"


def test_transform_row_counts_and_determinism():
    cohort = make_cohort()
    out = mrcst.transform(cohort, q=2, seed=7)
    assert len(out["ef"]) == 6 * len(cohort)
    assert len(out["es"]) == 6 * 2 * len(cohort)
    assert len(out["et"]) == len(out["es"])
    assert out == mrcst.transform(cohort, q=2, seed=7)
    subject_ids = {s for s, _, _ in out["ef"]}
    assert subject_ids == {f"subj_{i}" for i in range(len(cohort))}


def test_evaluate_report_shape():
    cohort = make_cohort()
    config = {"method": "ef", "q": 2, "runs": 2, "seed": 11}
    report = mrcst.evaluate(cohort, config)
    assert list(report)[:3] == ["config", "method", "classifier"]
    assert report["method"] == "ef"
    assert 0.0 <= report["accuracy_mean"] <= 1.0
    assert len(report["folds"]) == 2 * len(cohort)
    assert report == mrcst.evaluate(cohort, config)
    # The echoed config replays to the same result.
    assert mrcst.evaluate(cohort, report["config"]) == report


def test_evaluate_rejects_unknown_fields():
    with pytest.raises(ValueError, match="config.mystery"):
        mrcst.evaluate(make_cohort(), {"mystery": 1})
    with pytest.raises(ValueError, match="q"):
        mrcst.evaluate(make_cohort(), {"q": 0})


def test_fusion_helpers():
    assert mrcst.fuse((0.3, -0.9, 0.5), (1.0, 0.0, 0.0)) == 0.3
    weights = mrcst.grid_search_weights(
        [(1, (0.9, -0.5, 0.0)), (0, (-0.8, 0.4, 0.0))], step=0.5
    )
    assert sum(weights) == pytest.approx(1.0, abs=1e-12)
    assert mrcst.subject_score([0.2, 0.4]) == pytest.approx(0.3)


def test_kmeans_two_blobs():
    rows = [[0.0], [0.1], [0.2], [10.0], [10.1], [10.2]]
    model = mrcst.kmeans(rows, q=2, seed=3)
    assert sorted(round(c[0]) for c in model["centers"]) == [0, 10]
    low, high = model["assignments"][:3], model["assignments"][3:]
    assert len(set(low)) == 1 and len(set(high)) == 1 and low[0] != high[0]
    assert model["sse"] < 0.1


def test_load_dataset_groups_subjects(tmp_path):
    path = tmp_path / "cohort.csv"
    path.write_text(
        "subject_id,f1,f2,label\n"
        "a,1.0,2.0,1\n"
        "a,1.5,2.5,1\n"
        "b,0.0,0.5,0\n"
        "b,0.1,0.6,0\n"
    )
    segments = mrcst.load_dataset(str(path), "csv")
    assert [(s, lab, len(rows)) for s, lab, rows in segments] == [
        ("a", 1, 2),
        ("b", 0, 2),
    ]
    assert segments[0][2][0] == [1.0, 2.0]
