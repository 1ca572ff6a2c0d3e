"""Audit pipeline: matrix loading, job dispatch and report files"""

import json

import numpy as np
import pandas as pd
import pytest
import yaml

from bebound.audit import AuditPipeline, default_matrix, load_matrix, random_dist

SMALL_MATRIX = {
    "families": [
        {"dist": "point:0", "raw": True, "n": [1]},
        {"dist": "rademacher", "n": [1, 4]},
    ],
    "cdf": {"T": [10], "x_grid": "-1:1:0.5"},
    "tail": {"k": 3, "T": [10], "x_grid": "0.5:1.5:0.5", "modes": ["exact_abs", "surrogate"]},
    "fix": {"random_dists": 3, "atoms": 4, "k": 3, "p": [1, 2], "x": [1.0], "T": 10.0, "seed": 1},
    "nagaev": [{"dist": "rademacher", "n": [1]}],
    "rosenthal": [{"dist": "rademacher", "n_max": 8}],
}


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "matrix.yaml"
    path.write_text(yaml.safe_dump(SMALL_MATRIX))
    return path


def test_missing_matrix_falls_back(tmp_path):
    assert load_matrix(tmp_path / "absent.yaml") == default_matrix()


def test_broken_yaml_falls_back(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("families: [unclosed\n")
    assert load_matrix(path) == default_matrix()


def test_partial_matrix_keeps_defaults(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text(yaml.safe_dump({"rosenthal": [{"dist": "rademacher", "n_max": 2}]}))
    matrix = load_matrix(path)
    assert matrix["rosenthal"] == [{"dist": "rademacher", "n_max": 2}]
    assert matrix["cdf"] == default_matrix()["cdf"]


def test_random_dist_is_seeded():
    first = random_dist(np.random.default_rng(3), 5)
    second = random_dist(np.random.default_rng(3), 5)
    assert np.array_equal(first.xs, second.xs)
    assert first.ps.sum() == pytest.approx(1.0)


def test_jobs_cover_every_family(matrix_file, tmp_path):
    pipeline = AuditPipeline(matrix_path=matrix_file, output_dir=tmp_path / "out", max_workers=2)
    names = [name for name, _ in pipeline.jobs()]
    assert "cdf:point:0" in names
    assert "tail:rademacher*4" in names
    assert names[-3:] == ["fix", "nagaev", "rosenthal"]


def test_run_writes_reports(matrix_file, tmp_path):
    pipeline = AuditPipeline(matrix_path=matrix_file, output_dir=tmp_path / "out", max_workers=2)
    summary = pipeline.run()

    assert summary["violations"] == 0
    assert summary["errors"] == []
    assert summary["total_checks"] == 2 * 3 + 3

    with open(summary["report_path"]) as f:
        report = json.load(f)
    assert report["summary"]["batch_id"] == summary["batch_id"]
    assert all(check["status"] == "pass" for check in report["checks"].values())

    rows = pd.read_csv(report["csv"])
    assert len(rows) == summary["evaluations"]
    assert set(rows["check"]) >= {"cdf", "tail:exact_abs", "tail:surrogate", "tail:dominance", "fix",
                                  "nagaev", "rosenthal"}


def test_errors_are_reported_per_check(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump({**SMALL_MATRIX, "families": [{"dist": "rademacher", "n": [1]}],
                                    "nagaev": [{"dist": "normal", "n": [1]}]}))
    summary = AuditPipeline(matrix_path=path, output_dir=tmp_path / "out", max_workers=1).run()
    assert summary["errors"] == ["nagaev"]
