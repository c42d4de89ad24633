import json
from fractions import Fraction

import pytest

from randlambda.experiments import (
    CSV_FIELDS, DensityRow, ExperimentConfig, emit, make_property, run_density, run_exhaustive,
    wilson_interval,
)
from randlambda.rewrite import Budget
from randlambda.series import ratio
from randlambda.terms import parse_cl, parse_lambda


def test_certified_at_size_one():
    (row,) = run_density(ExperimentConfig("lambda", "sn-certified", (1,), 100, 0))
    assert row.fraction == 1.0 and row.hits == 100


def test_exhaustive_examples():
    r = run_exhaustive("sn-refuted", 5)
    assert r.fraction > 0
    assert run_exhaustive("contains:(I I)", 2, "cl").fraction == Fraction(6, 54)
    with pytest.raises(ValueError):
        run_exhaustive("width-le-2", 0)


def test_cl_density_matches_exact_ratio():
    (row,) = run_density(ExperimentConfig("cl", "contains:I I", (30,), 4000, 9))
    p = float(ratio(parse_cl("I I"), 30))
    sigma = (p * (1 - p) / 4000) ** 0.5
    assert abs(row.fraction - p) <= 3 * sigma


def test_rows_invariants_and_worker_invariance():
    cfg = ExperimentConfig("lambda", "width-le-2", (6, 9), 300, 4)
    rows = run_density(cfg)
    for r in rows:
        assert 0 <= r.hits <= r.samples
        assert r.ci_lo <= r.fraction <= r.ci_hi
    par = run_density(ExperimentConfig("lambda", "width-le-2", (6, 9), 300, 4, workers=3))
    assert rows == par


def test_wilson_edges():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0.0 and 0 < hi < 1
    lo, hi = wilson_interval(10, 10)
    assert 0 < lo < 1 and hi == 1.0


def test_emit_formats():
    assert emit([], "csv") == ",".join(CSV_FIELDS) + "\n"
    row = DensityRow("cl", "contains:I I", 2, 10, 1, 3, 0.3, 0.1, 0.6, 0)
    text = emit([row], "csv")
    assert text.count("\n") == 2
    data = json.loads(emit([row], "json"))
    assert list(data[0]) == list(CSV_FIELDS)
    with pytest.raises(ValueError):
        emit([row], "xml")


def test_property_parsing():
    with pytest.raises(ValueError):
        make_property("nope")
    with pytest.raises(ValueError):
        make_property("width-le-2", "cl")
    with pytest.raises(ValueError):
        ExperimentConfig("lambda", "width-le-2", (0,), 10, 0)
    assert make_property(r"contains:\x. x")(parse_lambda(r"\y. \x. x"))[0]


def test_unknown_warning():
    cfg = ExperimentConfig("lambda", "sn-decided", (40,), 20, 1, budget=Budget(max_steps=0))
    rows = run_density(cfg)
    assert rows[0].unknown_count > 10 and rows[0].warning
