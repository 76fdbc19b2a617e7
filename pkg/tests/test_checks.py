"""Verification records: invariants, digests, and passing suite builders."""

import math

import pytest

from chball.checks import (
    SUITES,
    VerificationRecord,
    geometry_records,
    inequalities_records,
    make_record,
    _digest,
)
from chball.integrate import McConfig

FAST_CFG = McConfig(seed=42, sphere_samples=2048)


def test_record_invariant_rejects_inconsistent_flag():
    with pytest.raises(ValueError):
        VerificationRecord(
            check_id="x",
            claim="c",
            inputs_digest="d",
            margin=-1.0,
            tolerance=0.5,
            passed=True,
            runtime=0.0,
        )
    with pytest.raises(ValueError):
        VerificationRecord(
            check_id="x",
            claim="c",
            inputs_digest="d",
            margin=0.2,
            tolerance=0.5,
            passed=False,
            runtime=0.0,
        )


def test_record_invariant_rejects_bad_numbers():
    with pytest.raises(ValueError):
        make_record("x", "c", {}, math.nan, 0.0)
    with pytest.raises(ValueError):
        make_record("x", "c", {}, 0.0, -1e-3)


def test_make_record_boundary_is_inclusive():
    rec = make_record("x", "c", {}, -0.5, 0.5)
    assert rec.passed
    rec = make_record("x", "c", {}, -0.5 - 1e-12, 0.5)
    assert not rec.passed


def test_digest_is_stable_and_order_insensitive():
    d1 = _digest({"a": 1, "b": [1, 2]})
    d2 = _digest({"b": [1, 2], "a": 1})
    assert d1 == d2
    assert len(d1) == 12
    assert d1 != _digest({"a": 1, "b": [1, 3]})


def test_suite_registry_names():
    assert set(SUITES) == {
        "geometry",
        "norms",
        "superlevel",
        "rearrange",
        "inequalities",
    }
    for builder in SUITES.values():
        assert callable(builder)


def test_geometry_records_pass_at_small_budget():
    records = geometry_records(1, FAST_CFG)
    assert len(records) == 5
    assert all(r.passed for r in records)
    ids = [r.check_id for r in records]
    assert len(set(ids)) == len(ids)
    assert all(r.check_id.startswith("geometry/") for r in records)
    assert all(r.check_id.endswith("/n=1") for r in records)
    assert all(r.runtime >= 0.0 for r in records)
    assert all(len(r.inputs_digest) == 12 for r in records)


def test_inequalities_records_pass_and_cover_regimes():
    records = inequalities_records(2, FAST_CFG)
    assert all(r.passed for r in records)
    names = {r.check_id.split("/")[1] for r in records}
    assert {"sobolev-I", "sobolev-II", "sobolev-III", "sobolev-IV"} <= names
    assert {"isoperimetric-refined", "isoperimetric-model"} <= names
    assert {"hardy-weighted-indicator", "kalaj-ordering"} <= names
    # regime III requires n >= 2, so the n=1 battery must drop exactly it
    names_1 = {r.check_id.split("/")[1] for r in inequalities_records(1, FAST_CFG)}
    assert names - names_1 == {"sobolev-III"}
