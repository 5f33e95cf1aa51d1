import math

import pytest

from casimir_plates.checks import CheckResult, green_check, modes_check, second_difference


def test_second_difference_accuracy():
    assert second_difference(math.exp, 0.3, 1e-2) == pytest.approx(math.exp(0.3), rel=1e-9)
    assert second_difference(math.cosh, 1.0, 1e-2) == pytest.approx(math.cosh(1.0), rel=1e-9)


def test_check_result_tracks_worst():
    r = CheckResult("demo", 1e-3)
    r.record(1e-5, {"i": 0})
    r.record(2e-3, {"i": 1})
    r.record(1e-4, {"i": 2})
    assert r.failures == 1 and not r.passed
    assert r.worst == 2e-3 and r.worst_sample == {"i": 1}
    r2 = CheckResult("nan", 1.0)
    r2.record(float("nan"), {"i": 0})
    assert not r2.passed and r2.worst == math.inf


def test_green_check_passes_and_is_deterministic():
    a = green_check(200, 3)
    b = green_check(200, 3)
    assert a.passed
    assert [(r.worst, r.worst_sample) for r in a.results] == [(r.worst, r.worst_sample) for r in b.results]
    assert green_check(50, 4).results[0].worst_sample != a.results[0].worst_sample


def test_green_check_can_fail():
    # an impossible threshold must be reported as a failure, not swallowed
    report = green_check(20, 1, rel=1e-300)
    assert not report.passed


def test_modes_check_passes():
    report = modes_check(200, 5)
    assert report.passed
    assert len(report.results) == 5


def test_modes_check_detects_longitudinal_injection():
    report = modes_check(50, 5, inject_longitudinal=True)
    by_name = {r.name: r for r in report.results}
    assert not by_name["div E == 0 (finite differences)"].passed
    assert not by_name["sigma_zz assembled == closed"].passed
    # analytic divergence still agrees with finite differences
    assert by_name["div E analytic == finite differences"].passed
    assert not report.passed


def test_sample_count_validated():
    with pytest.raises(ValueError):
        green_check(0, 1)
    with pytest.raises(ValueError):
        modes_check(0, 1)
