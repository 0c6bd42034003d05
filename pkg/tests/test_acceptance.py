"""The nine acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one line that is printed in the terminal summary as
``criterion N: PASS|FAIL  detail``.
"""
import json
import math
import time

import numpy as np
import pytest

from srbtimes import cli, properties
from srbtimes.classify import (classify_point, ensemble_run, reference_measure,
                               srb_candidate_measure)
from srbtimes.config import config_from_dict
from srbtimes.dynsys import make_system
from srbtimes.entropy import GridPartition, decay_slope, mean_volume_decay
from srbtimes.measures import weak_star_distance
from srbtimes.seeding import seed_points

pytestmark = pytest.mark.slow

LOG_CAT = math.log((3 + math.sqrt(5)) / 2)
LOG_LIN = math.log(2 + math.sqrt(3))
EPS = 0.01


def run_suites(plan):
    """``{suite: failure count}`` for ``plan = [(suite, cases), ...]`` and the elapsed time."""
    start = time.perf_counter()
    counts = {name: len(properties.run_suite(name, cases)) for name, cases in plan}
    return counts, time.perf_counter() - start


def test_c1_timeset_oracle_equivalence(criterion):
    report = criterion(1)
    size = properties.exhaustive_size()
    counts, elapsed = run_suites([("timesets-exhaustive", size), ("timesets-oracle", 1000)])
    ok = size >= 100_000 and sum(counts.values()) == 0 and elapsed <= 120
    report(ok, f"{size} enumerated + 1000 random sequences, failures {counts}, {elapsed:.0f}s")
    assert ok


def test_c2_inequality_suites(criterion):
    report = criterion(2)
    plan = [(name, 1000) for name in ("chain-dilate", "angle", "pliss", "nesting",
                                      "component-sums")]
    counts, elapsed = run_suites(plan)
    ok = sum(counts.values()) == 0
    report(ok, f"1000 cases each, violations {counts}, {elapsed:.0f}s")
    assert ok


def test_c3_misiurewicz_bounds(criterion):
    report = criterion(3)
    counts, elapsed = run_suites([("misiurewicz-fixed", 500), ("misiurewicz-setvalued", 500)])
    ok = sum(counts.values()) == 0 and elapsed <= 120
    report(ok, f"500 instances each, violations {counts}, {elapsed:.0f}s")
    assert ok


def test_c4_metric_and_defect(criterion):
    report = criterion(4)
    counts, elapsed = run_suites([("metric", 1000), ("defect", 100)])
    ok = sum(counts.values()) == 0
    report(ok, f"1000 triples, 100 seeds x 4 systems x n in {{1e3, 1e4}}, "
               f"failures {counts}, {elapsed:.0f}s")
    assert ok


def test_c5_cat2_volume_decay(criterion):
    report = criterion(5)
    start = time.perf_counter()
    system = make_system("cat2")
    _, pts = seed_points(0, 32, 2)
    curve = mean_volume_decay(system, pts, 20, GridPartition(2, 4))
    slope = decay_slope(curve, 5, 20)
    elapsed = time.perf_counter() - start
    error = abs(slope - LOG_CAT) / LOG_CAT
    ok = error <= 0.05 and elapsed <= 30
    report(ok, f"slope {slope:.5f} vs {LOG_CAT:.5f} (rel. error {error:.2%}), {elapsed:.1f}s")
    assert ok


def ensemble(system, **extra):
    cfg = config_from_dict({"system": system, "seeds": 100, "n": 100_000, "burn_in": 1000,
                            **extra})
    start = time.perf_counter()
    records = ensemble_run(cfg)
    return records, time.perf_counter() - start


def test_c6_catrot(criterion):
    report = criterion(6)
    records, elapsed = ensemble("catrot")
    center = max(abs(r.exponents[1]) for r in records)
    beta_zero = all(r.beta_hat[1] == 0.0 and np.all(r.beta[1].table == 0) for r in records)
    close = sum(r.distances["empirical"] <= 0.02 for r in records)
    ok = center <= 1e-12 and beta_zero and close >= 95 and elapsed <= 300
    report(ok, f"max |center exponent| {center:.1e}, beta_1 identically 0: {beta_zero}, "
               f"{close}/100 within 0.02 of Haar, {elapsed:.0f}s")
    assert ok


def test_c7_catns(criterion):
    report = criterion(7)
    start = time.perf_counter()
    records, _ = ensemble("catns", params={"eps": EPS})
    target = math.log(1 - 2 * math.pi * EPS)
    center = np.array([r.exponents[1] for r in records])
    center_ok = bool(np.all(np.abs(center - target) <= 0.1 * abs(target)))
    basin = sum(str(r.label) == "HyperbolicBasin(0)" for r in records)
    near = sum(r.distances["candidate"] <= 0.05 for r in records)

    # a seed on the repelling circle theta = 0
    system = make_system("catns", {"eps": EPS})
    x0 = np.array([0.3, 0.7, 0.0])
    control = classify_point(system, x0, n=100_000, burn_in=1000)
    far = weak_star_distance(srb_candidate_measure(system, x0, 1, n=100_000),
                             reference_measure(system))
    repelling = math.log(1 + 2 * math.pi * EPS)
    control_ok = (control.exponents[1] > 0
                  and abs(control.exponents[1] - repelling) <= 0.1 * repelling
                  and control.alpha_hat[1] >= 0.99 and far >= 0.1)
    elapsed = time.perf_counter() - start
    ok = center_ok and basin >= 95 and near >= 95 and control_ok and elapsed <= 600
    report(ok, f"center exponents in [{center.min():.5f}, {center.max():.5f}] vs {target:.5f}, "
               f"{basin}/100 HyperbolicBasin(0), {near}/100 candidates within 0.05; "
               f"control exponent {control.exponents[1]:.4f}, "
               f"alpha_1 {control.alpha_hat[1]:.4f}, distance {far:.3f}; {elapsed:.0f}s")
    assert ok


def test_c8_lin4(criterion):
    report = criterion(8)
    records, elapsed = ensemble("lin4")
    expected = np.array([LOG_LIN, LOG_CAT, -LOG_CAT, -LOG_LIN])
    worst = max(float(np.max(np.abs(np.array(r.exponents) - expected))) for r in records)
    basin = sum(str(r.label) == "HyperbolicBasin(1)" for r in records)
    near = sum(r.distances["candidate"] <= 0.05 for r in records)
    ok = worst <= 1e-9 and basin == 100 and near == 100 and elapsed <= 300
    report(ok, f"max exponent error {worst:.1e}, {basin}/100 HyperbolicBasin(1), "
               f"{near}/100 candidates within 0.05 of Haar, {elapsed:.0f}s")
    assert ok


def test_c9_determinism(criterion, tmp_path):
    report = criterion(9)
    raw = {"system": "catns", "seeds": 4, "n": 5000, "burn_in": 100, "master_seed": 2024,
           "entropy": {"segments": 8, "sample_size": 16, "bound_cases": 2}}
    config = tmp_path / "config.json"
    config.write_text(json.dumps(dict(raw, system="cat2")))
    config3 = tmp_path / "config3.json"
    config3.write_text(json.dumps(raw))
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        out.mkdir()
        codes = (cli.main(["classify", str(config3), "--out", str(out)]),
                 cli.main(["entropy", str(config), "--out", str(out)]))
        assert codes == (0, 0)
        outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    same = outputs[0] == outputs[1]
    ok = same and len(outputs[0]) == 7
    report(ok, f"{len(outputs[0])} files, byte-identical: {same}")
    assert ok
