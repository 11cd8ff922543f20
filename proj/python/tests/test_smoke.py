import math

import pytest

import ikka


def test_yaw_command_saturates():
    assert ikka.yaw_command(1.0) == pytest.approx(1.2)
    assert ikka.yaw_command(0.01) == 0.0
    assert ikka.yaw_command(0.1, w=0.5) == pytest.approx(0.1)
    assert ikka.stability_kT() == (pytest.approx(0.125), True)


def test_ring_has_one_loop():
    ring = [(math.cos(2 * math.pi * i / 8), math.sin(2 * math.pi * i / 8)) for i in range(8)]
    pd = ikka.rips_pd1(ring, 3.0)
    assert len(pd) == 1
    birth, death = pd[0]
    assert death > birth
    assert ikka.total_persistence(pd) == pytest.approx(death - birth)
    assert ikka.bottleneck_distance(pd, pd) == 0.0


def test_constant_window_has_no_persistence():
    frames = [(0.05 * i, 0.03) for i in range(30)]
    assert ikka.persistence_term(frames, 0.3, 0.02) == 0.0


def test_run_scenario_and_analyze():
    rows, metrics = ikka.run_scenario("hybrid_ikka", "occlusion", seed=4, duration_s=8.0, group="occlusion")
    assert len(rows) == 160
    assert all(abs(r["tau"]) <= 1.2 for r in rows)
    assert any(r["occluded"] for r in rows)
    again, _ = ikka.run_scenario("hybrid_ikka", "occlusion", seed=4, duration_s=8.0, group="occlusion")
    assert rows == again

    runs = []
    for tracker in ("hybrid", "hybrid_ikka"):
        for seed in range(4):
            _, m = ikka.run_scenario(tracker, "dim", seed=seed, duration_s=6.0, run_id=f"{tracker}{seed}")
            runs.append(m)
    report = ikka.analyze(runs)
    assert report["runs"] == 8
    assert len(report["statistics"]["pairwise_stress_p95"]) == 1


def test_config_errors_surface():
    cfg = ikka.default_config()
    cfg["controller"]["gain_k"] = -1.0
    with pytest.raises(ValueError):
        ikka.run_scenario("mosse", config=cfg)
    with pytest.raises(ValueError):
        ikka.run_scenario("particle")


def test_stats():
    assert ikka.cliffs_delta([2, 3], [0, 1]) == 1.0
    assert ikka.percentile([1, 2, 3, 4], 50) == 2
    kw = ikka.kruskal_wallis([[1, 2, 3], [4, 5, 6]])
    assert 0.0 < kw["p_value"] < 1.0


def test_counterexample_is_deterministic():
    a = ikka.counterexample(seed=3, n_per_class=40)
    b = ikka.counterexample(seed=3, n_per_class=40)
    assert a == b
    assert a["maverick_distance"] < a["sv_mean_distance"]
    with pytest.raises(ValueError):
        ikka.counterexample(n_per_class=10)
