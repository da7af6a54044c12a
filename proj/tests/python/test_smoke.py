import json
import math

import pytest

import urdiv


def test_marcum_pinned_value():
    assert urdiv.marcum_p(2.0, 1.0, 2.0) == pytest.approx(
        0.36723970262137144, rel=1e-14
    )
    assert math.exp(urdiv.marcum_p_log(2.0, 1.0, 2.0)) == pytest.approx(
        0.36723970262137144, rel=1e-12
    )


def test_channel_spec_mean_and_quantile():
    spec = urdiv.ChannelSpec.uniform(1.0, 64, 1.0)
    assert spec.antennas == 64
    assert spec.k_sum == pytest.approx(64.0)
    assert urdiv.mean_gain(spec) == 128.0

    ray = urdiv.ChannelSpec([0.0], 1.0)
    med = urdiv.gain_quantile(ray, 0.5)
    # quantile solver contract: |ln F - ln p| <= 1e-11 at the returned point
    assert med == pytest.approx(math.log(2.0), rel=2e-11)
    assert urdiv.gain_cdf(ray, med) == pytest.approx(0.5, abs=1e-11)


def test_reliability_metrics():
    ray = urdiv.ChannelSpec([0.0], 1.0)
    assert urdiv.fading_margin(ray, 1e-6) == pytest.approx(
        58.40825243897807, rel=1e-10
    )

    spec = urdiv.ChannelSpec.uniform_db(10.0, 4, 1.0)
    pt = urdiv.local_diversity_at_probability(spec, 1e-6)
    assert pt.probability == pytest.approx(1e-6, rel=1e-9)
    assert pt.normalized == pytest.approx(3.0718, abs=5e-4)

    assert urdiv.dkw_epsilon(10**6, 0.99) == pytest.approx(
        1.6276236307187293e-3, rel=1e-12
    )
    b = urdiv.dkw_bound(10**6, 0.99)
    assert b.samples == 10**6
    assert b.epsilon == urdiv.dkw_epsilon(10**6, 0.99)


def test_sampling_determinism():
    spec = urdiv.ChannelSpec.uniform_db(3.0, 2, 1.0)
    a = urdiv.sample_gains(spec, seed=7, n_samples=4096)
    b = urdiv.sample_gains(spec, seed=7, n_samples=4096, n_streams=4)
    c = urdiv.sample_gains(spec, seed=8, n_samples=4096)
    assert list(a.gains) == list(b.gains)
    assert list(a.gains) != list(c.gains)
    assert len(a) == 4096
    g = a.gains
    assert all(g[i] <= g[i + 1] for i in range(len(g) - 1))


def test_ecdf_and_band():
    e = urdiv.EcdfResult([1.0, 2.0, 4.0])
    assert e.evaluate(0.5) == 0.0
    assert e.evaluate(2.0) == pytest.approx(2.0 / 3.0)
    assert e.evaluate(9.0) == 1.0

    band = urdiv.dkw_band(e, 0.99)
    eps = band.epsilon
    assert band.upper(2.0) == pytest.approx(min(1.0, 2.0 / 3.0 + eps))
    assert band.lower(0.5) == 0.0


def test_phase_invariance():
    spec = urdiv.ChannelSpec.uniform_db(6.0, 2, 1.0)
    rep = urdiv.phase_invariance_check(spec, seed=3, n_samples=20000)
    assert rep.passed
    assert rep.max_abs_deviation <= rep.threshold


def test_dump_round_trip(tmp_path):
    spec = urdiv.ChannelSpec.uniform(0.5, 2, 1.0)
    e = urdiv.sample_gains(spec, seed=11, n_samples=1000)
    path = str(tmp_path / "gains.urdv")
    urdiv.write_gain_dump(path, e)
    back = urdiv.read_gain_dump(path)
    assert list(back.gains) == list(e.gains)


def test_metric_table_golden_lines():
    csv = urdiv.metric_table_csv("nld", rounded=True)
    lines = csv.splitlines()
    assert lines[0] == "k_db,1,2,4,8,16,32,64,128"
    assert lines[1] == "-inf,1.00,1.00,0.99,0.92,0.80,0.65,0.50,0.38"
    assert lines[6] == "20,23.39,19.02,14.68,10.99,8.08,5.86,4.22,3.02"

    margins = urdiv.metric_table_csv("margin", rounded=True).splitlines()
    assert margins[1] == "-inf,58.4,30.7,17.1,10.2,6.5,4.3,2.9,2.0"


def test_curve_csv():
    spec = urdiv.ChannelSpec.uniform_db(6.0, 4, 1.0)
    csv = urdiv.curve_csv("cdf", spec, normalize=True, grid=(-10.0, 0.0, 3))
    lines = csv.splitlines()
    assert lines[0] == "gain_rel_mean_db,cdf"
    assert len(lines) == 4
    plain = urdiv.curve_csv("cdf", spec, grid=(-10.0, 0.0, 3))
    assert plain.splitlines()[0] == "gain_db,cdf"


def test_scenario_report_default():
    rep = json.loads(urdiv.scenario_report())
    assert rep["schema"] == 1
    names = [d["name"] for d in rep["deployments"]]
    means = {d["name"]: d["mean_gain"] for d in rep["deployments"]}
    assert len(names) == 2
    assert sorted(means.values()) == [128.0, 160.0]
    for d in rep["deployments"]:
        assert d["fading_margin_db"] == pytest.approx(2.5, abs=0.1)


def test_scenario_report_config():
    cfg = json.dumps(
        {
            "p_target": 1e-4,
            "deployments": [
                {"name": "solo", "antennas": 1, "k_db": "-inf", "p_dif": 1.0}
            ],
        }
    )
    rep = json.loads(urdiv.scenario_report(cfg))
    assert rep["p_target"] == 1e-4
    assert rep["deployments"][0]["name"] == "solo"
    assert rep["deployments"][0]["mean_gain"] == 1.0


def test_error_translation():
    with pytest.raises(ValueError):
        urdiv.ChannelSpec([], 1.0)
    with pytest.raises(ValueError):
        urdiv.gain_quantile(urdiv.ChannelSpec([0.0], 1.0), 1.5)
    with pytest.raises(ValueError):
        spec = urdiv.ChannelSpec([0.0], 1.0)
        urdiv.sample_gains(spec, seed=1, n_samples=10**8 + 1)
    with pytest.raises(ValueError):
        urdiv.metric_table_csv("bogus")
    assert urdiv.parse_k_db("-inf") == -math.inf
    assert urdiv.format_sig6(math.pi) == "3.14159"
