import json
import math

import pytest
from hypothesis import given, strategies as st

from graphonlab import bench
from graphonlab.errors import ConfigInvalid


def ref_lower(n, k, rho):
    s = rho * (k / n) ** 0.25 + (rho * k**2 / n**2) ** 0.5 + (rho * math.log(min(k, rho * n + 2)) / n) ** 0.5
    return min(rho, s)


def test_full_density_caps_at_one():
    assert bench.lower_rate(bench.RateQuery(50, 50, 1.0))["total"] == 1.0
    assert bench.upper_rate(bench.RateQuery(50, 50, 1.0)) == 1.0


def test_sparse_floor():
    n, k = 200, 10
    rho = k * k / (n * n)
    out = bench.lower_rate(bench.RateQuery(n, k, rho))
    assert out["terms"]["this_paper"] == pytest.approx(rho)
    assert out["total"] == rho


def test_reference_point():
    out = bench.lower_rate(bench.RateQuery(100, 10, 0.5))
    assert out["total"] == pytest.approx(ref_lower(100, 10, 0.5), rel=1e-12)
    assert out["terms"]["klopp"] == pytest.approx(0.5 * 0.1**0.25)
    assert out["terms"]["neeman"] == pytest.approx(math.sqrt(0.5 * math.log(10) / 100))


def test_two_blocks_equal():
    for n, rho in ((10, 1.0), (100, 0.01), (1000, 0.5)):
        q = bench.RateQuery(n, 2, rho)
        assert bench.upper_rate(q) == pytest.approx(bench.lower_rate(q)["total"])


def test_query_validation():
    for args in ((10, 1, 0.5), (10, 11, 0.5), (10, 2, 0.0), (10, 2, 1.5)):
        with pytest.raises(ConfigInvalid):
            bench.RateQuery(*args)


@given(n=st.integers(2, 10**6), kfrac=st.floats(0, 1), rho=st.floats(1e-6, 1.0))
def test_rate_properties(n, kfrac, rho):
    k = max(2, min(n, int(2 + kfrac * (n - 2))))
    q = bench.RateQuery(n, k, rho)
    lo, up = bench.lower_rate(q)["total"], bench.upper_rate(q)
    assert 0 < lo <= up * (1 + 1e-12) + 1e-300
    assert up / lo <= bench.gap_factor(q) * (1 + 1e-6)
    assert lo == pytest.approx(ref_lower(n, k, rho), rel=1e-12)


def test_csv_roundtrip(tmp_path):
    rec = bench.RiskRecord("trivial", 10, 2, 1, 0.5, 3, 0.1, 0.0, 0.2, 0.01, 0.3, 0.4, 7)
    text = bench.format_records([rec])
    assert text.splitlines()[0] == bench.CSV_SCHEMA
    assert text.splitlines()[1].split(",") == bench.RISK_FIELDS
    p = tmp_path / "r.csv"
    p.write_text(text)
    row = bench.read_records(p)[0]
    assert row["estimator"] == "trivial" and float(row["mean_upper_proxy"]) == 0.2


def test_validate_config():
    good = {"truth": {"kind": "constant"}, "estimators": ["trivial"], "grid": {"n": 10, "k": 2, "rho": 0.5},
            "trials": 1, "seed": 0}
    assert bench.validate_config(good)["blowup_m"] == 2
    for key in good:
        bad = dict(good)
        del bad[key]
        with pytest.raises(ConfigInvalid):
            bench.validate_config(bad)
    with pytest.raises(ConfigInvalid):
        bench.validate_config({**good, "estimators": ["magic"]})
    with pytest.raises(ConfigInvalid):
        bench.validate_config({**good, "truth": {"kind": "magic"}})


def test_oracle_experiment(tmp_path):
    cfg = {"truth": {"kind": "planted", "p": 0.6, "q": 0.2}, "estimators": ["oracle"],
           "grid": {"n": [20], "k": [3], "rho": [0.6]}, "trials": 3, "seed": 1}
    rows = bench.run_experiment(cfg, tmp_path)
    assert len(rows) == 1 and rows[0].mean_lower_proxy == 0 and rows[0].mean_upper_proxy == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["complete"] and manifest["rows"] == 1
    assert manifest["config_hash"] == bench.config_hash(cfg)


def sweep_config():
    n, k = 64, 8
    return {"truth": {"kind": "qb"}, "estimators": ["trivial"],
            "grid": {"n": [n], "k": [k], "rho": [k * k / n**2 * 2.0**j for j in range(-2, 5)]},
            "trials": 1, "seed": 3, "metric_restarts": 2}


def test_rate_sweep_and_replay(tmp_path):
    bench.run_experiment(sweep_config(), tmp_path / "a")
    bench.run_experiment(sweep_config(), tmp_path / "b")
    rows = bench.read_records(tmp_path / "a" / "risk.csv")
    assert len(rows) == 7
    lows = [float(r["lower_rate_value"]) for r in rows]
    assert all(x < y for x, y in zip(lows, lows[1:]))
    assert (tmp_path / "a" / "risk.csv").read_bytes() == (tmp_path / "b" / "risk.csv").read_bytes()


def test_threads_match_serial(tmp_path):
    cfg = sweep_config()
    cfg["grid"]["rho"] = cfg["grid"]["rho"][:3]
    bench.run_experiment(cfg, tmp_path / "s")
    bench.run_experiment(cfg, tmp_path / "p", threads=2)
    assert (tmp_path / "s" / "risk.csv").read_bytes() == (tmp_path / "p" / "risk.csv").read_bytes()
