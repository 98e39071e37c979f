"""Smoke test for the inertia_py extension.

Build and install first, e.g.
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/inertia_py-*.whl
then run
    python python/smoke_test.py
"""

import json
import math
import os
import tempfile

import inertia_py as ip

TRAIN = "2019-01-01/2019-03-01"
TEST = "2019-03-01/2019-03-08"


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok   {msg}")


def main():
    ds = ip.Dataset.synthetic(hours=24 * 70, seed=5, noise_sd=0.0)
    check(len(ds) == 24 * 70, "synthetic dataset length")
    check(ds.region == "NORDIC_TOTAL", "default region")

    spec = ip.FeatureSpec()
    check(spec.n_columns == 14, "default spec has 14 columns")
    check(ip.FeatureSpec(monthly=["demand_fc"]).n_columns == 36, "monthly demand adds 22 columns")

    model = ip.ExplanatoryModel.fit(ds, TRAIN, spec)
    actual = ds.target(TEST)
    fc = model.predict(ds, TEST)
    check(len(fc) == len(actual) == 24 * 7, "forecast aligned with window")
    check(ip.mape(actual, fc) < 1e-6, "zero-noise forecast is exact")
    check(set(model.coefficients()) == set(spec.column_names()), "coefficients keyed by column")

    lo, mid, hi = model.quantiles(ds, TEST, [0.05, 0.5, 0.95])
    z = 1.6448536269514722
    check(all(abs(m - f) < 1e-6 * f for m, f in zip(mid, fc)), "median equals mean")
    check(all(abs((h - f) - z * model.sigma) < 1e-6 * model.sigma for h, f in zip(hi, fc)), "95% quantile")
    check(all(l < m < h for l, m, h in zip(lo, mid, hi)), "quantiles ordered")

    again = ip.ExplanatoryModel.from_json(model.to_json())
    check(again.predict(ds, TEST) == fc, "JSON round trip")

    base = ip.BaselineModel.fit(ds, TRAIN)
    bfc = base.predict(ds, TEST)
    check(math.isfinite(ip.smape(actual, bfc)), "baseline forecast")

    check(abs(ip.mape([100.0, 200.0], [110.0, 190.0]) - 7.5) < 1e-12, "mape example")
    check(abs(ip.smape([0.0], [50.0]) - 200.0) < 1e-12, "smape bound")
    check(ip.mae([1.0, None], [2.0, 5.0]) == 1.0, "mae skips gaps")

    try:
        ip.ExplanatoryModel.fit(ds, "2019-03-01/2019-02-01")
        raise SystemExit("FAIL: empty window accepted")
    except ip.ConfigError:
        print("ok   empty window raises ConfigError")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "nordic.csv")
        ds.write_csv(path)
        back = ip.Dataset.load_csv(path)
        check(back.target() == ds.target(), "CSV round trip")
        try:
            ip.Dataset.load_csv(os.path.join(tmp, "missing.csv"))
            raise SystemExit("FAIL: missing file accepted")
        except ip.DataError:
            print("ok   missing file raises DataError")

        split = '{ train_start = "2019-01-01", train_end = "2019-03-01", test_start = "2019-03-01", test_end = "2019-03-08" }'
        with open(os.path.join(tmp, "suite.toml"), "w") as f:
            f.write(
                'base_case = "a"\n'
                f'[[experiment]]\nid = "a"\nmodel = "explanatory"\ndataset = "nordic.csv"\nsplit = {split}\n'
                f'[[experiment]]\nid = "b"\nmodel = "baseline"\ndataset = "nordic.csv"\nsplit = {split}\n'
            )
        rows = ip.run_benchmark(os.path.join(tmp, "suite.toml"), jobs=2)
        check([r["id"] for r in rows] == ["a", "b"], "benchmark rows in order")
        check(rows[0]["delta_mae"] == 0.0 and rows[1]["delta_mae"] > 0.0, "delta MAE against base case")
        print(json.dumps(rows[0]["test"]))

    print("smoke test passed")


if __name__ == "__main__":
    main()
