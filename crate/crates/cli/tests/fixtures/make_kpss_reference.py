"""Regenerates kpss_reference.json with statsmodels' KPSS test.

Usage: python make_kpss_reference.py > kpss_reference.json
"""

import json
import math
import sys
import warnings

import numpy as np
from statsmodels.tsa.stattools import kpss

N = 200
PER_KIND = 25
LAGS = math.floor(4 * (N / 100) ** 0.25)


def series(kind, rng):
    if kind == "constant":
        return np.full(N, rng.uniform(-50, 50))
    if kind == "white_noise":
        return rng.normal(0.0, 1.0, N)
    if kind == "trend":
        return np.arange(N, dtype=float) * rng.uniform(0.5, 2.0) + rng.normal(0.0, 1.0, N)
    return np.cumsum(rng.normal(0.0, 1.0, N))


def main():
    rng = np.random.default_rng(20240601)
    cases = []
    for kind in ["constant", "white_noise", "trend", "random_walk"]:
        for _ in range(PER_KIND):
            values = np.round(series(kind, rng), 6)
            if np.all(values == values[0]):
                stat = 0.0
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    stat = float(kpss(values, regression="c", nlags=LAGS)[0])
            cases.append({"kind": kind, "statistic": stat, "values": [float(v) for v in values]})
    json.dump({"lags": LAGS, "critical_value_5pct": 0.463, "cases": cases}, sys.stdout)


if __name__ == "__main__":
    main()
