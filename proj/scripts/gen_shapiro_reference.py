#!/usr/bin/env python3
"""Freeze Shapiro-Wilk reference values from scipy.stats.shapiro into a JSON fixture.

scipy wraps the Applied Statistics AS R94 Fortran routine, which is
independent of the C++ implementation under test.
"""
import json
import sys

import numpy as np
import scipy.stats as st

SEED = 20240601


def main(path):
    rng = np.random.default_rng(SEED)
    mixed = []
    for i in range(100):
        n = int(rng.integers(5, 51))
        kind = ["normal", "uniform", "exponential", "lognormal"][i % 4]
        if kind == "normal":
            x = rng.normal(3.0, 2.0, n)
        elif kind == "uniform":
            x = rng.uniform(-1.0, 4.0, n)
        elif kind == "exponential":
            x = rng.exponential(1.5, n)
        else:
            x = rng.lognormal(0.0, 0.6, n)
        res = st.shapiro(x)
        mixed.append({"kind": kind, "x": [float(v) for v in x],
                      "w": float(res.statistic), "p": float(res.pvalue)})

    uniform25 = []
    for _ in range(100):
        x = rng.uniform(0.0, 1.0, 25)
        res = st.shapiro(x)
        uniform25.append({"x": [float(v) for v in x],
                          "w": float(res.statistic), "p": float(res.pvalue)})

    with open(path, "w") as f:
        json.dump({"generator": "scipy.stats.shapiro " + __import__("scipy").__version__,
                   "seed": SEED, "mixed": mixed, "uniform25": uniform25}, f, indent=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/shapiro_reference.json")
