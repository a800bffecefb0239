import csv
import datetime

import numpy as np
import pytest

from insightrank.dataset import AttributeType, Column, Dataset


def numeric_dataset(name, cols, time_col=None):
    """Dataset from {name: float array}; time_col marks one as temporal."""
    n = len(next(iter(cols.values())))
    columns = []
    for cname, v in cols.items():
        attr = AttributeType.T if cname == time_col else AttributeType.N
        columns.append(Column(cname, attr, np.asarray(v, float), 0.0))
    return Dataset(name, columns, n)


def outlier_heavy_dataset(n=1000, seed=42):
    """Two noise columns with 5 planted bivariate outliers at >= 8 sigma."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    y = rng.normal(size=n)
    planted = [10, 200, 400, 600, 800]
    radii = [8.0, 8.6, 9.2, 9.8, 10.4]
    angles = [0.3, 1.4, 2.5, 3.6, 4.7]
    for p, r, a in zip(planted, radii, angles):
        x[p] = r * np.cos(a)
        y[p] = r * np.sin(a)
    return numeric_dataset("outlier_heavy", {"x": x, "y": y}), planted


def correlation_heavy_dataset(n=1000, seed=42):
    """Four columns; (a, b) planted with |r| ~ 0.95, c and d independent."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n)
    b = 0.95 * a + np.sqrt(1 - 0.95**2) * rng.normal(size=n)
    c = rng.normal(size=n)
    d = rng.normal(size=n)
    return numeric_dataset("correlation_heavy", {"a": a, "b": b, "c": c, "d": d})


def trend_spike_dataset(n=1000, seed=42):
    """Daily series with a linear trend, a fast oscillation and 6 spikes."""
    rng = np.random.default_rng(seed)
    i = np.arange(n)
    t = i * 86400.0 + 1.4e9
    value = 0.05 * i + 2 * np.sin(2 * np.pi * i / 5) + rng.normal(0, 0.3, n)
    spikes = rng.choice(np.arange(20, n - 20), size=6, replace=False)
    value[spikes] += rng.uniform(6, 8, size=6)
    ds = numeric_dataset("trend_spike", {"date": t, "value": value}, time_col="date")
    return ds, sorted(int(s) for s in spikes)


def write_weather_csv(path, n=365, seed=7):
    """Small mixed-type CSV: T date, three N measures, one C label."""
    rng = np.random.default_rng(seed)
    t0 = datetime.date(2014, 1, 1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date", "temp", "wind", "precip", "weather"])
        for i in range(n):
            d = t0 + datetime.timedelta(days=int(i))
            temp = 10 + 10 * np.sin(2 * np.pi * i / 365) + rng.normal(0, 2)
            wind = max(0.0, rng.normal(10, 3))
            precip = max(0.0, rng.normal(1, 1))
            weather = rng.choice(["sun", "rain", "fog"])
            w.writerow([d.isoformat(), f"{temp:.3f}", f"{wind:.3f}", f"{precip:.3f}", weather])
    return path


@pytest.fixture
def weather_csv(tmp_path):
    return write_weather_csv(str(tmp_path / "weather.csv"))
