"""Min-knapsack with compactness constraints: instances, relaxations, cuts, metrics."""

import csv
import json

from . import _compactknap as _native

__all__ = [
    "Instance",
    "generate",
    "generate_ce",
    "solve",
    "separate",
    "metrics",
    "road",
    "frac",
    "gap",
    "bench",
    "read_runs",
]


class Instance(dict):
    """Instance document: n, weights, costs, q, delta, meta (1-based I/O)."""

    @classmethod
    def loads(cls, text):
        return cls(json.loads(text))

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(_native.normalize(fh.read()))

    def dumps(self):
        return _native.normalize(json.dumps(self))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @property
    def n(self):
        return self["n"]


def _text(inst):
    return inst.dumps() if isinstance(inst, Instance) else json.dumps(inst)


def generate(n, seed):
    return Instance.loads(_native.generate(n, seed))


def generate_ce(m):
    return Instance.loads(_native.generate_ce(m))


def solve(inst, model, lam=1e-3, misc_rounds=0, time_limit=600.0, tiers="T1,T2,T3,T4",
          window=""):
    """Solve report as a dict; model is lp, mip, sdp, sdp+, pen or pen+."""
    return json.loads(_native.solve(_text(inst), model, lam, misc_rounds, time_limit, tiers,
                                    str(window)))


def separate(inst, diag):
    return json.loads(_native.separate(_text(inst), [float(v) for v in diag]))


def metrics(inst, x, ub=None):
    return json.loads(_native.metrics(_text(inst), [float(v) for v in x], ub))


def road(inst, x, tol=1e-9):
    """Exact check when x holds strings such as "2/3", floating otherwise."""
    if all(isinstance(v, str) for v in x):
        return json.loads(_native.road_exact(_text(inst), list(x)))
    return json.loads(_native.road(_text(inst), [float(v) for v in x], tol))


def frac(x):
    return _native.frac([float(v) for v in x])


def gap(ub, lb):
    return _native.gap(ub, lb)


def bench(config, workers=0):
    """Runs a benchmark config (dict); returns the path of runs.csv."""
    return _native.bench(json.dumps(config), workers)


def read_runs(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
