import itertools
import json
import os
import subprocess
from fractions import Fraction

import numpy as np
import pytest

import compactknap as ck


def brute_force(inst):
    n, w, c, q, d = inst["n"], inst["weights"], inst["costs"], inst["q"], inst["delta"]
    best = None
    for bits in itertools.product((0, 1), repeat=n):
        if sum(wi * b for wi, b in zip(w, bits)) < q:
            continue
        chosen = [i for i in range(n) if bits[i]]
        if chosen and chosen[-1] - chosen[0] > d and any(
            j - i > d and sum(bits[i + 1:j]) < (j - i - 1) // d
            for i, j in itertools.combinations(chosen, 2)
        ):
            continue
        cost = sum(ci * b for ci, b in zip(c, bits))
        best = cost if best is None else min(best, cost)
    return best


def naive_sdp_oracle(inst):
    cp = pytest.importorskip("cvxpy")
    n = inst["n"]
    Y = cp.Variable((n + 1, n + 1), symmetric=True)
    cons = [Y >> 0, Y[0, 0] == 1]
    cons += [Y[0, i + 1] == Y[i + 1, i + 1] for i in range(n)]
    cons.append(sum(inst["weights"][i] * Y[i + 1, i + 1] for i in range(n)) >= inst["q"])
    d = inst["delta"]
    for i in range(n):
        for j in range(i + d + 1, n):
            kappa = (j - i - 1) // d
            cons.append(kappa * Y[i + 1, j + 1] <= sum(Y[k + 1, k + 1] for k in range(i + 1, j)))
    obj = cp.Minimize(sum(inst["costs"][i] * Y[i + 1, i + 1] for i in range(n)))
    prob = cp.Problem(obj, cons)
    prob.solve(solver="CLARABEL")
    return prob.value


def test_generate_round_trip(tmp_path):
    inst = ck.generate(12, 7)
    assert inst.n == 12 and len(inst["weights"]) == 12
    inst["meta"]["note"] = "kept"
    path = tmp_path / "i.json"
    inst.save(path)
    back = ck.Instance.load(path)
    assert back["meta"]["note"] == "kept"
    assert back["weights"] == inst["weights"]
    assert ck.generate(12, 7)["costs"] == ck.generate(12, 7)["costs"]


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_mip_matches_brute_force(seed):
    inst = ck.generate(10, seed)
    rep = ck.solve(inst, "mip")
    assert rep["status"] == "Optimal"
    assert rep["objective"] == pytest.approx(brute_force(inst), rel=1e-9, abs=1e-9)


X5 = ["1", "3/4", "119/180", "0", "17/135", "251/540", "0", "107/540", "11/15", "11/15"]


def test_ce5_lp_and_exact_road():
    ce = ck.generate_ce(5)
    rep = ck.solve(ce, "lp")
    assert rep["objective"] == pytest.approx(14 / 3, abs=1e-9)
    cost = sum(Fraction(v) * Fraction(c).limit_denominator() for v, c in zip(X5, ce["costs"]))
    assert cost == Fraction(14, 3)
    road = ck.road(ce, X5)
    assert road["exact"] and not road["holds"]
    hit = [v for v in road["violations"] if (v["i"], v["j"]) == (2, 9)]
    assert hit and hit[0]["lhs_exact"] == "33/20" and hit[0]["rhs_exact"] == "29/20"


@pytest.mark.parametrize("m", [2, 5])
def test_naive_sdp_against_cvxpy(m):
    ce = ck.generate_ce(m)
    rep = ck.solve(ce, "sdp", time_limit=60)
    assert rep["status"] == "Optimal"
    assert rep["bound"] == pytest.approx(naive_sdp_oracle(ce), rel=1e-5, abs=1e-5)


def test_separation_on_fractional_diagonal():
    ce = ck.generate_ce(5)
    n = ce.n
    diag = [0.0] * n
    out = ck.separate(ce, diag)
    assert out["cut"] is not None
    subset = out["cut"]
    outside = [i for i in range(1, n + 1) if i not in subset]
    assert sum(diag[i - 1] for i in outside) < 1
    w = ce["weights"]
    assert sum(w[i - 1] for i in subset) < ce["q"]
    binary = ck.solve(ce, "mip")["solution"]["values"]
    assert ck.separate(ce, binary)["cut"] is None


def test_metrics_and_frac():
    assert ck.frac([0.5] * 6) == 1.0
    assert ck.frac([0.0, 1.0, 1.0]) == 0.0
    assert ck.gap(6.0, 14 / 3) == pytest.approx(200 / 9)
    inst = ck.generate(15, 3)
    x = ck.solve(inst, "lp")["solution"]["values"]
    m = ck.metrics(inst, x)
    for key in ("imp", "comp", "frac"):
        assert 0.0 <= m[key] <= 1.0
    assert m["cost"] == pytest.approx(float(np.dot(inst["costs"], x)))


def test_bad_input_raises():
    with pytest.raises(ValueError):
        ck.solve(ck.generate(8, 1), "nonsense")
    with pytest.raises(ValueError):
        ck.separate(ck.generate(8, 1), [0.5])


def test_bench_and_cli(tmp_path):
    cfg = {
        "instances": {"generate": {"count": 2, "n": 10, "seed_base": 4}},
        "models": [{"kind": "mip"}, {"kind": "lp"}],
        "time_limit": 60,
        "output_dir": str(tmp_path / "out"),
        "workers": 2,
    }
    rows = ck.read_runs(ck.bench(cfg))
    assert len(rows) == 4
    assert all(r["status"] == "Optimal" for r in rows)
    cli = os.environ.get("COMPACTKNAP_CLI")
    if not cli:
        pytest.skip("CLI path not provided")
    res = subprocess.run([cli, "generate", "--n", "9", "--seed", "2"], capture_output=True,
                         text=True, check=True)
    assert json.loads(res.stdout)["weights"] == ck.generate(9, 2)["weights"]
    assert subprocess.run([cli, "solve"], capture_output=True).returncode == 1
