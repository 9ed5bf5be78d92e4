import json
import random
from fractions import Fraction

import mpmath
import pytest

from tridecomp.chains import make_chain, validate_chain
from tridecomp.decompose import DecompositionResult, RandomConfig, SystemInput, main_decompose
from tridecomp.poly import VarOrder, parse_poly
from tridecomp.sysfile import load_system_file
from tridecomp.verify import (
    FAIL_SUSPECT,
    PASS,
    SAMPLING_FAILED,
    chain_fiber_points,
    deg_w_estimate,
    in_quasi_component,
    sample_chain,
    verify_cover,
    verify_degrees,
    verify_irredundant,
    verify_result,
)

from conftest import system_path

O2 = VarOrder(["x1", "x2"])


def golden(k):
    inp, ov, _ = load_system_file(system_path(f"example{k}.sys"))
    return inp, main_decompose(inp, RandomConfig(overrides=ov, deterministic=True))


def result_of(order, specs_list):
    chains = [validate_chain(make_chain(order, specs)) for specs in specs_list]
    return DecompositionResult(chains, order, {}, {})


# sampling


def test_fiber_points_of_a_zero_dimensional_chain():
    ch = make_chain(O2, [("x2", "x2^2 - 2"), ("x1", "x1 - x2")])
    pts = chain_fiber_points(ch, {})
    assert sorted(round(float(p[0].real), 9) for p in pts) == [-1.414213562, 1.414213562]
    assert all(abs(p[0] - p[1]) < 1e-25 for p in pts)


def test_fiber_points_give_up_when_an_initial_vanishes():
    ch = make_chain(O2, [("x1", "x2*x1 - 1")])
    assert chain_fiber_points(ch, {1: Fraction(0)}) is None
    (pt,) = chain_fiber_points(ch, {1: Fraction(2)})
    assert abs(pt[0] - 0.5) < 1e-25


def test_sample_chain_counts_discarded_draws():
    ch = make_chain(O2, [("x1", "x2*x1 - 1")])
    pts, failed = sample_chain(ch, random.Random(0), 30)
    assert len(pts) + failed == 30


def test_quasi_component_excludes_initial_zeros():
    ch = make_chain(O2, [("x1", "x2*x1")])
    with mpmath.workdps(30):
        assert not in_quasi_component(ch, [mpmath.mpc(3), mpmath.mpc(0)])
        assert in_quasi_component(ch, [mpmath.mpc(0), mpmath.mpc(5)])


# cover


@pytest.mark.parametrize("k", [1, 2, 3])
def test_golden_results_cover(k):
    inp, res = golden(k)
    chk = verify_cover(inp, res)
    assert chk.ok and chk.exact_ok and chk.numeric_ok and chk.inclusion_ok
    assert chk.points_checked > 0
    assert chk.witnesses == []


def test_deleting_a_chain_leaves_an_uncovered_witness():
    inp, res = golden(1)
    kept = [r for r in res.chains if [p.to_str() for p in r.chain.polys] != ["x2"]]
    broken = DecompositionResult(kept, res.order, {}, {})
    chk = verify_cover(inp, broken)
    assert chk.exact_ok and not chk.inclusion_ok and not chk.ok
    uncovered = [w for w in chk.witnesses if w["kind"] == "uncovered"]
    assert uncovered
    # the missed line is x2 = 0
    assert all(abs(complex(w["point"]["x2"])) < 1e-9 for w in uncovered)


def test_wrong_chain_gives_prem_witness():
    inp = SystemInput([parse_poly("x1*x2*(x1+x2)", O2)], O2)
    res = result_of(O2, [[("x1", "x1 - 1")]])
    chk = verify_cover(inp, res)
    assert not chk.exact_ok and not chk.numeric_ok
    kinds = {w["kind"] for w in chk.witnesses}
    assert {"prem", "sample"} <= kinds


# irredundancy


@pytest.mark.parametrize("k", [1, 2, 3])
def test_golden_results_irredundant(k):
    _, res = golden(k)
    verdicts = verify_irredundant(res, 25)
    n = len(res.chains)
    assert len(verdicts) == n * (n - 1)
    assert all(v.verdict == PASS for v in verdicts)


def test_redundant_decomposition_flags_embedded_points():
    res = result_of(O2, [[("x2", "x2^2 - 2"), ("x1", "x1^2 - 2")], [("x1", "x1 + x2")], [("x2", "x2")]])
    verdicts = {(v.i, v.j): v for v in verify_irredundant(res, 25)}
    flagged = verdicts[(0, 1)]
    assert flagged.verdict == FAIL_SUSPECT
    pts = sorted((round(float(p["x1"]), 6), round(float(p["x2"]), 6)) for p in flagged.contained_points)
    assert pts == [(-1.414214, 1.414214), (1.414214, -1.414214)]
    # the lines are not inside the points, nor inside each other
    for key in [(1, 0), (2, 0), (1, 2), (2, 1), (0, 2)]:
        assert verdicts[key].verdict == PASS


def test_single_chain_is_vacuously_irredundant():
    res = result_of(O2, [[("x1", "x1 + x2")]])
    assert verify_irredundant(res, 10) == []


def test_irredundancy_needs_ten_samples():
    res = result_of(O2, [[("x1", "x1 + x2")]])
    with pytest.raises(ValueError):
        verify_irredundant(res, 9)


def test_sampling_failure_reported_per_pair(monkeypatch):
    import tridecomp.verify as verify

    # every free value drawn is 0, where the initial x2 vanishes
    monkeypatch.setattr(verify, "_draw", lambda rng: Fraction(0))
    res = result_of(O2, [[("x1", "x2*x1 - 1")], [("x2", "x2 - 1")]])
    verdicts = {(v.i, v.j): v.verdict for v in verify_irredundant(res, 10)}
    assert verdicts[(0, 1)] == SAMPLING_FAILED
    assert verdicts[(1, 0)] == PASS


# degrees


def test_degree_estimate_example1():
    _, res = golden(1)
    est, checks = verify_degrees(res)
    assert est == 3 == deg_w_estimate(res)
    by_poly = {res.chains[c.chain].chain.polys[0].to_str(): c for c in checks}
    c = by_poly["x1^2 + x1*x2"]
    assert (c.max_leader_degree, c.max_free_degree, c.leader_degree_product) == (2, 1, 2)
    assert all(c.ok for c in checks)


def test_degree_estimate_example3():
    _, res = golden(3)
    est, checks = verify_degrees(res)
    assert est == 4
    zero_dim = [c for c in checks if len(res.chains[c.chain].chain.polys) == 2]
    assert zero_dim[0].leader_degree_product == 2
    assert all(c.ok for c in checks)


def test_degree_check_linear():
    res = result_of(O2, [[("x1", "x1 - 2*x2 + 1")]])
    est, (c,) = verify_degrees(res)
    assert est == 1 and c.ok


def test_degree_check_can_fail():
    # free degree 2 exceeds 1^2
    res = result_of(O2, [[("x1", "x1 - x2^2")]])
    _, (c,) = verify_degrees(res)
    assert not c.ok


# report


def test_report_json_and_text():
    inp, res = golden(3)
    rep = verify_result(inp, res, 12, seed=4)
    assert rep.ok and rep.cover_ok
    js = rep.to_json()
    assert js["format"] == 1 and js["ok"] is True
    assert js["cover"]["numeric"]["probabilistic"] is True
    assert js["irredundancy"]["probabilistic"] is True
    assert js["degrees"]["deg_W_estimate"] == 4
    json.dumps(js)
    text = rep.to_text()
    assert text.startswith("verification: OK")
    assert "pair 0 -> 1: PASS" in text


def test_reports_are_deterministic_given_seed():
    inp, res = golden(3)
    a = verify_result(inp, res, 10, seed=1).to_json()
    b = verify_result(inp, res, 10, seed=1).to_json()
    assert a == b
