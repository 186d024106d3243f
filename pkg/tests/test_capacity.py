import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadder import capacity as cap
from qadder.info import joint_holevo
from qadder.linalg import random_density

TWO_EBIT = 3.18872187554086713609030420796


def test_classical_region_vertices():
    r = cap.named_region("classical")
    assert np.allclose(r.vertices, [(0, 0), (1, 0), (1, 0.5), (0.5, 1), (0, 1)])
    assert r.contains((0.75, 0.75))
    assert not r.contains((0.8, 0.8))
    assert not r.contains((-0.1, 0.0))


@pytest.mark.parametrize(
    "tag, corners",
    [
        ("ghz", [(2, 0.5), (0.5, 2)]),
        ("ss_maximal", [(2, 0), (0, 2)]),
        ("two_ebit_unitary", [(2, TWO_EBIT - 2), (TWO_EBIT - 2, 2)]),
    ],
)
def test_named_region_corners(tag, corners):
    verts = cap.named_region(tag).vertices
    for c in corners:
        assert any(abs(v[0] - c[0]) < 1e-12 and abs(v[1] - c[1]) < 1e-12 for v in verts)


def test_two_ebit_sum_constant():
    assert cap.TWO_EBIT_SUM == pytest.approx(TWO_EBIT, abs=1e-14)
    assert cap.named_region("two_ebit_unitary").notes


def test_unknown_region():
    with pytest.raises(ValueError, match="unknown region"):
        cap.named_region("nope")


def test_region_must_contain_origin():
    with pytest.raises(ValueError):
        cap.RateRegion(((1.0, 0.0, -1.0),))


def test_time_sharing_examples():
    r = cap.time_sharing_region(1.0)
    assert [r.bound(1, 0), r.bound(0, 1), r.bound(1, 1)] == pytest.approx([1, 1, 1.5])
    r = cap.time_sharing_region(1 / math.sqrt(2))
    assert [r.bound(1, 0), r.bound(0, 1), r.bound(1, 1)] == pytest.approx([2, 2, 2])
    r = cap.time_sharing_region(math.sqrt(0.89))
    assert r.bound(1, 0) == pytest.approx(1.49991595816452799564049959413, abs=1e-12)
    assert r.bound(1, 1) == pytest.approx(1.74995797908226399782024979707, abs=1e-12)
    assert cap.CONJECTURE_NOTE in r.notes


def test_time_sharing_accepts_rounded_endpoint():
    assert cap.TimeSharingParams(0.70710678).alpha == 1 / math.sqrt(2)
    for bad in (0.5, 1.01):
        with pytest.raises(ValueError):
            cap.TimeSharingParams(bad)


@settings(max_examples=40, deadline=None)
@given(st.floats(1 / math.sqrt(2), 1.0))
def test_time_sharing_sum_is_midpoint(alpha):
    r = cap.time_sharing_region(alpha)
    lo = cap.time_sharing_region(1.0).bound(1, 1)
    hi = cap.time_sharing_region(1 / math.sqrt(2)).bound(1, 1)
    h = cap.TimeSharingParams(alpha).entropy
    assert r.bound(1, 1) == pytest.approx(lo + (hi - lo) * h, abs=1e-12)


def test_convex_hull_union():
    hull = cap.convex_hull_union([cap.named_region("classical"), cap.named_region("ss_maximal")])
    for v in cap.named_region("ss_maximal").vertices + cap.named_region("classical").vertices:
        assert hull.contains(v)
    assert not hull.contains((1.1, 1.1))
    single = cap.convex_hull_union([cap.named_region("classical")])
    assert np.allclose(single.vertices, cap.named_region("classical").vertices)


def test_pentagon_of_classical_inputs():
    r = cap.pentagon(cap.classical_uniform_ensemble())
    assert [r.bound(1, 0), r.bound(0, 1), r.bound(1, 1)] == pytest.approx([1, 1, 1.5], abs=1e-12)


def test_unassisted_upper_expr_examples():
    assert cap.unassisted_upper_expr(np.eye(2) / 2, np.eye(2) / 2) == pytest.approx(1.5, abs=1e-12)
    zero = np.diag([1.0, 0.0])
    assert cap.unassisted_upper_expr(zero, zero) == pytest.approx(0, abs=1e-12)
    y = 0.5
    rho = np.diag([(1 + y) / 2, (1 - y) / 2])
    assert cap.unassisted_upper_expr(rho, rho) == pytest.approx(1.24755624891826572781939158408, abs=1e-12)


def test_unassisted_upper_expr_never_exceeds_three_halves():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a, b = (random_density(2, int(rng.integers(1 << 30))) for _ in range(2))
        assert cap.unassisted_upper_expr(a, b) <= 1.5 + 1e-9


def test_classical_uniform_ensemble():
    assert joint_holevo(cap.classical_uniform_ensemble()) == pytest.approx(1.5, abs=1e-12)


def test_pauli_ensembles():
    assert joint_holevo(cap.pauli_ensemble(cap.Scenario("two_ebit"))) == pytest.approx(TWO_EBIT, abs=1e-9)
    assert joint_holevo(cap.pauli_ensemble(cap.Scenario("ghz"))) == pytest.approx(2.5, abs=1e-9)
    assert joint_holevo(cap.pauli_ensemble(cap.Scenario("sender_sender", 1 / math.sqrt(2)))) == pytest.approx(
        2.0, abs=1e-9
    )


def test_scenario_validation():
    with pytest.raises(ValueError):
        cap.Scenario("bogus")
    with pytest.raises(ValueError):
        cap.Scenario("sender_sender")
    with pytest.raises(ValueError):
        cap.Scenario("ghz", 0.9)
    with pytest.raises(ValueError, match="not available"):
        cap.Scenario("unassisted").check_mode("unitary")
    with pytest.raises(ValueError):
        cap.scenario_signal(cap.Scenario("ghz"), cap.Pauli(0), cap.Unitary(0, 0, 0))


def test_euler_unitary_is_unitary():
    rng = np.random.default_rng(2)
    us = cap.euler_unitary(*rng.uniform(0, 2 * np.pi, (3, 10)))
    for u in us:
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8))
def test_project_simplex(v):
    w = cap.project_simplex(np.array(v))
    assert w.min() >= 0
    assert w.sum() == pytest.approx(1, abs=1e-12)
    assert np.allclose(cap.project_simplex(w), w, atol=1e-12)


@pytest.mark.parametrize("mode, scenario", [("prepare", cap.Scenario("unassisted")), ("unitary", cap.Scenario("ghz"))])
def test_fast_objective_matches_generic_path(mode, scenario):
    prob = cap._Problem(scenario, mode, 3)
    rng = np.random.default_rng(5)
    for _ in range(5):
        x = prob.initial(rng, centered=False)
        assert prob.value(x) == pytest.approx(joint_holevo(prob.ensemble(x)), abs=1e-9)


def test_optimizer_small_run_is_deterministic():
    s = cap.Scenario("unassisted")
    a = cap.optimize_rate_sum(s, restarts=2, seed=3, budget=2000)
    b = cap.optimize_rate_sum(s, restarts=2, seed=3, budget=2000)
    assert a.best_value == b.best_value
    assert a.restart_values == b.restart_values
    assert a.best_value <= 1.5 + 1e-9
    assert a.best_value == pytest.approx(joint_holevo(a.best_ensemble), abs=1e-12)


def test_optimizer_pauli_mode():
    r = cap.optimize_rate_sum(cap.Scenario("two_ebit"), restarts=2, budget=3000, mode="pauli")
    assert r.best_value <= TWO_EBIT + 1e-9
    assert r.best_value == pytest.approx(TWO_EBIT, abs=1e-6)


def test_optimizer_argument_checks():
    with pytest.raises(ValueError):
        cap.optimize_rate_sum(cap.Scenario("unassisted"), restarts=0)
    with pytest.raises(ValueError):
        cap.optimize_rate_sum(cap.Scenario("unassisted"), mode="pauli")


@pytest.mark.slow
def test_optimizer_sender_sender_bounded():
    alpha = math.sqrt(0.89)
    r = cap.optimize_rate_sum(cap.Scenario("sender_sender", alpha), restarts=3, budget=4000)
    assert r.best_value <= 2.0 + 1e-6
