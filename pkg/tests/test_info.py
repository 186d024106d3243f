import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadder import channels as ch
from qadder.info import (
    Ensemble,
    ProductEnsemble,
    conditional_holevo_1,
    conditional_holevo_2,
    entropy_sandwich,
    holevo,
    joint_holevo,
    measurement_decomposition,
    measurement_entropy_gap,
    pair_mixture_entropy,
    random_povm,
)
from qadder.linalg import ket, projector, random_density, random_pure, random_unitary, von_neumann_entropy


def classical_adder_product_ensemble():
    alpha = ch.adder_channel(2)
    signals = np.array([[alpha(projector(ket(f"{x}{y}"))) for y in (0, 1)] for x in (0, 1)])
    return ProductEnsemble(np.array([0.5, 0.5]), np.array([0.5, 0.5]), signals)


def test_holevo_examples():
    assert holevo(Ensemble.from_items([(1.0, "a", np.eye(2) / 2)])) == pytest.approx(0, abs=1e-12)
    e = Ensemble.from_items([(0.5, 0, projector(ket("0"))), (0.5, 1, projector(ket("1")))])
    assert holevo(e) == pytest.approx(1, abs=1e-12)
    assert holevo(classical_adder_product_ensemble().joint()) == pytest.approx(1.5, abs=1e-12)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble.from_items([(0.5, "a", np.eye(2) / 2), (0.6, "b", np.eye(2) / 2)])
    with pytest.raises(ValueError):
        Ensemble.from_items([(0.5, "a", np.eye(2) / 2), (0.5, "a", np.eye(2) / 2)])


def test_conditional_holevo():
    pe = classical_adder_product_ensemble()
    assert conditional_holevo_1(pe) == pytest.approx(1.0, abs=1e-12)
    assert conditional_holevo_2(pe) == pytest.approx(1.0, abs=1e-12)
    point_q = ProductEnsemble(pe.p, np.array([0.0, 1.0]), pe.signals)
    single = Ensemble(pe.p, (0, 1), pe.signals[:, 1])
    assert conditional_holevo_1(point_q) == pytest.approx(holevo(single), abs=1e-12)
    point_p = ProductEnsemble(np.array([1.0, 0.0]), pe.q, pe.signals)
    assert conditional_holevo_1(point_p) == pytest.approx(0, abs=1e-12)


def _random_ensemble(rng, k=4, dim=4):
    p = rng.dirichlet(np.ones(k))
    states = np.stack([random_density(dim, int(rng.integers(1 << 30))) for _ in range(k)])
    return Ensemble(p, tuple(range(k)), states)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_holevo_unitary_invariance_and_bound(seed):
    rng = np.random.default_rng(seed)
    e = _random_ensemble(rng)
    u = random_unitary(4, seed)
    rotated = Ensemble(e.probs, e.labels, u @ e.states @ u.conj().T)
    assert abs(holevo(rotated) - holevo(e)) <= 1e-9
    assert holevo(e) <= von_neumann_entropy(e.average()) + 1e-10


def test_pair_mixture_examples():
    v = random_pure(4, np.random.default_rng(0))
    w = np.zeros(4, complex)
    w[np.argmin(np.abs(v))] = 1
    w -= np.vdot(v, w) * v
    w /= np.linalg.norm(w)
    assert pair_mixture_entropy(v, w) == pytest.approx(1, abs=1e-12)
    assert pair_mixture_entropy(v, v) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("dim", [2, 4])
def test_pair_mixture_matches_eigendecomposition(dim):
    rng = np.random.default_rng(dim)
    for _ in range(250):
        v, w = random_pure(dim, rng), random_pure(dim, rng)
        direct = von_neumann_entropy((projector(v) + projector(w)) / 2)
        assert abs(pair_mixture_entropy(v, w) - direct) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0, 2 * np.pi))
def test_pair_mixture_symmetric_and_phase_invariant(seed, phase):
    rng = np.random.default_rng(seed)
    v, w = random_pure(3, rng), random_pure(3, rng)
    h = pair_mixture_entropy(v, w)
    assert abs(h - pair_mixture_entropy(w, v)) <= 1e-12
    assert abs(h - pair_mixture_entropy(v, np.exp(1j * phase) * w)) <= 1e-12


def test_sandwich_examples():
    assert entropy_sandwich(0.0) == pytest.approx((1, 1, 1))
    assert entropy_sandwich(1.0) == pytest.approx((0, 0, 0.5))
    lo, mid, hi = entropy_sandwich(0.5)
    assert (lo, hi) == pytest.approx((0.75, 0.875))
    assert mid == pytest.approx(0.8112781244591328, abs=1e-12)
    with pytest.raises(ValueError):
        entropy_sandwich(1.5)


def test_sandwich_grid():
    for x in np.round(np.linspace(0, 1, 101), 2):
        lo, mid, hi = entropy_sandwich(float(x))
        assert lo <= mid <= hi


def test_measurement_decomposition_bell():
    rho = projector(ch.bell_states()[0])
    parts = measurement_decomposition(rho, [projector(ket("0")), projector(ket("1"))], (2, 2))
    assert [lam for lam, _ in parts] == pytest.approx([0.5, 0.5])
    for _, sigma in parts:
        assert von_neumann_entropy(sigma) == pytest.approx(0, abs=1e-12)
    assert measurement_entropy_gap(rho, [projector(ket("0")), projector(ket("1"))], (2, 2)) == pytest.approx(1.0)


def test_measurement_decomposition_drops_null_outcomes():
    rho = np.kron(random_density(2, 1), projector(ket("0")))
    parts = measurement_decomposition(rho, [projector(ket("0")), projector(ket("1"))], (2, 2))
    assert len(parts) == 1


def test_measurement_decomposition_rejects_incomplete_povm():
    with pytest.raises(ValueError, match="identity"):
        measurement_decomposition(np.eye(4) / 4, [projector(ket("0"))], (2, 2))


@pytest.mark.parametrize("d2", [2, 4])
def test_lemma_random(d2):
    rng = np.random.default_rng(d2)
    for _ in range(100):
        rho = random_density(2 * d2, int(rng.integers(1 << 30)))
        povm = random_povm(d2, int(rng.integers(2, 5)), rng)
        parts = measurement_decomposition(rho, povm, (2, d2))
        assert sum(lam for lam, _ in parts) == pytest.approx(1, abs=1e-9)
        assert measurement_entropy_gap(rho, povm, (2, d2)) >= -1e-10


def test_joint_holevo_at_least_conditionals():
    rng = np.random.default_rng(1)
    for _ in range(20):
        signals = np.array([[random_density(4, int(rng.integers(1 << 30))) for _ in range(3)] for _ in range(2)])
        pe = ProductEnsemble(rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(3)), signals)
        j = joint_holevo(pe)
        assert j >= conditional_holevo_1(pe) - 1e-9
        assert j >= conditional_holevo_2(pe) - 1e-9


def test_product_joint_matches_ensemble_view():
    pe = classical_adder_product_ensemble()
    assert joint_holevo(pe) == pytest.approx(holevo(pe.joint()), abs=1e-14)
    assert pe.joint().labels == tuple(itertools.product((0, 1), (0, 1)))
