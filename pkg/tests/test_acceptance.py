"""Acceptance criteria, one function each.

Each criterion returns ``(ok, detail)``. Under pytest every criterion is a test
and its PASS/FAIL line is echoed in the terminal summary; running this file
directly prints the same lines.
"""
import math
import time

import numpy as np
import pytest

from qadder import capacity as cap
from qadder import codes, schur, verify
from qadder.info import joint_holevo
from qadder.linalg import random_density

SEED = 42
TWO_EBIT = 4 - (-(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75)))


def c01_unassisted_sum_capacity():
    start = time.perf_counter()
    r = cap.optimize_rate_sum(cap.Scenario("unassisted"), restarts=20, seed=SEED, budget=20000)
    elapsed = time.perf_counter() - start
    uniform = joint_holevo(cap.classical_uniform_ensemble())
    ok = 1.4990 <= r.best_value <= 1.5 + 1e-9 and abs(uniform - 1.5) <= 1e-9 and elapsed < 60
    return ok, f"best {r.best_value:.12f}, uniform {uniform:.12f}, {elapsed:.1f} s"


def c02_unassisted_bound_maximizer():
    grid = []
    for y in np.round(np.arange(51) * 0.02, 2):
        rho = np.diag([(1 + y) / 2, (1 - y) / 2])
        grid.append(cap.unassisted_upper_expr(rho, rho))
    rng = np.random.default_rng([SEED, 102])
    randoms = [
        cap.unassisted_upper_expr(random_density(2, int(rng.integers(2**31))), random_density(2, int(rng.integers(2**31))))
        for _ in range(500)
    ]
    ok = int(np.argmax(grid)) == 0 and abs(grid[0] - 1.5) <= 1e-9 and max(grid) <= 1.5 + 1e-9
    ok = ok and max(randoms) <= 1.5 + 1e-9
    return ok, f"grid max {max(grid):.12f} at y={0.02 * int(np.argmax(grid)):.2f}, random max {max(randoms):.9f}"


def c03_two_ebit_pauli():
    value = joint_holevo(cap.pauli_ensemble(cap.Scenario("two_ebit")))
    formula = schur.quantum_rate_sum(2)
    ok = abs(value - 3.188722) <= 1e-6 and abs(value - TWO_EBIT) <= 1e-9 and abs(value - formula) <= 1e-9
    return ok, f"Pauli ensemble {value:.12f}, formula {formula:.12f}"


def c04_ghz_bound_and_code():
    r = cap.optimize_rate_sum(cap.Scenario("ghz"), restarts=20, seed=SEED, budget=20000, mode="unitary")
    base = codes.AdderCode(2, ("00", "11"), ("00", "01", "10"))
    lifted = codes.ghz_lift(base)
    err = codes.error_probability(lifted).max_message_error
    rates_ok = abs(lifted.rates[0] - 1.5) <= 1e-12 and abs(lifted.rates[1] - 0.79248) <= 5e-6
    rng = np.random.default_rng([SEED, 104])
    worst = 0.0
    for _ in range(50):
        b = codes.random_adder_code(rng)
        diff = codes.error_probability(codes.ghz_lift(b)).per_message_errors - codes.base_error_matrix_for_lift(b)
        worst = max(worst, float(np.max(np.abs(diff))))
    ok = r.best_value <= 2.5 + 1e-6 and rates_ok and err <= 1e-12 and worst <= 1e-10
    return ok, (
        f"optimizer {r.best_value:.9f}, lifted rates ({lifted.rates[0]:.5f}, {lifted.rates[1]:.5f}), "
        f"error {err:.2e}, random-code gap {worst:.2e}"
    )


def c05_dense_coding():
    perf = codes.error_probability(codes.dense_coding_code())
    ok = perf.per_message_errors.size == 4 and perf.max_message_error <= 1e-12
    return ok, f"max message error {perf.max_message_error:.2e}"


def c06_measurement_lemma():
    s = verify.lemma_suite(SEED, count=1000)
    return s.ok and s.total == 1000, f"{s.passed}/{s.total}, smallest gap {s.worst:.3e}"


def c07_pair_mixture_and_sandwich():
    pm = verify.pair_mixture_suite(SEED, count=500)
    sw = verify.sandwich_suite()
    ok = pm.ok and pm.total == 500 and sw.ok and sw.total == 101
    return ok, f"pair mixture {pm.passed}/{pm.total} (worst {pm.worst:.1e}), sandwich {sw.passed}/{sw.total}"


def c08_schur_vs_oracle():
    gaps = [abs(schur.quantum_rate_sum(L) - (2 * L - schur.tau_entropy_oracle(L))) for L in (1, 2, 3, 4)]
    l3 = schur.quantum_rate_sum(3)
    l2 = schur.quantum_rate_sum(2)
    ok = max(gaps) <= 1e-9 and abs(l3 - 4) <= 1e-12 and abs(l2 - 3.188722) <= 1e-6
    return ok, f"max oracle gap {max(gaps):.1e}, L=2 {l2:.9f}, L=3 {l3!r}, L=4 {schur.quantum_rate_sum(4):.9f}"


def c09_asymptotic_slopes():
    q = schur.quantum_rate_sum(1024, "log") - schur.quantum_rate_sum(512, "log")
    c = schur.classical_rate_sum(1024) - schur.classical_rate_sum(512)
    ok = abs(q - 1.5) <= 0.1 and abs(c - 0.5) <= 0.05
    return ok, f"quantum slope {q:.6f}, classical slope {c:.6f}"


def c10_shared_randomness_wrapper():
    base = codes.AdderCode(1, ("0", "1"), ("0", "1"), {(0,): (0, 0), (1,): (0, 1), (2,): (1, 1)})
    base_errors = codes.classical_code_performance(base).per_message_errors.ravel().tolist()
    wrapped = codes.wrap_shared_randomness(base).performance()
    ok = base_errors == [0, 0, 1, 0] and float(np.max(np.abs(wrapped.per_message_errors - 0.25))) <= 1e-12
    rng = np.random.default_rng([SEED, 110])
    worst = 0.0
    for _ in range(20):
        b = codes.random_adder_code(rng)
        perf = codes.wrap_shared_randomness(b).performance()
        worst = max(worst, abs(perf.max_message_error - codes.classical_code_performance(b).average_error))
    ok = ok and worst <= 1e-12
    return ok, f"wrapped errors {sorted(set(wrapped.per_message_errors.ravel().tolist()))}, random gap {worst:.1e}"


def c11_channel_identities():
    suites = [verify.idempotence_suite(SEED), verify.bell_suite(SEED), verify.pinching_suite(SEED)]
    ok = all(s.ok for s in suites) and all(s.total >= 200 for s in suites)
    return ok, ", ".join(f"{s.name} {s.passed}/{s.total} (worst {s.worst:.1e})" for s in suites)


CRITERIA = [
    c01_unassisted_sum_capacity,
    c02_unassisted_bound_maximizer,
    c03_two_ebit_pauli,
    c04_ghz_bound_and_code,
    c05_dense_coding,
    c06_measurement_lemma,
    c07_pair_mixture_and_sandwich,
    c08_schur_vs_oracle,
    c09_asymptotic_slopes,
    c10_shared_randomness_wrapper,
    c11_channel_identities,
]


def report_line(index: int, fn, ok: bool, detail: str) -> str:
    name = fn.__name__.split("_", 1)[1].replace("_", " ")
    return f"{'PASS' if ok else 'FAIL'} criterion {index:2d} ({name}): {detail}"


@pytest.mark.parametrize("index, fn", list(enumerate(CRITERIA, 1)), ids=[f.__name__ for f in CRITERIA])
def test_criterion(index, fn, acceptance_report):
    ok, detail = fn()
    line = report_line(index, fn, ok, detail)
    acceptance_report.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for i, f in enumerate(CRITERIA, 1):
        print(report_line(i, f, *f()), flush=True)
