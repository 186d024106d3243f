"""Seeded self-check suites run by ``qadder verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as ch
from . import codes, schur
from .info import entropy_sandwich, measurement_entropy_gap, pair_mixture_entropy, random_povm
from .linalg import projector, random_density, random_pure, von_neumann_entropy


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    worst: float

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def lemma_suite(seed: int, count: int = 1000) -> SuiteResult:
    """Entropy never exceeds outcome entropy plus average post-measurement entropy."""
    rng = _rng(seed, 1)
    worst, passed = np.inf, 0
    for k in range(count):
        d2 = 2 if k % 2 == 0 else 4
        if k % 4 < 2:
            rho = random_density(2 * d2, int(rng.integers(2**31)))
        else:
            # low-rank states keep the bound close to tight
            rho = projector(random_pure(2 * d2, rng))
        povm = random_povm(d2, int(rng.integers(2, 5)), rng)
        gap = measurement_entropy_gap(rho, povm, (2, d2))
        worst = min(worst, gap)
        passed += gap >= -1e-10
    return SuiteResult("measurement entropy bound", passed, count, float(worst))


def pair_mixture_suite(seed: int, count: int = 500) -> SuiteResult:
    rng = _rng(seed, 2)
    worst, passed = 0.0, 0
    for k in range(count):
        dim = 2 if k % 2 == 0 else 4
        v, w = random_pure(dim, rng), random_pure(dim, rng)
        direct = von_neumann_entropy((projector(v) + projector(w)) / 2)
        err = abs(pair_mixture_entropy(v, w) - direct)
        worst = max(worst, err)
        passed += err <= 1e-10
    return SuiteResult("pair mixture entropy", passed, count, worst)


def sandwich_suite() -> SuiteResult:
    xs = np.round(np.linspace(0, 1, 101), 2)
    worst, passed = np.inf, 0
    for x in xs:
        lo, mid, hi = entropy_sandwich(float(x))
        slack = min(mid - lo, hi - mid)
        worst = min(worst, slack)
        passed += lo <= mid <= hi
    return SuiteResult("entropy sandwich grid", passed, len(xs), float(worst))


def random_bell_diagonal(rng: np.random.Generator, bell: tuple) -> np.ndarray:
    w = rng.dirichlet(np.ones(4))
    return sum(wi * projector(b) for wi, b in zip(w, bell))


def bell_suite(seed: int, count: int = 200, psi_minus_sign: int = -1) -> SuiteResult:
    """Bell basis: orthonormal, flip phases (+,+,+,-), and fixed by the adder channel."""
    bell = ch.bell_states(psi_minus_sign)
    alpha = ch.adder_channel(2)
    gram = np.array([[np.vdot(a, b) for b in bell] for a in bell])
    structural = [
        float(np.max(np.abs(gram - np.eye(4)))),
        *(float(np.max(np.abs(ch.FLIP @ b - s * b))) for b, s in zip(bell, (1, 1, 1, -1))),
        *(float(np.max(np.abs(alpha(projector(b)) - projector(b)))) for b in bell),
    ]
    rng = _rng(seed, 3)
    errors = structural + [
        float(np.max(np.abs(alpha(rho) - rho))) for rho in (random_bell_diagonal(rng, bell) for _ in range(count))
    ]
    passed = sum(e <= 1e-10 for e in errors)
    return SuiteResult("Bell invariance", passed, len(errors), max(errors))


def pinching_suite(seed: int, count: int = 200) -> SuiteResult:
    rng = _rng(seed, 4)
    alpha = ch.adder_channel(2)
    sym, anti = ch.symmetric_projectors()
    worst, passed = 0.0, 0
    for _ in range(count):
        rho = random_density(4, int(rng.integers(2**31)))
        err = float(np.max(np.abs(alpha(rho) - (sym @ rho @ sym + anti @ rho @ anti))))
        worst = max(worst, err)
        passed += err <= 1e-10
    return SuiteResult("pinching identity", passed, count, worst)


def idempotence_suite(seed: int, count: int = 200) -> SuiteResult:
    rng = _rng(seed, 5)
    alpha = ch.adder_channel(2)
    worst, passed = 0.0, 0
    for _ in range(count):
        once = alpha(random_density(4, int(rng.integers(2**31))))
        err = float(np.max(np.abs(alpha(once) - once)))
        worst = max(worst, err)
        passed += err <= 1e-10
    return SuiteResult("adder idempotence", passed, count, worst)


def schur_suite() -> SuiteResult:
    errors = [abs(schur.quantum_rate_sum(L) - (2 * L - schur.tau_entropy_oracle(L))) for L in (1, 2, 3, 4)]
    return SuiteResult("rate-sum formula vs oracle", sum(e <= 1e-9 for e in errors), 4, max(errors))


def ghz_lift_suite(seed: int, count: int = 50) -> SuiteResult:
    rng = _rng(seed, 6)
    worst, passed = 0.0, 0
    for _ in range(count):
        base = codes.random_adder_code(rng)
        lifted = codes.error_probability(codes.ghz_lift(base)).per_message_errors
        err = float(np.max(np.abs(lifted - codes.base_error_matrix_for_lift(base))))
        worst = max(worst, err)
        passed += err <= 1e-10
    return SuiteResult("GHZ lift error equality", passed, count, worst)


def run_all(seed: int, psi_minus_sign: int = -1) -> list:
    return [
        lemma_suite(seed),
        pair_mixture_suite(seed),
        sandwich_suite(),
        bell_suite(seed, psi_minus_sign=psi_minus_sign),
        pinching_suite(seed),
        idempotence_suite(seed),
        schur_suite(),
        ghz_lift_suite(seed),
    ]
