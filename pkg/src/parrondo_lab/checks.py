"""Randomized self-check suite behind ``parrondo-lab check``.

Each group evaluates one invariant on a handful of random inputs and reports
the worst deviation against its tolerance.  Sample counts are small so the
whole suite runs in a few seconds; the pytest suite covers the same ground at
full size.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from parrondo_lab import classical, linalg, quantum
from parrondo_lab.quantum import CoinParams, GameAConfig, GameBConfig, InitialStateSpec, ParrondoConfig


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    max_error: float
    tol: float


def random_coin(rng, q=None) -> CoinParams:
    return CoinParams(
        float(rng.uniform()) if q is None else q,
        float(rng.uniform(0, 2 * math.pi)),
        float(rng.uniform(0, 2 * math.pi)),
    )


def random_game(rng, kind: str, M: int = 3):
    """Random game configuration of kind ``A``, ``B`` or ``C``."""
    ga = GameAConfig(M, float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0, 2 * math.pi)))
    gb = GameBConfig(
        M,
        float(rng.uniform(-0.5, 0.5)),
        float(rng.uniform(-0.5, 0.5)),
        float(rng.uniform(0, 2 * math.pi)),
        float(rng.uniform(0, 2 * math.pi)),
    )
    if kind == "A":
        return ga
    if kind == "B":
        return gb
    return ParrondoConfig(ga, gb, random_coin(rng))


def _walk_with_shift(J: np.ndarray, coin: np.ndarray) -> np.ndarray:
    M = J.shape[0]
    S = np.kron(J, quantum.P_PLUS) + np.kron(J.conj().T, quantum.P_MINUS)
    return S @ np.kron(np.eye(M), coin)


def _result(name, errors, tol) -> CheckResult:
    worst = max(errors) if errors else 0.0
    return CheckResult(name, bool(worst <= tol), len(errors), float(worst), tol)


def check_unitarity(rng, n, shift_perturbation=0.0):
    errs = []
    for _ in range(n):
        M = int(rng.integers(3, 6))
        J = np.array(quantum.shift(M))
        if shift_perturbation:
            J[0, 0] += shift_perturbation
        coin = quantum.su2(random_coin(rng))
        errs += [linalg.unitarity_error(J), linalg.unitarity_error(coin), linalg.unitarity_error(_walk_with_shift(J, coin))]
        for kind in "ABC":
            U, _, _ = quantum.game_parts(random_game(rng, kind, M))
            errs.append(linalg.unitarity_error(U))
    return _result("unitarity", errs, linalg.UNITARY_TOL)


def check_shift_period(rng, n):
    errs = []
    for M in range(3, 3 + n):
        J = quantum.shift(M)
        errs.append(float(np.max(np.abs(np.linalg.matrix_power(J, M) - np.eye(M)))))
    return _result("shift_period", errs, 0.0)


def _decompositions(rng, n):
    for i in range(n):
        U, _, _ = quantum.game_parts(random_game(rng, "ABC"[i % 3]))
        yield U, linalg.eig_unitary(U)


def check_projectors(rng, n):
    errs = []
    for U, dec in _decompositions(rng, n):
        e = dec.invariant_errors()
        errs.append(max(e["idempotency"], e["hermiticity"], e["completeness"], e["orthogonality"]))
    return _result("projectors", errs, 1e-9)


def check_reconstruction(rng, n):
    errs = [dec.invariant_errors(U)["reconstruction"] for U, dec in _decompositions(rng, n)]
    return _result("reconstruction", errs, 1e-8)


def _evolved_states(rng, n, steps=20):
    for i in range(n):
        U, rho, _ = quantum.game_parts(random_game(rng, "ABC"[i % 3]))
        for _ in range(steps):
            rho = U @ rho @ U.conj().T
        yield linalg.density_errors(rho)


def check_density_trace(rng, n):
    errs = [max(e["hermiticity"], e["trace"]) for e in _evolved_states(rng, n)]
    return _result("density_trace_hermiticity", errs, linalg.DENSITY_TOL)


def check_density_psd(rng, n):
    errs = [e["negativity"] for e in _evolved_states(rng, n)]
    return _result("density_psd", errs, linalg.PSD_TOL)


def check_eigenphase_relation(rng, n):
    errs = []
    for _ in range(n):
        M = int(rng.integers(3, 6))
        coin = random_coin(rng)
        dec = linalg.eig_unitary(quantum.coined_walk(M, coin))
        xi = 2 * math.pi * np.arange(M) / M
        targets = math.sqrt(coin.q) * np.cos(coin.phi + xi)
        errs += [float(np.min(np.abs(math.cos(lam) - targets))) for lam in dec.phases]
    return _result("eigenphase_relation", errs, 1e-9)


def _classical_samples(rng, n):
    for _ in range(n):
        M = int(rng.integers(3, 7))
        p = classical.ClassicalGameParams(M, float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5)))
        L = classical.game_matrix(p, float(rng.uniform()))
        yield L, classical.current(L, classical.stationary(L)).current_matrix


def check_classical_chain(rng, n):
    errs = []
    for L, j in _classical_samples(rng, n):
        errs += [float(np.max(np.abs(L.sum(axis=0) - 1))), float(np.max(np.abs(j + j.T)))]
    return _result("classical_stochastic_antisymmetric", errs, 1e-12)


def check_classical_row_sums(rng, n):
    errs = [float(np.max(np.abs(j.sum(axis=1)))) for _, j in _classical_samples(rng, n)]
    return _result("classical_row_sums", errs, 1e-10)


def check_classical_fairness(rng, n):
    errs = []
    for eps2 in rng.uniform(0.0, 0.45, n):
        p = classical.ClassicalGameParams(3, classical.fair_eps1(float(eps2)), float(eps2))
        errs.append(abs(classical.scalar_current(p)))
    return _result("classical_fairness", errs, 1e-12)


def check_quantum_fairness(rng, n):
    cfgs = [GameAConfig(3, 0.0, math.pi / 2), GameBConfig(phi=math.pi / 2, theta=0.0), GameBConfig(phi=0.0, theta=math.pi / 2)]
    errs = [abs(quantum.game_current(c).j) for c in cfgs]
    for _ in range(n):
        errs.append(abs(quantum.game_current(quantum.null_config(coin_w=random_coin(rng))).j))
    return _result("quantum_fairness", errs, 1e-10)


def check_mixed_state(rng, n):
    errs = []
    for i in range(n):
        cfg = random_game(rng, "ABC"[i % 3])
        U, _, O = quantum.game_parts(cfg)
        errs.append(abs(quantum.current_spectral(U, quantum.maximally_mixed(U.shape[0]), O).j))
        if not isinstance(cfg, ParrondoConfig):
            _, rho, _ = quantum.game_parts(cfg, InitialStateSpec(mixed_coin=True))
            errs.append(abs(quantum.current_spectral(U, rho, O).j))
    return _result("mixed_state", errs, 1e-12)


def check_spectral_vs_cesaro(rng, n):
    errs = []
    for i in range(n):
        U, rho, O = quantum.game_parts(random_game(rng, "ABC"[i % 3]))
        errs.append(abs(quantum.current_spectral(U, rho, O).j - quantum.current_cesaro(U, rho, O, 10**5).j))
    return _result("spectral_vs_cesaro", errs, 1e-3)


GROUPS = (
    check_unitarity,
    check_shift_period,
    check_projectors,
    check_reconstruction,
    check_density_trace,
    check_density_psd,
    check_eigenphase_relation,
    check_classical_chain,
    check_classical_row_sums,
    check_classical_fairness,
    check_quantum_fairness,
    check_mixed_state,
    check_spectral_vs_cesaro,
)


def run_checks(samples: int = 6, seed: int = 2024, shift_perturbation: float = 0.0) -> list[CheckResult]:
    """Run every property group; ``shift_perturbation`` corrupts J as a negative control."""
    rng = np.random.default_rng(seed)
    results = []
    for group in GROUPS:
        if group is check_unitarity:
            results.append(group(rng, samples, shift_perturbation))
        else:
            results.append(group(rng, samples))
    return results


def summary(results: list[CheckResult]) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "groups": [asdict(r) for r in results],
        "failures": [r.name for r in results if not r.passed],
    }
