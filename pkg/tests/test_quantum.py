import math

import numpy as np
import pytest

from parrondo_lab import checks, linalg, quantum
from parrondo_lab.errors import ParameterError
from parrondo_lab.quantum import CoinParams, GameAConfig, GameBConfig, InitialStateSpec, ParrondoConfig

S = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "coin, expected",
    [
        (CoinParams(0.5, 0.0, math.pi / 2), [[S, 1j * S], [1j * S, S]]),
        (CoinParams(1.0, 0.0, 0.0), [[1, 0], [0, 1]]),
        (CoinParams(0.0, 0.0, 0.0), [[0, 1], [-1, 0]]),
        (CoinParams(1.0, math.pi / 2, 0.0), [[1j, 0], [0, -1j]]),
    ],
)
def test_su2_examples(coin, expected):
    np.testing.assert_allclose(quantum.su2(coin), expected, atol=1e-15)


def test_su2_determinant_one(rng):
    for _ in range(20):
        v = quantum.su2(checks.random_coin(rng))
        assert np.linalg.det(v) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("bad", [dict(q=1.2), dict(q=-0.1), dict(q=0.5, phi=7.0), dict(q=0.5, theta=-0.1)])
def test_coin_params_validation(bad):
    with pytest.raises(ParameterError):
        CoinParams(**bad)


def test_shift_moves_right_and_has_period_M():
    J = quantum.shift(4)
    e0 = np.zeros(4)
    e0[0] = 1
    np.testing.assert_array_equal(J @ e0, [0, 1, 0, 0])
    np.testing.assert_array_equal(np.linalg.matrix_power(J, 4), np.eye(4))


def test_conditional_shift_follows_coin():
    S3 = quantum.conditional_shift(3)
    up = np.kron(np.eye(3)[0], [1, 0])
    down = np.kron(np.eye(3)[0], [0, 1])
    np.testing.assert_array_equal(S3 @ up, np.kron(np.eye(3)[1], [1, 0]))
    np.testing.assert_array_equal(S3 @ down, np.kron(np.eye(3)[2], [0, 1]))


def test_UB_reduces_to_UA_without_bias():
    ga = GameAConfig(4, 0.3, 1.1)
    gb = GameBConfig(4, 0.0, 0.0, 0.3, 1.1)
    np.testing.assert_allclose(quantum.build_UB(gb), quantum.build_UA(ga), atol=1e-15)


def test_combined_with_trivial_W_plays_game_A():
    # q_W = 1, phi_W = 0 makes W the identity, so a game coin in Q+ always selects game A
    cfg = ParrondoConfig(coin_w=CoinParams(1.0, 0.0, 0.0))
    U = quantum.build_U(cfg)
    ua = quantum.build_UA(cfg.game_a)
    np.testing.assert_allclose(U[0::2, 0::2], ua, atol=1e-15)


def test_initial_state_is_pure_and_localised():
    rho = quantum.initial_state(InitialStateSpec(walker_site=2), 3, combined=True)
    assert rho.shape == (12, 12)
    assert np.trace(rho @ rho).real == pytest.approx(1.0)
    walker = np.einsum("aibi->ab", rho.reshape(3, 4, 3, 4))
    np.testing.assert_allclose(walker, np.diag([0, 0, 1]), atol=1e-15)


def test_mixed_coin_state():
    rho = quantum.initial_state(InitialStateSpec(mixed_coin=True), 3, combined=False)
    assert np.trace(rho @ rho).real == pytest.approx(0.5)


def test_observable():
    O = quantum.observable_current(3, combined=False)
    np.testing.assert_array_equal(np.diag(O), [1, -1] * 3)
    assert quantum.observable_current(3, combined=True).shape == (12, 12)


def test_dimension_mismatch_rejected():
    U, rho, O = quantum.game_parts(GameAConfig())
    with pytest.raises(ParameterError):
        quantum.current_spectral(U, rho, np.eye(12))


def test_standard_configs_fair():
    assert abs(quantum.game_current(GameAConfig()).j) < 1e-10
    assert abs(quantum.game_current(GameBConfig()).j) < 1e-10


def test_standard_combined_game_has_current():
    j = quantum.game_current(ParrondoConfig()).j
    assert abs(j) > 1e-3


def test_cesaro_doubling_matches_stepwise(rng):
    for T in (1, 2, 7, 64, 1000):
        U, rho, O = quantum.game_parts(checks.random_game(rng, "C"))
        a = quantum.current_cesaro(U, rho, O, T).j
        b = quantum.current_cesaro(U, rho, O, T, stepwise=True).j
        assert a == pytest.approx(b, abs=1e-12)


def test_cesaro_rejects_bad_horizon():
    U, rho, O = quantum.game_parts(GameAConfig())
    for T in (0, -3, 2.5):
        with pytest.raises(ParameterError):
            quantum.current_cesaro(U, rho, O, T)


def test_cesaro_converges_like_one_over_T():
    rng = np.random.default_rng(77)
    for i in range(12):
        U, rho, O = quantum.game_parts(checks.random_game(rng, "ABC"[i % 3]))
        s = quantum.current_spectral(U, rho, O).j
        for T in (10**3, 10**4, 10**5):
            assert T * abs(quantum.current_cesaro(U, rho, O, T).j - s) < 100


def test_current_bounded(rng):
    for i in range(30):
        assert abs(quantum.game_current(checks.random_game(rng, "ABC"[i % 3])).j) <= 1 + 1e-12


def test_walker_start_site_irrelevant_for_game_A(rng):
    cfg = checks.random_game(rng, "A", M=5)
    ref = quantum.game_current(cfg).j
    for site in range(1, 5):
        assert quantum.game_current(cfg, InitialStateSpec(walker_site=site)).j == pytest.approx(ref, abs=1e-10)


def test_spectral_accepts_precomputed_decomposition():
    U, rho, O = quantum.game_parts(ParrondoConfig())
    dec = linalg.eig_unitary(U)
    assert quantum.current_spectral(U, rho, O, decomposition=dec).j == quantum.current_spectral(U, rho, O).j


def test_fingerprint_stable_and_distinct():
    a = quantum.game_current(GameAConfig()).fingerprint
    assert a == quantum.game_current(GameAConfig()).fingerprint
    assert a != quantum.game_current(GameAConfig(phi=0.1)).fingerprint
    assert len(a) == 16


def test_game_current_method_errors():
    with pytest.raises(ParameterError):
        quantum.game_current(GameAConfig(), method="cesaro")
    with pytest.raises(ParameterError):
        quantum.game_current(GameAConfig(), method="exact")


def test_wrap_phase():
    assert quantum.wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    assert quantum.wrap_phase(-math.pi / 2) == pytest.approx(1.5 * math.pi)


@pytest.mark.parametrize("cfg", [GameAConfig(), GameBConfig(), GameAConfig(M=5), GameBConfig(phi=0.0, theta=math.pi / 2)])
def test_coin_sign_invariance(cfg):
    plus = quantum.game_current(cfg, InitialStateSpec(coin_sign=1)).j
    minus = quantum.game_current(cfg, InitialStateSpec(coin_sign=-1)).j
    assert plus == pytest.approx(minus, abs=1e-10)
