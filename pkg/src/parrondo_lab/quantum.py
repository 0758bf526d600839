"""Quantum Parrondo games: coined walks on the cycle Z/MZ.

Conventions
-----------
* Composite index order is walker (slowest), walk coin, game coin.
* Coin basis state 0 is "right": ``P+ = |0><0|`` triggers the shift ``J``,
  ``P- = |1><1|`` triggers ``J^dagger``.
* ``J|x> = |x+1 mod M>``.
* In the combined game ``Q+ = |0><0|`` on the game coin selects game A and
  ``Q- = |1><1|`` selects game B.

The current is the long-time average of ``<P+ - P->`` evaluated on the state
after each full step (coin toss, then shift).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from parrondo_lab import linalg
from parrondo_lab.errors import NumericalError, ParameterError

TWO_PI = 2.0 * math.pi

P_PLUS = np.array([[1, 0], [0, 0]], dtype=np.complex128)
P_MINUS = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _check_phase(name: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 <= value <= TWO_PI):
        raise ParameterError(f"{name}={value} must lie in [0, 2*pi]")


def _check_cycle(M) -> None:
    if isinstance(M, bool) or int(M) != M or M < 3:
        raise ParameterError(f"cycle length M must be an integer >= 3, got {M}")


def wrap_phase(x: float) -> float:
    """Reduce an angle into [0, 2*pi)."""
    y = math.fmod(x, TWO_PI)
    return y + TWO_PI if y < 0 else y


@dataclass(frozen=True)
class CoinParams:
    """Parameters (q, phi, theta) of one SU(2) coin."""

    q: float
    phi: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.q) and 0.0 <= self.q <= 1.0):
            raise ParameterError(f"q={self.q} must lie in [0, 1]")
        _check_phase("phi", self.phi)
        _check_phase("theta", self.theta)


@dataclass(frozen=True)
class GameAConfig:
    M: int = 3
    phi: float = 0.0
    theta: float = math.pi / 2

    def __post_init__(self):
        _check_cycle(self.M)
        _check_phase("phiA", self.phi)
        _check_phase("thetaA", self.theta)

    @property
    def coin(self) -> CoinParams:
        return CoinParams(0.5, self.phi, self.theta)


@dataclass(frozen=True)
class GameBConfig:
    M: int = 3
    eps1: float = 0.4
    eps2: float = 0.25
    phi: float = math.pi / 2
    theta: float = 0.0

    def __post_init__(self):
        _check_cycle(self.M)
        for name, q in (("eps1", 0.5 - self.eps1), ("eps2", 0.5 + self.eps2)):
            if not (math.isfinite(q) and 0.0 <= q <= 1.0):
                raise ParameterError(f"{name} gives coin probability {q} outside [0, 1]")
        _check_phase("phiB", self.phi)
        _check_phase("thetaB", self.theta)

    @property
    def coin_site0(self) -> CoinParams:
        return CoinParams(0.5 - self.eps1, self.phi, self.theta)

    @property
    def coin_other(self) -> CoinParams:
        return CoinParams(0.5 + self.eps2, self.phi, self.theta)


@dataclass(frozen=True)
class ParrondoConfig:
    game_a: GameAConfig = field(default_factory=GameAConfig)
    game_b: GameBConfig = field(default_factory=GameBConfig)
    coin_w: CoinParams = field(default_factory=lambda: CoinParams(0.2, 0.0, math.pi / 2))

    def __post_init__(self):
        if self.game_a.M != self.game_b.M:
            raise ParameterError(f"games A and B must share M ({self.game_a.M} != {self.game_b.M})")

    @property
    def M(self) -> int:
        return self.game_a.M


def null_config(M: int = 3, coin_w: CoinParams | None = None, eps1=0.4, eps2=0.25) -> ParrondoConfig:
    """theta_A = theta_B = pi/2 and phi_A = phi_B = 0: no current for any W."""
    return ParrondoConfig(
        GameAConfig(M, 0.0, math.pi / 2),
        GameBConfig(M, eps1, eps2, 0.0, math.pi / 2),
        coin_w if coin_w is not None else CoinParams(0.2, 0.0, math.pi / 2),
    )


@dataclass(frozen=True)
class InitialStateSpec:
    """Initial product state.

    The walker sits on ``walker_site``; each coin is the projector onto
    ``(1, sign)/sqrt(2)`` or, when its ``mixed_*`` flag is set, ``I/2``.
    """

    walker_site: int = 0
    coin_sign: int = 1
    game_coin_sign: int = 1
    mixed_coin: bool = False
    mixed_game_coin: bool = False

    def __post_init__(self):
        for name in ("coin_sign", "game_coin_sign"):
            if getattr(self, name) not in (1, -1):
                raise ParameterError(f"{name} must be +1 or -1")


@dataclass(frozen=True)
class CurrentResult:
    j: float
    method: str
    T: int | None = None
    fingerprint: str | None = None


def su2(c: CoinParams) -> np.ndarray:
    sq = math.sqrt(c.q)
    sr = math.sqrt(1.0 - c.q)
    v = np.array(
        [
            [sq * np.exp(1j * c.phi), sr * np.exp(1j * c.theta)],
            [-sr * np.exp(-1j * c.theta), sq * np.exp(-1j * c.phi)],
        ]
    )
    return linalg.as_unitary(v)


def shift(M: int) -> np.ndarray:
    _check_cycle(M)
    J = np.zeros((M, M), dtype=np.complex128)
    for x in range(M):
        J[(x + 1) % M, x] = 1.0
    return linalg.as_unitary(J)


def conditional_shift(M: int) -> np.ndarray:
    J = shift(M)
    return np.kron(J, P_PLUS) + np.kron(J.conj().T, P_MINUS)


def coined_walk(M: int, coin: CoinParams) -> np.ndarray:
    """One step of a walk with the same coin everywhere: toss, then shift."""
    return linalg.as_unitary(conditional_shift(M) @ np.kron(np.eye(M), su2(coin)))


def build_UA(cfg: GameAConfig) -> np.ndarray:
    return coined_walk(cfg.M, cfg.coin)


def build_UB(cfg: GameBConfig) -> np.ndarray:
    M = cfg.M
    p1 = np.zeros((M, M))
    p1[0, 0] = 1.0
    p2 = np.eye(M) - p1
    toss = np.kron(p1, su2(cfg.coin_site0)) + np.kron(p2, su2(cfg.coin_other))
    return linalg.as_unitary(conditional_shift(M) @ toss)


def build_U(cfg: ParrondoConfig) -> np.ndarray:
    ua = build_UA(cfg.game_a)
    ub = build_UB(cfg.game_b)
    select = np.kron(ua, P_PLUS) + np.kron(ub, P_MINUS)
    return linalg.as_unitary(select @ np.kron(np.eye(2 * cfg.M), su2(cfg.coin_w)))


def _coin_state(sign: int, mixed: bool) -> np.ndarray:
    if mixed:
        return 0.5 * np.eye(2, dtype=np.complex128)
    return 0.5 * np.array([[1, sign], [sign, 1]], dtype=np.complex128)


def initial_state(spec: InitialStateSpec, M: int, combined: bool) -> np.ndarray:
    _check_cycle(M)
    walker = np.zeros((M, M), dtype=np.complex128)
    walker[spec.walker_site % M, spec.walker_site % M] = 1.0
    rho = np.kron(walker, _coin_state(spec.coin_sign, spec.mixed_coin))
    if combined:
        rho = np.kron(rho, _coin_state(spec.game_coin_sign, spec.mixed_game_coin))
    return linalg.as_density_matrix(rho)


def maximally_mixed(dim: int) -> np.ndarray:
    return linalg.as_density_matrix(np.eye(dim, dtype=np.complex128) / dim)


def observable_current(M: int, combined: bool) -> np.ndarray:
    """``I_M (x) (P+ - P-)``, padded with ``I_2`` for the game coin."""
    _check_cycle(M)
    o = np.kron(np.eye(M), P_PLUS - P_MINUS)
    if combined:
        o = np.kron(o, np.eye(2))
    return o


def _check_dims(U, rho0, O):
    if not (U.shape == rho0.shape == O.shape):
        raise ParameterError(f"dimension mismatch: U {U.shape}, rho0 {rho0.shape}, O {O.shape}")


def current_spectral(U, rho0, O, phase_tol: float = linalg.DEFAULT_PHASE_TOL, *, decomposition=None) -> CurrentResult:
    """Long-time average of ``Tr(O rho_t)`` from the eigenspace projectors of U.

    ``j = sum_lambda Tr(O P_lambda rho0 P_lambda)``.  A precomputed
    :class:`~parrondo_lab.linalg.SpectralDecomposition` may be passed to skip
    the eigensolve.
    """
    U = np.asarray(U)
    rho0 = np.asarray(rho0)
    O = np.asarray(O)
    _check_dims(U, rho0, O)
    spec = decomposition if decomposition is not None else linalg.eig_unitary(U, phase_tol)
    total = 0.0 + 0.0j
    for c in spec.clusters:
        b = c.basis
        # Tr(O P rho P) with P = B B^dagger, evaluated in the cluster subspace
        total += np.trace((b.conj().T @ O @ b) @ (b.conj().T @ rho0 @ b))
    if abs(total.imag) > 1e-10:
        raise NumericalError(f"current has imaginary part {total.imag:.3e}")
    return CurrentResult(float(total.real), "spectral")


def current_cesaro(U, rho0, O, T: int, *, stepwise: bool = False) -> CurrentResult:
    """Finite-horizon average ``(1/T) sum_{t=1..T} Tr(O rho_t)``.

    ``rho_t = U rho_{t-1} U^dagger``.  By default the sum of states is built by
    binary doubling (``O(log T)`` products); ``stepwise=True`` iterates the
    recursion literally.  Neither path uses an eigendecomposition.
    """
    if isinstance(T, bool) or int(T) != T or T < 1:
        raise ParameterError(f"T must be a positive integer, got {T}")
    T = int(T)
    U = np.asarray(U, dtype=np.complex128)
    rho0 = np.asarray(rho0, dtype=np.complex128)
    O = np.asarray(O, dtype=np.complex128)
    _check_dims(U, rho0, O)
    if stepwise:
        rho = rho0
        acc = 0.0
        Ud = U.conj().T
        for _ in range(T):
            rho = U @ rho @ Ud
            acc += np.trace(O @ rho).real
        return CurrentResult(acc / T, "cesaro", T)

    # sum_{t=1..n} U^t rho0 U^-t for n = T, assembled from its binary digits:
    # S(2n) = S(n) + U^n S(n) U^-n, S(n+1) = S(n) + U^{n+1} rho0 U^-(n+1)
    power = np.eye(U.shape[0], dtype=np.complex128)
    total = np.zeros_like(rho0)
    for bit in bin(T)[2:]:
        total = total + power @ total @ power.conj().T
        power = power @ power
        if bit == "1":
            power = U @ power
            total = total + power @ rho0 @ power.conj().T
    return CurrentResult(float(np.trace(O @ total).real) / T, "cesaro", T)


def fingerprint(cfg, init: InitialStateSpec) -> str:
    return hashlib.sha256(repr((cfg, init)).encode()).hexdigest()[:16]


def game_parts(cfg, init: InitialStateSpec | None = None):
    """Build ``(U, rho0, O)`` for a game A, game B, or combined configuration."""
    init = init or InitialStateSpec()
    if isinstance(cfg, GameAConfig):
        U, combined = build_UA(cfg), False
    elif isinstance(cfg, GameBConfig):
        U, combined = build_UB(cfg), False
    elif isinstance(cfg, ParrondoConfig):
        U, combined = build_U(cfg), True
    else:
        raise ParameterError(f"unsupported game configuration {type(cfg).__name__}")
    return U, initial_state(init, cfg.M, combined), observable_current(cfg.M, combined)


def game_current(
    cfg,
    init: InitialStateSpec | None = None,
    method: str = "spectral",
    T: int | None = None,
    phase_tol: float = linalg.DEFAULT_PHASE_TOL,
) -> CurrentResult:
    init = init or InitialStateSpec()
    U, rho0, O = game_parts(cfg, init)
    if method == "spectral":
        res = current_spectral(U, rho0, O, phase_tol)
    elif method == "cesaro":
        if T is None:
            raise ParameterError("cesaro method needs a horizon T")
        res = current_cesaro(U, rho0, O, T)
    else:
        raise ParameterError(f"unknown method {method!r} (spectral | cesaro)")
    return CurrentResult(res.j, res.method, res.T, fingerprint(cfg, init))
