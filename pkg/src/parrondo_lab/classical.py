"""Classical Parrondo games as Markov chains on the cycle Z/MZ.

Probability vectors are columns: ``p_{t+1} = L p_t`` with ``L[y, x]`` the
probability to hop from site ``x`` to site ``y``.  "Right" means ``x -> x+1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from parrondo_lab.errors import NumericalError, ParameterError

STATIONARY_TOL = 1e-13
STATIONARY_MAX_ITER = 10**6
STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class ClassicalGameParams:
    M: int
    eps1: float
    eps2: float

    def __post_init__(self):
        _check_cycle(self.M)
        for name, eps in (("eps1", self.eps1), ("eps2", self.eps2)):
            if not (np.isfinite(eps) and abs(eps) <= 0.5):
                raise ParameterError(f"{name}={eps} gives hop probabilities outside [0, 1] (need |{name}| <= 1/2)")


@dataclass(frozen=True)
class ClassicalConfig:
    """Game C on the cycle: game A with probability ``pA``, else game B."""

    M: int = 3
    eps1: float = 0.4
    eps2: float = 0.25
    pA: float = 0.5

    def __post_init__(self):
        ClassicalGameParams(self.M, self.eps1, self.eps2)
        if not (np.isfinite(self.pA) and 0.0 <= self.pA <= 1.0):
            raise ParameterError(f"pA={self.pA} must lie in [0, 1]")

    @property
    def params(self) -> ClassicalGameParams:
        return ClassicalGameParams(self.M, self.eps1, self.eps2)


@dataclass(frozen=True)
class StationaryResult:
    rho: np.ndarray
    current_matrix: np.ndarray
    scalar_current: float


def _check_cycle(M) -> None:
    if isinstance(M, bool) or int(M) != M or M < 3:
        raise ParameterError(f"cycle length M must be an integer >= 3, got {M}")


def _check_stochastic(L: np.ndarray) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ParameterError(f"transition matrix must be square, got shape {L.shape}")
    if np.any(L < -STOCHASTIC_TOL) or np.any(L > 1 + STOCHASTIC_TOL):
        raise ParameterError("transition matrix has entries outside [0, 1]")
    if np.max(np.abs(L.sum(axis=0) - 1.0)) > STOCHASTIC_TOL:
        raise ParameterError("transition matrix columns do not sum to 1")
    return L


def right_probabilities(params: ClassicalGameParams) -> np.ndarray:
    """Probability of a step to the right from each site under game B."""
    r = np.full(params.M, 0.5 + params.eps2)
    r[0] = 0.5 - params.eps1
    return r


def build_LB(params: ClassicalGameParams) -> np.ndarray:
    M = params.M
    right = right_probabilities(params)
    L = np.zeros((M, M))
    for x in range(M):
        L[(x + 1) % M, x] = right[x]
        L[(x - 1) % M, x] = 1.0 - right[x]
    return L


def build_LA(M: int) -> np.ndarray:
    return build_LB(ClassicalGameParams(M, 0.0, 0.0))


def mix(la, lb, pA: float) -> np.ndarray:
    """Transition matrix of game C: play A with probability ``pA``, else B."""
    if not 0.0 <= pA <= 1.0:
        raise ParameterError(f"pA must lie in [0, 1], got {pA}")
    la = _check_stochastic(la)
    lb = _check_stochastic(lb)
    if la.shape != lb.shape:
        raise ParameterError(f"dimension mismatch: {la.shape} vs {lb.shape}")
    return pA * la + (1.0 - pA) * lb


def stationary(L, tol: float = STATIONARY_TOL, max_iter: int = STATIONARY_MAX_ITER) -> np.ndarray:
    """Stationary distribution by power iteration.

    Iterates the lazy chain ``(L + I)/2``, which has the same fixed point but
    is aperiodic, so even cycle lengths converge as well.
    """
    L = _check_stochastic(L)
    n = L.shape[0]
    lazy = 0.5 * (L + np.eye(n))
    p = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = lazy @ p
        nxt /= nxt.sum()
        if np.max(np.abs(L @ nxt - nxt)) <= tol:
            return np.clip(nxt, 0.0, None) / np.clip(nxt, 0.0, None).sum()
        p = nxt
    raise NumericalError(f"power iteration did not reach tol={tol:g} in {max_iter} iterations")


def current(L, rho) -> StationaryResult:
    """Probability current ``j = L P - P L^T`` with ``P = diag(rho)``.

    ``j[x, y]`` is the net flow from ``y`` to ``x``.  The scalar current is
    the mean displacement per step, ``sum_x j[x+1, x]``.
    """
    L = np.asarray(L, dtype=float)
    rho = np.asarray(rho, dtype=float)
    P = np.diag(rho)
    j = L @ P - P @ L.T
    M = len(rho)
    scalar = float(sum(j[(x + 1) % M, x] for x in range(M)))
    return StationaryResult(rho=rho, current_matrix=j, scalar_current=scalar)


def game_matrix(params: ClassicalGameParams, pA: float) -> np.ndarray:
    return mix(build_LA(params.M), build_LB(params), pA)


def scalar_current(params: ClassicalGameParams, pA: float = 0.0) -> float:
    L = game_matrix(params, pA)
    return current(L, stationary(L)).scalar_current


def fair_eps1(eps2: float) -> float:
    """eps1 that makes game B fair on the 3-cycle for a given eps2."""
    eps1 = 2.0 * eps2 / (4.0 * eps2 * eps2 + 1.0)
    if not abs(eps1) <= 0.5 or not abs(eps2) <= 0.5:
        raise ParameterError(f"eps2={eps2} does not give valid probabilities")
    return eps1


def fair_eps1_numeric(M: int, eps2: float, xtol: float = 1e-14) -> float:
    """Root of game B's scalar current in eps1, for any cycle length.

    Searches eps1 in [-1/2, 1/2]; raises ParameterError when the current does
    not change sign over that range.
    """
    _check_cycle(M)

    def f(e1):
        return scalar_current(ClassicalGameParams(M, e1, eps2))

    lo, hi = -0.5, 0.5
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ParameterError(f"no fair eps1 in [-1/2, 1/2] for M={M}, eps2={eps2}")
    return float(brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))


def classical_current_curve(M: int, eps1: float, eps2: float, grid) -> list[tuple[float, float]]:
    params = ClassicalGameParams(M, eps1, eps2)
    return [(float(pA), scalar_current(params, float(pA))) for pA in grid]


def monte_carlo_current(
    params: ClassicalGameParams,
    pA: float,
    steps: int = 10**7,
    walkers: int = 1000,
    burn_in: int = 200,
    seed: int = 0,
) -> float:
    """Empirical displacement per step from simulating the game rules directly.

    ``walkers`` independent walkers start at site 0; each step every walker
    picks game A with probability ``pA`` and then hops right with the rule's
    probability.  The first ``burn_in`` steps are discarded.  ``steps`` is the
    total number of counted steps over all walkers.
    """
    if not 0.0 <= pA <= 1.0:
        raise ParameterError(f"pA must lie in [0, 1], got {pA}")
    rng = np.random.default_rng(seed)
    M = params.M
    per_walker = max(1, steps // walkers)
    x = np.zeros(walkers, dtype=np.int64)
    right_b = right_probabilities(params)
    total = 0
    for t in range(burn_in + per_walker):
        play_a = rng.random(walkers) < pA
        p_right = np.where(play_a, 0.5, right_b[x])
        step = np.where(rng.random(walkers) < p_right, 1, -1)
        x = (x + step) % M
        if t >= burn_in:
            total += int(step.sum())
    return total / (per_walker * walkers)
