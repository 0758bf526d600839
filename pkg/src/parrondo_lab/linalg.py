"""Dense complex matrix kernel.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Matrices returned from the public functions are marked read-only so they can
be shared freely between callers.

The eigensolver for unitaries avoids a general non-symmetric solver: a unitary
``U`` is normal, so ``H1 = (U + U^dagger)/2`` and ``H2 = (U - U^dagger)/(2i)``
are commuting Hermitian matrices with the same eigenvectors as ``U``.  They are
diagonalized with a cyclic complex Jacobi method and the eigenphase of each
eigenvector is read off as ``atan2(<H2>, <H1>)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from parrondo_lab.errors import NumericalError, ParameterError

UNITARY_TOL = 1e-12
DENSITY_TOL = 1e-12
PSD_TOL = 1e-10
DEFAULT_PHASE_TOL = 1e-8

JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 60

# Generic mixing angle for H1 + tan(a) H2.  Two distinct eigenphases collide in
# the mixed matrix only if they sum to 2a (mod 2 pi); an irrational multiple of
# pi keeps that away from the rational phases of the walk unitaries.
_MIX = 0.5772156649015329
# Eigenvalues of the mixed matrix closer than this are re-resolved with the
# orthogonal combination of H1 and H2.
_REFINE_GAP = 1e-6


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(a) -> np.ndarray:
    """Validate a square, finite matrix and return a complex copy."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ParameterError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError("matrix has non-finite entries")
    return m


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the left factor carries the slow index."""
    return _freeze(np.kron(as_matrix(a), as_matrix(b)))


def dagger(a) -> np.ndarray:
    return _freeze(as_matrix(a).conj().T.copy())


def unitarity_error(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def as_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``u`` as a frozen complex array after checking ``U^dagger U = I``."""
    m = as_matrix(u)
    err = unitarity_error(m)
    if err > tol:
        raise ParameterError(f"matrix is not unitary: max|U^dagger U - I| = {err:.3e} > {tol:.1e}")
    return _freeze(m)


def density_errors(rho) -> dict[str, float]:
    """Deviations of ``rho`` from a valid density matrix.

    Keys are ``hermiticity`` (max-norm of rho - rho^dagger), ``trace``
    (|Tr rho - 1|) and ``negativity`` (minus the smallest eigenvalue, clipped
    at zero).
    """
    rho = np.asarray(rho, dtype=np.complex128)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    hsym = 0.5 * (rho + rho.conj().T)
    lowest = float(jacobi_eigh(hsym)[0][0])
    return {"hermiticity": herm, "trace": trace, "negativity": max(0.0, -lowest)}


def as_density_matrix(rho, tol: float = DENSITY_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    m = as_matrix(rho)
    err = density_errors(m)
    if err["hermiticity"] > tol:
        raise ParameterError(f"density matrix is not Hermitian ({err['hermiticity']:.3e})")
    if err["trace"] > tol:
        raise ParameterError(f"density matrix trace differs from 1 by {err['trace']:.3e}")
    if err["negativity"] > psd_tol:
        raise ParameterError(f"density matrix has eigenvalue {-err['negativity']:.3e} < 0")
    return _freeze(m)


@numba.njit(cache=True)
def _jacobi_kernel(h, tol, max_sweeps):  # pragma: no cover - compiled
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    if scale == 0.0:
        return a, v, 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol * scale:
            return a, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = math.hypot(apq.real, apq.imag)
                if g == 0.0:
                    continue
                # phase e = apq/|apq| removed by diag(1, conj(e)), then a real rotation
                e = apq / g
                ec = e.conjugate()
                tau = (a[q, q].real - a[p, p].real) / (2.0 * g)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * akp + c * ec * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * apk + c * e * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * vkp + c * ec * vkq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return a, v, -1


def jacobi_eigh(h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` in ascending order and
    orthonormal eigenvectors in the columns of ``v``.

    Raises:
        NumericalError: if the off-diagonal norm is still above
            ``tol * ||h||_F`` after ``max_sweeps`` sweeps.
    """
    m = np.ascontiguousarray(h, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {m.shape}")
    m = 0.5 * (m + m.conj().T)
    a, v, sweeps = _jacobi_kernel(m, tol, max_sweeps)
    if sweeps < 0:
        raise NumericalError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``vectors``."""
    q = np.array(vectors, dtype=np.complex128)
    for k in range(q.shape[1]):
        for i in range(k):
            q[:, k] -= np.vdot(q[:, i], q[:, k]) * q[:, i]
        norm = np.linalg.norm(q[:, k])
        if norm < 1e-8:
            raise NumericalError("eigenvectors of a cluster are linearly dependent")
        q[:, k] /= norm
    return q


@dataclass(frozen=True)
class Cluster:
    """One eigenspace: phase in (-pi, pi], orthonormal basis and projector."""

    phase: float
    basis: np.ndarray
    projector: np.ndarray

    @property
    def multiplicity(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class SpectralDecomposition:
    clusters: tuple[Cluster, ...]

    @property
    def dim(self) -> int:
        return self.clusters[0].projector.shape[0]

    @property
    def phases(self) -> np.ndarray:
        return np.array([c.phase for c in self.clusters])

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.clusters]

    def reconstruct(self) -> np.ndarray:
        return sum(np.exp(1j * c.phase) * c.projector for c in self.clusters)

    def invariant_errors(self, u=None) -> dict[str, float]:
        """Max-norm violations of the projector identities (and of the
        reconstruction, when the original unitary is passed)."""
        eye = np.eye(self.dim)
        ps = [c.projector for c in self.clusters]
        out = {
            "idempotency": max(float(np.max(np.abs(p @ p - p))) for p in ps),
            "hermiticity": max(float(np.max(np.abs(p - p.conj().T))) for p in ps),
            "completeness": float(np.max(np.abs(sum(ps) - eye))),
            "orthogonality": max(
                (float(np.max(np.abs(p @ r))) for i, p in enumerate(ps) for r in ps[i + 1 :]),
                default=0.0,
            ),
        }
        if u is not None:
            out["reconstruction"] = float(np.max(np.abs(self.reconstruct() - np.asarray(u))))
        return out


def canonical_phase(x: float) -> float:
    """Map an angle into (-pi, pi]."""
    y = math.remainder(x, 2.0 * math.pi)
    return math.pi if y <= -math.pi else y


def _joint_eigenvectors(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    mixed = h1 + _MIX * h2
    w, v = jacobi_eigh(mixed)
    ortho = h2 - _MIX * h1
    scale = max(1.0, float(np.max(np.abs(w))))
    start = 0
    n = len(w)
    # resolve accidental collisions of the mixed spectrum with the orthogonal combination
    for k in range(1, n + 1):
        if k == n or w[k] - w[k - 1] > _REFINE_GAP * scale:
            if k - start > 1:
                block = v[:, start:k]
                _, rot = jacobi_eigh(block.conj().T @ ortho @ block)
                v[:, start:k] = block @ rot
            start = k
    return v


def eig_unitary(u, phase_tol: float = DEFAULT_PHASE_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a unitary into degeneracy-grouped projectors.

    Eigenphases within circular distance ``phase_tol`` of each other (single
    linkage, including across the +-pi branch cut) share one cluster.
    Clusters are ordered by ascending phase in (-pi, pi].
    """
    if not phase_tol > 0:
        raise ParameterError(f"phase_tol must be positive, got {phase_tol}")
    m = as_unitary(u)
    h1 = 0.5 * (m + m.conj().T)
    h2 = -0.5j * (m - m.conj().T)
    v = _joint_eigenvectors(h1, h2)

    phases = []
    for k in range(v.shape[1]):
        x = v[:, k]
        c = np.vdot(x, h1 @ x).real
        s = np.vdot(x, h2 @ x).real
        phases.append(canonical_phase(math.atan2(s, c)))
    order = sorted(range(len(phases)), key=lambda k: phases[k])

    groups: list[list[int]] = []
    for k in order:
        if groups and phases[k] - phases[groups[-1][-1]] <= phase_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    if len(groups) > 1 and phases[groups[0][0]] + 2 * math.pi - phases[groups[-1][-1]] <= phase_tol:
        groups[0] = groups.pop() + groups[0]

    clusters = []
    for g in groups:
        centre = np.angle(np.sum(np.exp(1j * np.array([phases[k] for k in g]))))
        basis = gram_schmidt(v[:, g])
        proj = basis @ basis.conj().T
        clusters.append(Cluster(canonical_phase(float(centre)), _freeze(basis), _freeze(proj)))
    clusters.sort(key=lambda c: c.phase)
    return SpectralDecomposition(tuple(clusters))
