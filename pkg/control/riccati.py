import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from common.errors import SynthesisError
from common.linalg import symmetric_part
from config.settings import settings
from simulation.gramians import lyapunov_solve
from simulation.spectral import spectral_abscissa

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """Stabilizing solution of AᵀX + XA − XBR⁻¹BᵀX + Q = 0 and its gain K = R⁻¹BᵀX"""
    X: np.ndarray
    K: np.ndarray
    residual: float
    closed_loop_abscissa: float


def care_residual(A, B, Q, R, X) -> float:
    return float(np.linalg.norm(A.T @ X + X @ A - X @ B @ linalg.solve(R, B.T @ X) + Q))


def _check_weights(Q: np.ndarray, R: np.ndarray) -> None:
    tol = settings.SYMMETRY_TOL
    if np.linalg.norm(R - R.T) > tol * max(1.0, np.linalg.norm(R)):
        raise SynthesisError("input weight R is not symmetric")
    if np.linalg.norm(Q - Q.T) > tol * max(1.0, np.linalg.norm(Q)):
        raise SynthesisError("state weight Q is not symmetric")
    try:
        linalg.cholesky(R)
    except linalg.LinAlgError as exc:
        raise SynthesisError("input weight R is not positive definite") from exc
    if Q.size and np.min(linalg.eigvalsh(symmetric_part(Q))) < -tol * max(1.0, np.linalg.norm(Q)):
        raise SynthesisError("state weight Q is not positive semidefinite")


def solve_care(A: np.ndarray, B: np.ndarray, Q: np.ndarray, R: np.ndarray) -> RiccatiSolution:
    """Stabilizing CARE solution from the stable invariant subspace of the Hamiltonian.

    The ordered real Schur form gives a first solution; one Newton
    (Kleinman) step through a Lyapunov solve refines it when that lowers
    the residual.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    n = A.shape[0]
    _check_weights(Q, R)

    G = B @ linalg.solve(R, B.T)
    H = np.block([[A, -G], [-Q, -A.T]])
    T, Z, k = linalg.schur(H, output='real', sort='lhp')
    if k != n:
        near_axis = linalg.eigvals(H)
        near_axis = near_axis[np.argsort(np.abs(near_axis.real))][:max(1, 2 * n - 2 * k)]
        raise SynthesisError(
            f"Hamiltonian has {2 * n - 2 * k} eigenvalues on the imaginary axis; "
            "pair is not stabilizable or not detectable through Q",
            near_axis,
        )
    U1, U2 = Z[:n, :n], Z[n:, :n]
    if np.linalg.cond(U1) > 1.0 / np.finfo(float).eps:
        raise SynthesisError("stable Hamiltonian subspace is not a graph; no stabilizing solution")
    X = symmetric_part(linalg.solve(U1.T, U2.T).T)

    residual = care_residual(A, B, Q, R, X)
    K = linalg.solve(R, B.T @ X)
    if spectral_abscissa(A - B @ K) < 0.0:
        refined = symmetric_part(lyapunov_solve((A - B @ K).T, Q + K.T @ R @ K))
        refined_residual = care_residual(A, B, Q, R, refined)
        if refined_residual < residual:
            X, residual = refined, refined_residual
            K = linalg.solve(R, B.T @ X)

    abscissa = spectral_abscissa(A - B @ K)
    scale = 1.0 + np.linalg.norm(X)
    if abscissa >= 0.0:
        raise SynthesisError(f"closed loop is not stable (abscissa {abscissa:.3e})",
                             linalg.eigvals(A - B @ K))
    if residual > 1e-8 * scale:
        raise SynthesisError(f"CARE residual {residual:.3e} exceeds {1e-8 * scale:.3e}")
    if n and np.min(linalg.eigvalsh(X)) < -1e-8 * scale:
        raise SynthesisError("CARE solution is not positive semidefinite")

    logger.debug(f"CARE n={n}: residual {residual:.2e}, closed-loop abscissa {abscissa:.3e}")
    return RiccatiSolution(X=X, K=K, residual=residual, closed_loop_abscissa=abscissa)
