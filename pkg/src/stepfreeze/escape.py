"""Mean escape times from the transition set, the dominant spectrum of the
restricted chain, the quasi-stationary distribution, and the preferred
escape phase."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import ConvergenceFailure, SingularSystem
from .grid import PolarGrid, box_center, box_center_phase_deg

#: Above this size the dense eigendecomposition gives way to a sparse
#: two-eigenvalue Arnoldi solve.
DENSE_EIG_LIMIT = 2000


@dataclass
class EscapeReport:
    """Everything the method extracts from the restricted chain A_F.

    Times are in seconds (converted with ``dt``); ``met_i`` is ordered as
    ``F`` within the model's state ordering.  ``multiple_minima`` flags a
    tie in ``met_i`` (smallest box index wins).
    """

    met_i: np.ndarray
    met_F: float
    mix_F: float
    lambda1: float
    lambda_dec: float
    s_F: np.ndarray
    i_min: int
    X_min: complex
    R_min: float
    psi_min: float
    below_mean_states: np.ndarray
    dt: float
    multiple_minima: bool = False

    def to_json_dict(self, f_boxes: np.ndarray) -> dict:
        return {
            "met_i_seconds": [float(v) for v in self.met_i],
            "met_F_seconds": float(self.met_F),
            "mix_F_seconds": float(self.mix_F),
            "lambda1": float(self.lambda1),
            "lambda_dec": float(self.lambda_dec),
            "s_F": [float(v) for v in self.s_F],
            "i_min_box": int(self.i_min),
            "R_min": float(self.R_min),
            "psi_min_deg": float(self.psi_min),
            "below_mean_boxes": [int(b) for b in self.below_mean_states],
            "multiple_minima": self.multiple_minima,
            "display": {
                "met_F": f"{self.met_F:.4f}",
                "mix_F": f"{self.mix_F:.4f}",
                "lambda1": f"{self.lambda1:.4f}",
                "lambda_dec": f"{self.lambda_dec:.4f}",
                "psi_min": f"{self.psi_min:.4f}",
            },
        }


def _solve_fundamental(A_F: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (I - A_F) x = rhs, mapping singularity to SingularSystem."""
    A_F = np.asarray(A_F, dtype=float)
    M = np.eye(A_F.shape[0]) - A_F
    try:
        x = scipy.linalg.solve(M, rhs)
    except scipy.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution of (I - A_F) x = e")
    return x


def met_per_state(A_F: np.ndarray) -> np.ndarray:
    """Mean escape time in steps from each state of F.

    One linear solve (I - A_F) x = e yields all components.
    """
    n = np.asarray(A_F).shape[0]
    return _solve_fundamental(A_F, np.ones(n))


def met_from_distribution(A_F: np.ndarray, s: np.ndarray) -> float:
    """Mean escape time in steps starting from distribution ``s``:
    s (I - A_F)^-1 e, solved as a linear system."""
    return float(np.asarray(s, dtype=float) @ met_per_state(A_F))


def met_series_check(A_F: np.ndarray, s: np.ndarray, n_terms: int) -> float:
    """Test-only oracle: truncated survival series sum_{t<N} s A^t e.

    Kept independent of the linear-solve path; uses only matvecs.  The
    sum is blocked (u = sum_{r<c} A^r e once, then strides of A^c) so
    large N stays cheap without changing the partial sum.
    """
    A_F = np.asarray(A_F, dtype=float)
    v = np.asarray(s, dtype=float).copy()
    e = np.ones(A_F.shape[0])
    block = max(1, min(128, n_terms))
    u = np.zeros_like(e)
    w = e.copy()
    for _ in range(block):
        u += w
        w = A_F @ w
    B = np.linalg.matrix_power(A_F, block)
    full, rem = divmod(n_terms, block)
    total = 0.0
    for _ in range(full):
        total += float(v @ u)
        v = v @ B
    for _ in range(rem):
        total += float(v @ e)
        v = v @ A_F
    return total


def dominant_spectrum(A_F: np.ndarray, tol: float = 1e-10) -> tuple[float, float, np.ndarray]:
    """(lambda1, lambda_dec, s_F) of the substochastic matrix A_F.

    lambda1 is the largest-modulus eigenvalue (real by nonnegativity),
    s_F its normalized left eigenvector (the quasi-stationary
    distribution), lambda_dec the modulus of the runner-up eigenvalue.
    """
    A_F = np.asarray(A_F, dtype=float)
    n = A_F.shape[0]
    if n == 1:
        lam = float(A_F[0, 0])
        return lam, lam, np.array([1.0])
    if n <= DENSE_EIG_LIMIT:
        vals, vecs = scipy.linalg.eig(A_F.T)
    else:
        try:
            vals, vecs = scipy.sparse.linalg.eigs(
                scipy.sparse.csr_matrix(A_F.T), k=2, which="LM", tol=tol
            )
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(-np.abs(vals))
    lam1 = vals[order[0]]
    if abs(lam1.imag) > 1e-8:
        raise ConvergenceFailure(f"dominant eigenvalue not real: {lam1}")
    lam_dec = float(abs(vals[order[1]]))
    left = np.real(vecs[:, order[0]])
    if left.sum() < 0:
        left = -left
    left = np.clip(left, 0.0, None)
    s_F = left / left.sum()
    return float(np.real(lam1)), lam_dec, s_F


def preferred_phase(
    met_i: np.ndarray, grid: PolarGrid, f_boxes: np.ndarray, met_F_steps: float
) -> tuple[int, complex, float, float, np.ndarray, bool]:
    """Locate the state with minimal mean escape time.

    Parameters
    ----------
    met_i : ndarray
        Escape times in steps, aligned with ``f_boxes``.
    f_boxes : ndarray
        1-based box indices of F, ascending.
    met_F_steps : float
        Chain-level mean escape time in steps, for the below-mean set.

    Returns
    -------
    (i_min box, X_min, R_min, psi_min degrees, below-mean boxes, tie flag)
    """
    met_i = np.asarray(met_i)
    m_min = np.min(met_i)
    minima = np.flatnonzero(met_i == m_min)
    pos = int(minima[0])
    i_min = int(f_boxes[pos])
    X_min = box_center(grid, i_min)
    psi_min = box_center_phase_deg(grid, i_min)
    below = f_boxes[met_i < met_F_steps]
    return i_min, X_min, abs(X_min), psi_min, np.asarray(below), minima.size > 1


def escape_report(
    A_F: np.ndarray, grid: PolarGrid, f_boxes: np.ndarray, dt: float
) -> EscapeReport:
    """Full escape analysis of the restricted chain, reported in seconds."""
    met_steps = met_per_state(A_F)
    lam1, lam_dec, s_F = dominant_spectrum(A_F)
    met_F_steps = 1.0 / (1.0 - lam1)
    mix_F_steps = 1.0 / (1.0 - lam_dec)
    i_min, X_min, R_min, psi_min, below, ties = preferred_phase(
        met_steps, grid, f_boxes, met_F_steps
    )
    return EscapeReport(
        met_i=met_steps * dt,
        met_F=met_F_steps * dt,
        mix_F=mix_F_steps * dt,
        lambda1=lam1,
        lambda_dec=lam_dec,
        s_F=s_F,
        i_min=i_min,
        X_min=X_min,
        R_min=R_min,
        psi_min=psi_min,
        below_mean_states=below,
        dt=dt,
        multiple_minima=ties,
    )
