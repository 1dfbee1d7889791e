"""Greedy sparse solvers (OMP, SAMP) and the two channel-recovery pipelines.

Both solvers select atoms against unit-normalized dictionary columns and
report coefficients with respect to the original (unnormalized) columns.
The residual tolerance epsilon is relative to ||y||, which keeps the
stopping rule meaningful for unit-norm quantized feedback.

SAMP grows a working sparsity L stage by stage (outer loop) and refines the
support at fixed L with merge / least-squares / backtrack iterations (inner
loop), so no a-priori sparsity level is needed; the stage advances when the
inner loop stops improving the residual.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RecoveryParams:
    """Solver knobs. epsilon is a relative residual threshold; max_sparsity
    and max_iter default to K and 10*K at solve time when left None."""

    epsilon: float = 0.05
    step_size: int = 1
    max_sparsity: int | None = None
    max_iter: int | None = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.step_size < 1:
            raise ValueError("step_size must be >= 1")
        if self.max_sparsity is not None and self.max_sparsity < 1:
            raise ValueError("max_sparsity must be >= 1")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(eq=False)
class SparseSolution:
    coefficients: np.ndarray  # full dictionary-length vector, zero off support
    support: np.ndarray  # sorted atom indices
    residual_norm: float  # ||y - Phi x||
    relative_residual: float  # residual_norm / ||y|| (0 for y = 0)
    stages_used: int
    converged: bool
    rank_deficient: bool = False


def _prepare(y, dictionary, params):
    y = np.asarray(y, dtype=complex)
    d = np.asarray(dictionary, dtype=complex)
    if d.ndim != 2 or y.shape != (d.shape[0],):
        raise ValueError("dictionary must be K x D with y of length K")
    k, n_atoms = d.shape
    norms = np.linalg.norm(d, axis=0)
    if np.any(norms == 0):
        raise ValueError("dictionary contains a zero column")
    cap = min(params.max_sparsity if params.max_sparsity is not None else k, k, n_atoms)
    max_iter = params.max_iter if params.max_iter is not None else 10 * k
    return y, d / norms, norms, cap, max_iter


def _empty_solution(n_atoms, ynorm, converged):
    return SparseSolution(
        coefficients=np.zeros(n_atoms, dtype=complex),
        support=np.array([], dtype=int),
        residual_norm=float(ynorm),
        relative_residual=0.0 if ynorm == 0 else 1.0,
        stages_used=0,
        converged=converged,
    )


def _finish(x_normalized, support, norms, n_atoms, residual, ynorm, stages, converged, rank_deficient):
    coeff = np.zeros(n_atoms, dtype=complex)
    coeff[support] = x_normalized / norms[support]
    order = np.argsort(support)
    return SparseSolution(
        coefficients=coeff,
        support=np.asarray(support)[order],
        residual_norm=float(residual),
        relative_residual=float(residual / ynorm),
        stages_used=stages,
        converged=converged,
        rank_deficient=rank_deficient,
    )


def _lstsq(a, y):
    x, _, rank, _ = np.linalg.lstsq(a, y, rcond=None)
    return x, rank < a.shape[1]


def omp(y, dictionary, params: RecoveryParams) -> SparseSolution:
    """Orthogonal matching pursuit: greedy atom selection + support least squares."""
    y, dn, norms, cap, max_iter = _prepare(y, dictionary, params)
    n_atoms = dn.shape[1]
    ynorm = np.linalg.norm(y)
    if ynorm == 0 or params.epsilon >= 1.0:
        return _empty_solution(n_atoms, ynorm, converged=True)

    support: list[int] = []
    x = np.array([], dtype=complex)
    r = y.copy()
    rank_deficient = False
    for _ in range(max_iter):
        if np.linalg.norm(r) <= params.epsilon * ynorm or len(support) >= cap:
            break
        scores = np.abs(dn.conj().T @ r)
        scores[support] = -1.0  # already selected
        support.append(int(np.argmax(scores)))  # argmax => lowest index on ties
        x, deficient = _lstsq(dn[:, support], y)
        rank_deficient |= deficient
        r = y - dn[:, support] @ x

    residual = np.linalg.norm(r)
    return _finish(
        x, support, norms, n_atoms, residual, ynorm,
        stages=len(support),
        converged=residual <= params.epsilon * ynorm,
        rank_deficient=rank_deficient,
    )


def samp(y, dictionary, params: RecoveryParams) -> SparseSolution:
    """Sparsity-adaptive matching pursuit with stagewise support expansion."""
    y, dn, norms, cap, max_iter = _prepare(y, dictionary, params)
    n_atoms = dn.shape[1]
    ynorm = np.linalg.norm(y)
    if ynorm == 0 or params.epsilon >= 1.0:
        return _empty_solution(n_atoms, ynorm, converged=True)

    stage = 1
    size = params.step_size
    support = np.array([], dtype=int)
    r = y.copy()
    rank_deficient = False
    best = (np.inf, support, np.array([], dtype=complex))
    for _ in range(max_iter):
        scores = np.abs(dn.conj().T @ r)
        preliminary = np.argsort(-scores, kind="stable")[:size]
        candidates = np.union1d(support, preliminary)
        x_cand, deficient = _lstsq(dn[:, candidates], y)
        rank_deficient |= deficient
        keep = np.argsort(-np.abs(x_cand), kind="stable")[:size]
        final = candidates[keep]
        x_final, deficient = _lstsq(dn[:, final], y)
        rank_deficient |= deficient
        r_new = y - dn[:, final] @ x_final
        r_new_norm = np.linalg.norm(r_new)
        if r_new_norm < best[0]:
            best = (r_new_norm, final, x_final)
        if r_new_norm <= params.epsilon * ynorm:
            return _finish(x_final, final, norms, n_atoms, r_new_norm, ynorm,
                           stage, True, rank_deficient)
        if r_new_norm >= np.linalg.norm(r):
            stage += 1  # stalled: widen the candidate size
            size = stage * params.step_size
            if size > cap:
                break
        else:
            support, r = final, r_new

    residual, support, x = best
    return _finish(x, support, norms, n_atoms, residual, ynorm,
                   stage, False, rank_deficient)


@dataclass(eq=False)
class ChannelRecovery:
    """A recovered channel estimate plus the sparse solution behind it."""

    h_est: np.ndarray
    solution: SparseSolution

    @property
    def degenerate(self) -> bool:
        return not np.any(self.h_est)


def recover_channel_sensed(y_fb, pilots, basis, params: RecoveryParams,
                           restrict_to_rank: bool = True) -> ChannelRecovery:
    """SAMP over the sensed basis, sparsity capped at the basis rank J.

    restrict_to_rank=True solves over the J active columns only (the sensed
    span); False uses the full N x N basis with the same cap.
    """
    u = basis.u_active if restrict_to_rank else basis.u
    phi = pilots.entries @ u
    cap = params.max_sparsity if params.max_sparsity is not None else pilots.n_symbols
    local = RecoveryParams(
        epsilon=params.epsilon,
        step_size=params.step_size,
        max_sparsity=max(1, min(cap, basis.rank_j)),
        max_iter=params.max_iter,
    )
    sol = samp(y_fb, phi, local)
    return ChannelRecovery(h_est=u @ sol.coefficients, solution=sol)


def recover_channel_dft(y_fb, pilots, dft_mat, params: RecoveryParams) -> ChannelRecovery:
    """SAMP over the Kronecker DFT basis (no rank knowledge, cap defaults to K)."""
    phi = pilots.entries @ dft_mat
    sol = samp(y_fb, phi, params)
    return ChannelRecovery(h_est=dft_mat @ sol.coefficients, solution=sol)
