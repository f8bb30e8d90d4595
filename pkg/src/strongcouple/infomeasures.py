"""Entropy, coherence, entanglement, and correlation measures.

All entropies are in bits. The negativity is computed by two routes that
are algebraically identical for a unit-trace Hermitian matrix, the
trace-norm form ``(||rho^T_A||_1 - 1) / 2`` and the absolute sum of the
negative eigenvalues of the partial transpose; the pair is compared on
every call as a self-check of the eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError
from .spectra import (DensityOperator, eig_hermitian, partial_trace,
                      partial_transpose, trace_norm)

ENTROPY_EIGENVALUE_FLOOR = -1e-10
_ENTROPY_CLIP = 1e-12
_NEGATIVITY_ROUTE_TOL = 1e-10


def von_neumann_entropy(rho) -> float:
    """Entropy ``-sum r log2 r`` of a density operator, in bits.

    Eigenvalues in ``[-1e-10, 1e-12]`` are treated as exact zeros, which
    absorbs roundoff from rank-deficient states. An eigenvalue below
    ``-1e-10`` means the input is not a physical state and raises
    :class:`InputError`.
    """
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    lam = eig_hermitian(rho).eigenvalues
    if np.any(lam < ENTROPY_EIGENVALUE_FLOOR):
        raise InputError(
            f"eigenvalue {lam.min():.3e} below {ENTROPY_EIGENVALUE_FLOOR:.0e}; "
            "not a density operator")
    lam = np.where(lam < _ENTROPY_CLIP, 0.0, lam)
    nz = lam[lam > 0.0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def l1_coherence(rho) -> float:
    """Sum of the moduli of the off-diagonal entries, ``sum_{i != j} |rho_ij|``."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    m = rho.matrix
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))


def negativity(joint, dims=(2, 2), subsystem: int = 0) -> float:
    """Entanglement negativity of a bipartite state.

    Partially transposes ``subsystem``, then evaluates both the
    trace-norm route and the negative-eigenvalue route. The two must
    agree to ``1e-10``; a larger gap indicates an eigensolver problem and
    raises :class:`NumericalError`. Separable states give zero.
    """
    if not isinstance(joint, DensityOperator):
        joint = DensityOperator(joint)
    pt = partial_transpose(joint, subsystem=subsystem, dims=dims)
    lam = eig_hermitian(pt).eigenvalues
    from_trace_norm = 0.5 * (trace_norm(pt) - 1.0)
    from_eigenvalues = float(np.sum(np.abs(lam[lam < 0.0])))
    gap = abs(from_trace_norm - from_eigenvalues)
    if gap > _NEGATIVITY_ROUTE_TOL:
        raise NumericalError(
            f"negativity routes disagree by {gap:.3e} "
            f"(trace norm {from_trace_norm:.6e}, "
            f"eigenvalue sum {from_eigenvalues:.6e})")
    return max(0.0, from_eigenvalues)


def mutual_information(joint, dims=(2, 2)) -> float:
    """Quantum mutual information ``S(A) + S(B) - S(AB)`` in bits."""
    if not isinstance(joint, DensityOperator):
        joint = DensityOperator(joint)
    s_a = von_neumann_entropy(partial_trace(joint, keep=0, dims=dims))
    s_b = von_neumann_entropy(partial_trace(joint, keep=1, dims=dims))
    s_ab = von_neumann_entropy(joint)
    return s_a + s_b - s_ab


def heat_asymmetry(heat_system, heat_environment) -> np.ndarray:
    """Pointwise imbalance ``|Q_S + Q_E|`` between the heat flows.

    Zero whenever the heat lost by one side is exactly gained by the
    other; nonzero values quantify energy exchanged through coherences
    rather than populations.
    """
    q_s = np.asarray(heat_system, dtype=float)
    q_e = np.asarray(heat_environment, dtype=float)
    if q_s.shape != q_e.shape:
        raise InputError(
            f"heat arrays must share a shape, got {q_s.shape} and {q_e.shape}")
    return np.abs(q_s + q_e)


@dataclass(frozen=True)
class ProportionalityReport:
    """Summary of how nearly one series is a constant multiple of another.

    Points where the denominator magnitude is at or below ``threshold``
    are excluded; ``mask_count`` is the number kept, ``ratio_mean`` the
    mean ratio there, and ``max_relative_spread`` the largest relative
    deviation of the pointwise ratio from the mean.
    """

    mask_count: int
    ratio_mean: float
    max_relative_spread: float
    threshold: float


def proportionality_report(numerator, denominator,
                           threshold: float) -> ProportionalityReport:
    """Measure proportionality of two series away from small denominators."""
    num = np.asarray(numerator, dtype=float)
    den = np.asarray(denominator, dtype=float)
    if num.shape != den.shape:
        raise InputError(
            f"series must share a shape, got {num.shape} and {den.shape}")
    if not threshold >= 0.0:
        raise InputError(f"threshold must be nonnegative, got {threshold}")
    mask = np.abs(den) > threshold
    count = int(np.count_nonzero(mask))
    if count == 0:
        raise InputError(
            f"no points with |denominator| > {threshold:.3e}; "
            "nothing to compare")
    ratio = num[mask] / den[mask]
    mean = float(np.mean(ratio))
    if mean == 0.0:
        raise InputError("mean ratio is zero; spread is undefined")
    spread = float(np.max(np.abs(ratio - mean)) / abs(mean))
    return ProportionalityReport(mask_count=count, ratio_mean=mean,
                                 max_relative_spread=spread,
                                 threshold=threshold)


@dataclass(frozen=True)
class InfoSeries:
    """Information measures sampled on a common time grid.

    Suffixes ``_s`` and ``_e`` label the system and environment qubits.
    """

    times: np.ndarray
    entropy_s: np.ndarray
    entropy_e: np.ndarray
    coherence_s: np.ndarray
    coherence_e: np.ndarray
    negativity: np.ndarray
    mutual_information: np.ndarray
    heat_asymmetry: np.ndarray
