"""First-law decomposition of internal energy change along a trajectory.

The internal energy ``U(t) = tr(H(t) rho(t))`` is split into three
cumulative contributions by writing both operators in their instantaneous
eigenbases, ``H = sum_n E_n |n><n|`` and ``rho = sum_k r_k |k><k|``, with
``P_nk = |<n|k>|^2``:

* work       ``W(t) = sum_nk int r_k P_nk dE_n``
* heat       ``Q(t) = sum_nk int E_n P_nk dr_k``
* coherent   ``C(t) = sum_nk int E_n r_k dP_nk``

The product rule gives ``dU = dW + dQ + dC`` identically, so the numerical
closure residual ``|Delta U - (W + Q + C)|`` measures only discretization
error and must shrink as the grid is refined. The work term tracks
spectrum changes of the Hamiltonian (zero when it is static), the heat
term tracks population changes, and the coherent term tracks rotation of
the state eigenbasis relative to the energy eigenbasis.

Branch identification across time steps uses greedy eigenvector overlap
matching; derivatives use second-order central differences on the
interior (``numpy.gradient``) and the cumulative integrals use the
trapezoid rule on the same grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError, TrackingError
from .spectra import DensityOperator, SpectralDecomposition, eig_hermitian

_TRACK_MIN_OVERLAP = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class TrajectorySample:
    """Spectral data of Hamiltonian and state at one instant.

    Both spectra are full :class:`SpectralDecomposition` objects so the
    branches stay inspectable; ``overlaps[n, k]`` is ``|<n|k>|^2``
    between energy branch ``n`` and population branch ``k``, and its
    rows and columns each sum to one.
    """

    t: float
    hamiltonian_spectrum: SpectralDecomposition
    state_spectrum: SpectralDecomposition
    overlaps: np.ndarray


@dataclass(frozen=True)
class ThermoTrajectory:
    """Cumulative first-law bookkeeping on a time grid.

    All arrays share the grid ``times``; energy arrays start at zero.
    ``closure_residual[i] = |internal_energy_change[i] - work[i] -
    heat[i] - coherent_energy[i]|`` is the discretization error of the
    split.
    """

    times: np.ndarray
    work: np.ndarray
    heat: np.ndarray
    coherent_energy: np.ndarray
    internal_energy_change: np.ndarray
    closure_residual: np.ndarray
    closure_tolerance: float

    @property
    def max_closure_residual(self) -> float:
        return float(np.max(self.closure_residual))


def eigen_track(decompositions) -> list:
    """Reorder eigenbranches for continuity along a sequence.

    Takes a sequence of :class:`SpectralDecomposition` and returns a new
    list in which branch ``k`` at every step is the continuation of
    branch ``k`` at the previous step, found by greedy maximum
    eigenvector overlap. Raises :class:`TrackingError` when the best
    available overlap for some branch drops to ``1/sqrt(2)`` or below,
    which signals a genuinely ambiguous crossing on too coarse a grid.
    """
    decomps = list(decompositions)
    if not decomps:
        raise InputError("eigen_track needs at least one decomposition")
    tracked = [decomps[0]]
    for step, cur in enumerate(decomps[1:], start=1):
        prev = tracked[-1]
        overlap = np.abs(prev.eigenvectors.conj().T @ cur.eigenvectors)
        dim = overlap.shape[0]
        perm = np.full(dim, -1, dtype=int)
        work = overlap.copy()
        for _ in range(dim):
            flat = np.argmax(work)
            i, j = np.unravel_index(flat, work.shape)
            if work[i, j] <= _TRACK_MIN_OVERLAP:
                raise TrackingError(
                    f"branch matching ambiguous at step {step} "
                    f"(t index {step}): best overlap {work[i, j]:.4f} "
                    f"<= {_TRACK_MIN_OVERLAP:.4f}; refine the time grid")
            perm[i] = j
            work[i, :] = -1.0
            work[:, j] = -1.0
        tracked.append(SpectralDecomposition(
            eigenvalues=cur.eigenvalues[perm],
            eigenvectors=cur.eigenvectors[:, perm]))
    return tracked


def _as_hamiltonian_fn(hamiltonian):
    if callable(hamiltonian):
        return hamiltonian, False
    h = np.asarray(hamiltonian, dtype=complex)
    return (lambda t: h), True


def sample_trajectory(hamiltonian, state_fn, times) -> list:
    """Evaluate spectra and overlaps on a time grid.

    ``hamiltonian`` is a static matrix or a callable ``t -> matrix``;
    ``state_fn`` is a callable ``t -> DensityOperator`` or a sequence of
    states aligned with ``times``. Branches of both operators are tracked
    for continuity before the overlaps are formed.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise InputError("times must be a 1-d grid with at least two points")
    if np.any(np.diff(times) <= 0.0):
        raise InputError("times must be strictly increasing")

    h_fn, h_static = _as_hamiltonian_fn(hamiltonian)
    if callable(state_fn):
        states = [state_fn(t) for t in times]
    else:
        states = list(state_fn)
        if len(states) != times.size:
            raise InputError(
                f"got {len(states)} states for {times.size} time points")

    if h_static:
        h_dec = eig_hermitian(h_fn(times[0]))
        h_decs = [h_dec] * times.size
    else:
        h_decs = eigen_track([eig_hermitian(h_fn(t)) for t in times])
    s_decs = eigen_track([eig_hermitian(s) for s in states])

    samples = []
    for t, hd, sd in zip(times, h_decs, s_decs):
        c = hd.eigenvectors.conj().T @ sd.eigenvectors
        samples.append(TrajectorySample(
            t=float(t),
            hamiltonian_spectrum=hd,
            state_spectrum=sd,
            overlaps=np.abs(c) ** 2))
    return samples


def _stack(samples):
    times = np.array([s.t for s in samples])
    energies = np.stack([s.hamiltonian_spectrum.eigenvalues for s in samples])
    populations = np.stack([s.state_spectrum.eigenvalues for s in samples])
    overlaps = np.stack([s.overlaps for s in samples])
    return times, energies, populations, overlaps


def _cumtrapz(y, x):
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def work_integral(samples) -> np.ndarray:
    """Cumulative work ``sum_nk int r_k P_nk dE_n`` on the sample grid."""
    times, energies, populations, overlaps = _stack(samples)
    de = np.gradient(energies, times, axis=0)
    integrand = np.einsum("tk,tnk,tn->t", populations, overlaps, de)
    return _cumtrapz(integrand, times)


def heat_integral(samples) -> np.ndarray:
    """Cumulative heat ``sum_nk int E_n P_nk dr_k`` on the sample grid."""
    times, energies, populations, overlaps = _stack(samples)
    dr = np.gradient(populations, times, axis=0)
    integrand = np.einsum("tn,tnk,tk->t", energies, overlaps, dr)
    return _cumtrapz(integrand, times)


def coherent_energy_integral(samples) -> np.ndarray:
    """Cumulative coherent energy ``sum_nk int E_n r_k dP_nk``.

    Nonzero only while the state eigenbasis rotates relative to the
    energy eigenbasis, i.e. while energy-basis coherences change.
    """
    times, energies, populations, overlaps = _stack(samples)
    dp = np.gradient(overlaps, times, axis=0)
    integrand = np.einsum("tn,tk,tnk->t", energies, populations, dp)
    return _cumtrapz(integrand, times)


def internal_energy_change(hamiltonian, rho_t, rho_0) -> float:
    """Exact ``tr(H (rho_t - rho_0))`` between two states.

    Carries no integration error, so it anchors closure checks against
    the integrated work, heat, and coherent-energy pieces.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    a = np.asarray(rho_t, dtype=complex)
    b = np.asarray(rho_0, dtype=complex)
    if not (h.shape == a.shape == b.shape) or h.ndim != 2:
        raise InputError(
            f"dimension mismatch: hamiltonian {h.shape}, rho_t {a.shape}, "
            f"rho_0 {b.shape}")
    return float(np.real(np.trace(h @ (a - b))))


def _internal_energy_series(samples) -> np.ndarray:
    """``tr(H rho) - tr(H(0) rho(0))`` pointwise on the sample grid."""
    _, energies, populations, overlaps = _stack(samples)
    u = np.einsum("tn,tk,tnk->t", energies, populations, overlaps)
    return u - u[0]


def first_law_closure(traj: ThermoTrajectory) -> float:
    """Largest closure residual along the trajectory."""
    return traj.max_closure_residual


def thermo_trajectory(hamiltonian, state_fn, times,
                      endpoint_subdivision: int = 32,
                      closure_tolerance: float = 1e-4) -> ThermoTrajectory:
    """Integrate the first-law split and verify closure on a time grid.

    ``state_fn`` must be callable because the integrator works on an
    internal grid finer than ``times``: the first interval is subdivided
    ``endpoint_subdivision`` times to resolve the square-root-in-time
    growth of coherences near ``t = 0``, where one-sided endpoint
    differences are least accurate. Results are reported at the points of
    ``times``; a closure residual above ``closure_tolerance`` raises
    :class:`NumericalError` since it indicates the grid is too coarse for
    the requested accuracy.
    """
    if not callable(state_fn):
        raise InputError("state_fn must be callable on this route; "
                         "use sample_trajectory for precomputed states")
    if endpoint_subdivision < 1:
        raise InputError(
            f"endpoint_subdivision must be >= 1, got {endpoint_subdivision}")
    if not closure_tolerance > 0.0:
        raise InputError(
            f"closure_tolerance must be positive, got {closure_tolerance}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise InputError("times must be a 1-d grid with at least two points")
    if np.any(np.diff(times) <= 0.0):
        raise InputError("times must be strictly increasing")

    head = np.linspace(times[0], times[1], endpoint_subdivision + 1)
    merged = np.unique(np.concatenate([head, times]))
    public = np.searchsorted(merged, times)

    samples = sample_trajectory(hamiltonian, state_fn, merged)
    work = work_integral(samples)[public]
    heat = heat_integral(samples)[public]
    coherent = coherent_energy_integral(samples)[public]
    du = _internal_energy_series(samples)[public]
    residual = np.abs(du - work - heat - coherent)
    worst = float(np.max(residual))
    if worst > closure_tolerance:
        raise NumericalError(
            f"first-law closure residual {worst:.3e} exceeds tolerance "
            f"{closure_tolerance:.1e}; refine the time grid")
    return ThermoTrajectory(times=times, work=work, heat=heat,
                            coherent_energy=coherent,
                            internal_energy_change=du,
                            closure_residual=residual,
                            closure_tolerance=closure_tolerance)
