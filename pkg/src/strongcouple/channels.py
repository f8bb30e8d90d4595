"""Generalized amplitude damping for a qubit exchanging one excitation
with a single-qubit thermal environment.

The channel is parameterized by a decay probability ``p`` and the thermal
ground weight ``w0`` of the environment. Three equivalent computational
routes to the evolved system state are provided and cross-checked in the
test suite: Kraus operators acting on the system alone, a unitary dilation
on the joint space followed by a partial trace, and closed-form matrix
entries with ``p`` replaced by ``1 - exp(-gamma t)``.

Two joint-state families
------------------------
The single-excitation exchange block can be written with or without a
phase on its off-diagonal amplitudes, and the two choices are not
equivalent:

* :func:`gadc_unitary` carries a factor ``i`` on the exchange amplitudes
  and is exactly unitary for every ``p``. Conjugation with it preserves
  the joint spectrum, so :func:`joint_state` has a time-independent joint
  entropy.
* :func:`gadc_coupling_matrix` is the symmetric all-positive variant. It
  is unitary only at ``p = 0`` and ``p = 1`` (where it is the identity and
  the SWAP gate), yet conjugating the initial product state with it still
  produces a valid density operator family,
  :func:`joint_state_closed_form`, whose partial traces reproduce the
  closed-form marginals of both subsystems exactly, including the
  environment coherence growing as ``sqrt(1 - exp(-gamma t))``.

No single family can do both jobs: a two-qubit state with the constant
initial spectrum cannot have these exact marginals at intermediate times
(the marginal spectra would violate the two-qubit spectral compatibility
inequalities). The library therefore exposes both families and documents
which one each derived quantity uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .spectra import DensityOperator, partial_trace, tensor_product

KRAUS_COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class GadcParams:
    """Channel and trajectory parameters.

    Attributes
    ----------
    alpha : float
        Ground-state amplitude of the system's initial pure state
        ``alpha |g> + sqrt(1 - alpha^2) |e>``.
    w0 : float
        Thermal weight of the environment ground level; ``w1 = 1 - w0``.
    gamma_rate : float
        Decay rate entering ``p(t) = 1 - exp(-gamma_rate t)``.
    p : float
        Decay probability for single-shot channel applications.
    e_g, e_e : float
        System energy levels. The defaults put the gap at one energy unit
        with the ground level at zero.
    e_0, e_1 : float
        Environment energy levels; the gap must equal the system gap for
        the excitation exchange to be resonant.
    """

    alpha: float
    w0: float
    gamma_rate: float = 1.0
    p: float = 0.0
    e_g: float = 0.0
    e_e: float = 1.0
    e_0: float = 0.0
    e_1: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InputError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.w0 <= 1.0:
            raise InputError(f"w0 must lie in [0, 1], got {self.w0}")
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        if not self.gamma_rate > 0.0:
            raise InputError(f"gamma_rate must be positive, got {self.gamma_rate}")
        gap_s = self.e_e - self.e_g
        gap_e = self.e_1 - self.e_0
        if abs(gap_s - gap_e) > 1e-12:
            raise InputError(
                f"system gap {gap_s} and environment gap {gap_e} must match")
        if not gap_s > 0.0:
            raise InputError(f"energy gap must be positive, got {gap_s}")

    @property
    def w1(self) -> float:
        return 1.0 - self.w0

    @property
    def beta_amp(self) -> float:
        """Excited-state amplitude ``sqrt(1 - alpha^2)`` of the initial state."""
        return math.sqrt(max(0.0, 1.0 - self.alpha * self.alpha))

    @classmethod
    def from_inverse_temperature(cls, alpha, beta, gamma_rate=1.0, p=0.0,
                                 e_g=0.0, e_e=1.0, e_0=0.0, e_1=1.0):
        """Build parameters with ``w0`` fixed by a thermal environment.

        ``beta`` is the inverse temperature in units of the energy gap, so
        ``w0 = 1 / (1 + exp(-beta (e_1 - e_0)))``. ``beta = inf`` is the
        zero-temperature limit ``w0 = 1``.
        """
        if not beta > 0.0:
            raise InputError(f"beta must be positive, got {beta}")
        gap = e_1 - e_0
        w0 = 1.0 / (1.0 + math.exp(-beta * gap)) if math.isfinite(beta) else 1.0
        return cls(alpha=alpha, w0=w0, gamma_rate=gamma_rate, p=p,
                   e_g=e_g, e_e=e_e, e_0=e_0, e_1=e_1)


@dataclass(frozen=True)
class KrausChannel:
    """A finite set of Kraus operators validated for completeness."""

    operators: tuple
    label: str = ""
    completeness_tol: float = field(default=KRAUS_COMPLETENESS_TOL, repr=False)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise InputError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise InputError(f"Kraus operators must share shape ({dim},{dim})")
        total = sum(k.conj().T @ k for k in ops)
        dev = float(np.max(np.abs(total - np.eye(dim))))
        if dev > self.completeness_tol:
            raise InputError(
                f"Kraus completeness violated for {self.label or 'channel'}: "
                f"max |sum K^+ K - I| = {dev:.3e}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def p_of_t(gamma_rate: float, t: float) -> float:
    """Decay probability accumulated after time ``t``."""
    if not gamma_rate > 0.0:
        raise InputError(f"gamma_rate must be positive, got {gamma_rate}")
    if t < 0.0:
        raise InputError(f"time must be nonnegative, got {t}")
    return -math.expm1(-gamma_rate * t)


def gadc_unitary(p: float) -> np.ndarray:
    """Unitary dilation of the damping step on the joint space.

    Basis ordering is ``|g,E0>, |g,E1>, |e,E0>, |e,E1>``. The excitation
    exchange acts in the middle two-dimensional block with amplitudes
    ``sqrt(1 - p)`` on the diagonal and ``i sqrt(p)`` off the diagonal,
    which keeps the matrix exactly unitary for every ``p`` in [0, 1]. At
    ``p = 1`` the entry magnitudes are those of the SWAP gate.
    """
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    c = math.sqrt(1.0 - p)
    s = math.sqrt(p)
    u = np.eye(4, dtype=complex)
    u[1, 1] = c
    u[2, 2] = c
    u[1, 2] = 1j * s
    u[2, 1] = 1j * s
    return u


def gadc_coupling_matrix(p: float) -> np.ndarray:
    """Symmetric all-positive variant of the exchange block.

    Identical to :func:`gadc_unitary` in entry magnitudes but with both
    off-diagonal amplitudes ``+sqrt(p)``. It equals the identity at
    ``p = 0`` and the SWAP gate exactly at ``p = 1``; in between its middle
    block has non-orthogonal rows, so it is not unitary. Conjugating the
    initial product state with it nevertheless yields the valid family
    :func:`joint_state_closed_form`.
    """
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    u = gadc_unitary(p)
    m = u.real.copy()
    m[1, 2] = u[1, 2].imag
    m[2, 1] = u[2, 1].imag
    return m.astype(complex)


def system_kraus(params: GadcParams) -> KrausChannel:
    """Four Kraus operators of the thermal damping channel on the system.

    In the ``|g>, |e>`` basis, with ``p = params.p``:

    * ``K00 = sqrt(w0) (|g><g| + sqrt(1-p) |e><e|)``
    * ``K01 = sqrt(w0) sqrt(p) |g><e|``
    * ``K10 = sqrt(w1) sqrt(p) |e><g|``
    * ``K11 = sqrt(w1) (sqrt(1-p) |g><g| + |e><e|)``

    They satisfy the completeness relation exactly for every ``p, w0``.
    """
    p, w0, w1 = params.p, params.w0, params.w1
    sp = math.sqrt(p)
    sq = math.sqrt(1.0 - p)
    k00 = math.sqrt(w0) * np.array([[1, 0], [0, sq]], dtype=complex)
    k01 = math.sqrt(w0) * np.array([[0, sp], [0, 0]], dtype=complex)
    k10 = math.sqrt(w1) * np.array([[0, 0], [sp, 0]], dtype=complex)
    k11 = math.sqrt(w1) * np.array([[sq, 0], [0, 1]], dtype=complex)
    return KrausChannel(operators=(k00, k01, k10, k11), label="system damping")


def environment_kraus(params: GadcParams) -> KrausChannel:
    """Two Kraus operators for the environment side of the exchange.

    Obtained by sandwiching the unitary dilation between the system's
    initial pure state and the system basis states, so completeness holds
    exactly. The entry magnitudes are ``alpha``, ``sqrt(p (1 - alpha^2))``,
    ``sqrt((1-p)) alpha`` and partners; the exchange amplitudes carry the
    dilation's factor ``i``. Note that the resulting map reproduces the
    closed-form environment populations but not the closed-form coherence,
    which belongs to the symmetric coupling family (see module docstring).
    """
    p, a = params.p, params.alpha
    b = params.beta_amp
    sp = math.sqrt(p)
    sq = math.sqrt(1.0 - p)
    l0 = np.array([[a, 0.0],
                   [1j * sp * b, sq * a]], dtype=complex)
    l1 = np.array([[sq * b, 1j * sp * a],
                   [0.0, b]], dtype=complex)
    return KrausChannel(operators=(l0, l1), label="environment exchange")


def apply_channel(channel: KrausChannel, rho) -> DensityOperator:
    """Apply a Kraus channel to a density operator."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if rho.dim != channel.dim:
        raise InputError(
            f"state dimension {rho.dim} does not match channel dimension {channel.dim}")
    m = rho.matrix
    out = sum(k @ m @ k.conj().T for k in channel.operators)
    return DensityOperator(out)


def system_initial_state(params: GadcParams) -> DensityOperator:
    """Pure initial system state ``alpha |g> + sqrt(1 - alpha^2) |e>``."""
    psi = np.array([params.alpha, params.beta_amp], dtype=complex)
    return DensityOperator(np.outer(psi, psi.conj()))


def environment_initial_state(params: GadcParams) -> DensityOperator:
    """Thermal initial environment state ``diag(w0, w1)``."""
    return DensityOperator(np.diag([params.w0, params.w1]).astype(complex))


def joint_initial_state(params: GadcParams) -> DensityOperator:
    """Product of the initial system and environment states."""
    joint = tensor_product(system_initial_state(params),
                           environment_initial_state(params))
    return DensityOperator(joint)


def _gamma_delta(params: GadcParams, t: float):
    if t < 0.0:
        raise InputError(f"time must be nonnegative, got {t}")
    g = math.exp(-params.gamma_rate * t)
    return g, 1.0 - g


def system_state(params: GadcParams, t: float) -> DensityOperator:
    """Closed-form system state at time ``t``.

    With ``gamma = exp(-gamma_rate t)`` and ``delta = 1 - gamma``, the
    matrix in the ``|g>, |e>`` basis is

    * ``rho_gg = [alpha^2 + (1-alpha^2) delta] w0 + alpha^2 gamma w1``
    * ``rho_ge = alpha sqrt(1-alpha^2) sqrt(gamma)``
    * ``rho_ee = (1-alpha^2) gamma w0 + [(1-alpha^2) + alpha^2 delta] w1``

    The populations relax toward ``diag(w0, w1)`` while the coherence
    decays as ``sqrt(gamma)``.
    """
    g, d = _gamma_delta(params, t)
    a2 = params.alpha ** 2
    b2 = 1.0 - a2
    w0, w1 = params.w0, params.w1
    top = (a2 + b2 * d) * w0 + a2 * g * w1
    bot = b2 * g * w0 + (b2 + a2 * d) * w1
    off = params.alpha * params.beta_amp * math.sqrt(g)
    return DensityOperator(np.array([[top, off], [off, bot]], dtype=complex))


def environment_state(params: GadcParams, t: float) -> DensityOperator:
    """Closed-form environment state at time ``t``.

    Mirror image of :func:`system_state` with the roles of ``gamma`` and
    ``delta`` exchanged; the coherence grows as ``sqrt(delta)``, i.e. as
    ``sqrt(1 - exp(-gamma_rate t))``.
    """
    g, d = _gamma_delta(params, t)
    a2 = params.alpha ** 2
    b2 = 1.0 - a2
    w0, w1 = params.w0, params.w1
    top = (a2 + b2 * g) * w0 + a2 * d * w1
    bot = b2 * d * w0 + (b2 + a2 * g) * w1
    off = params.alpha * params.beta_amp * math.sqrt(d)
    return DensityOperator(np.array([[top, off], [off, bot]], dtype=complex))


def joint_state(params: GadcParams, t: float) -> DensityOperator:
    """Joint state evolved with the exact unitary dilation.

    ``U(p(t))`` conjugation of the initial product state, so the joint
    spectrum, and hence the joint entropy, is constant in time. The
    partial trace over the environment reproduces :func:`system_state`
    exactly; the trace over the system reproduces the closed-form
    environment populations but a reduced coherence (see module
    docstring).
    """
    _, d = _gamma_delta(params, t)
    u = gadc_unitary(d)
    m = u @ joint_initial_state(params).matrix @ u.conj().T
    return DensityOperator(m)


def joint_state_closed_form(params: GadcParams, t: float) -> DensityOperator:
    """Joint state family generated by the symmetric coupling matrix.

    With ``g = exp(-gamma_rate t)``, ``d = 1 - g``, ``sg = sqrt(g)``,
    ``sd = sqrt(d)`` and ``a, b`` the initial amplitudes, the matrix in
    the ordered basis ``|g,E0>, |g,E1>, |e,E0>, |e,E1>`` is::

        [ a^2 w0       a b w0 sd                 a b w0 sg                 0         ]
        [ a b w0 sd    a^2 w1 g + b^2 w0 d       (a^2 w1 + b^2 w0) sd sg   a b w1 sg ]
        [ a b w0 sg    (a^2 w1 + b^2 w0) sd sg   a^2 w1 d + b^2 w0 g       a b w1 sd ]
        [ 0            a b w1 sg                 a b w1 sd                 b^2 w1    ]

    Both partial traces of this family equal the closed-form marginals
    entrywise, at the cost of a time-dependent joint spectrum. This is
    the family whose partial transpose feeds the negativity.
    """
    g, d = _gamma_delta(params, t)
    sg, sd = math.sqrt(g), math.sqrt(d)
    a = params.alpha
    b = params.beta_amp
    w0, w1 = params.w0, params.w1
    a2, b2 = a * a, b * b
    m = np.array([
        [a2 * w0, a * b * w0 * sd, a * b * w0 * sg, 0.0],
        [a * b * w0 * sd, a2 * w1 * g + b2 * w0 * d,
         (a2 * w1 + b2 * w0) * sd * sg, a * b * w1 * sg],
        [a * b * w0 * sg, (a2 * w1 + b2 * w0) * sd * sg,
         a2 * w1 * d + b2 * w0 * g, a * b * w1 * sd],
        [0.0, a * b * w1 * sg, a * b * w1 * sd, b2 * w1],
    ], dtype=complex)
    return DensityOperator(m)


def iterate_map_check(params: GadcParams, t: float, n_steps: int) -> DensityOperator:
    """Compose the single-step system channel ``n_steps`` times.

    Each step uses the exact per-step probability ``p = gamma_rate t / n``,
    so the composed damping factor is ``(1 - gamma_rate t / n)^n`` and the
    result converges to :func:`system_state` at rate ``O(1/n)``.
    """
    if n_steps < 1:
        raise InputError(f"n_steps must be at least 1, got {n_steps}")
    if t < 0.0:
        raise InputError(f"time must be nonnegative, got {t}")
    p_step = params.gamma_rate * t / n_steps
    if p_step > 1.0:
        raise InputError(
            f"per-step probability {p_step:.3g} exceeds 1; increase n_steps")
    step = system_kraus(GadcParams(alpha=params.alpha, w0=params.w0,
                                   gamma_rate=params.gamma_rate, p=p_step,
                                   e_g=params.e_g, e_e=params.e_e,
                                   e_0=params.e_0, e_1=params.e_1))
    rho = system_initial_state(params)
    for _ in range(n_steps):
        rho = apply_channel(step, rho)
    return rho


def system_hamiltonian(params: GadcParams) -> np.ndarray:
    """Static system Hamiltonian ``diag(e_g, e_e)`` in the ``|g>, |e>`` basis."""
    return np.diag([params.e_g, params.e_e]).astype(complex)


def environment_hamiltonian(params: GadcParams) -> np.ndarray:
    """Static environment Hamiltonian ``diag(e_0, e_1)``."""
    return np.diag([params.e_0, params.e_1]).astype(complex)


def system_state_from_dilation(params: GadcParams, p: float) -> DensityOperator:
    """System state after one damping step via the unitary dilation route.

    Conjugates the joint initial state with :func:`gadc_unitary` at the
    given ``p`` and traces out the environment. Used as an independent
    route for consistency checks against :func:`system_kraus` and the
    closed forms.
    """
    u = gadc_unitary(p)
    joint = u @ joint_initial_state(params).matrix @ u.conj().T
    return partial_trace(DensityOperator(joint), keep=0, dims=(2, 2))
