"""Independent reference values for the first-law integrals.

Everything here is deliberately disjoint from the package internals: the
closed-form states are rewritten inline, eigensystems come from
``numpy.linalg.eigh`` instead of the package Jacobi solver, and the time
integrals come from adaptive quadrature over central-difference
derivatives instead of the package's fixed-grid trapezoid pipeline.

``FROZEN`` holds (heat, coherent energy) values produced by the
high-precision mpmath route; regenerate them with

    python3 tests/oracles.py

which requires mpmath and prints the table at 40 working digits.
``heat_and_coherent`` is the fast scipy route used inside the tests to
cross-check the package at a few time points without any frozen data.
"""

import math

import numpy as np

W0_DEFAULT = 1.0 / (1.0 + math.exp(-1.0))
ALPHA_DEFAULT = 1.0 / math.sqrt(2.0)

# (side, t) -> (heat, coherent_energy), defaults: alpha = 1/sqrt(2),
# beta = 1, gamma_rate = 1, energy gap 1. mpmath, dps = 40, rounded to
# 12 significant digits.
FROZEN = {
    ("system", 0.5): (0.0106022768438, -0.101516743345),
    ("system", 2.0): (0.0685763260675, -0.268364526514),
    ("system", 10.0): (0.103457395345, -0.334505483932),
    ("environment", 0.5): (-0.0752040475774, 0.166118514079),
    ("environment", 2.0): (-0.102355031557, 0.302143232004),
    ("environment", 10.0): (-0.103471465078, 0.334519553665),
}

# Long-time system heat (t = 40, indistinguishable from the limit at
# double precision).
ASYMPTOTIC_SYSTEM_HEAT = 0.103471465197


def state_matrix(side, t, alpha=ALPHA_DEFAULT, w0=W0_DEFAULT):
    """Closed-form marginal state, written independently of the package."""
    g = math.exp(-t)
    d = 1.0 - g
    if side == "environment":
        g, d = d, g
    a2 = alpha * alpha
    b2 = 1.0 - a2
    w1 = 1.0 - w0
    top = (a2 + b2 * d) * w0 + a2 * g * w1
    bot = b2 * g * w0 + (b2 + a2 * d) * w1
    off = alpha * math.sqrt(b2) * math.sqrt(g)
    return np.array([[top, off], [off, bot]])


def _spectral(side, t):
    lam, vec = np.linalg.eigh(state_matrix(side, t))
    return lam, np.abs(vec) ** 2


def _integrands(side, t, h=1e-6):
    """(heat, coherent) integrands via central differences.

    The Hamiltonian is diag(0, 1), so only the excited row of the
    overlap table contributes.
    """
    lo = max(t - h, 0.0)
    lam_m, w_m = _spectral(side, lo)
    lam_p, w_p = _spectral(side, t + h)
    lam, w = _spectral(side, t)
    span = (t + h) - lo
    dlam = (lam_p - lam_m) / span
    dw = (w_p - w_m) / span
    heat = float(np.sum(w[1, :] * dlam))
    coherent = float(np.sum(lam * dw[1, :]))
    return heat, coherent


def heat_and_coherent(side, t_final):
    """Integrate the two first-law terms from 0 to t_final with quad."""
    from scipy.integrate import quad

    heat, _ = quad(lambda t: _integrands(side, t)[0], 0.0, t_final,
                   epsabs=1e-11, epsrel=1e-11, limit=200)
    coh, _ = quad(lambda t: _integrands(side, t)[1], 0.0, t_final,
                  epsabs=1e-11, epsrel=1e-11, limit=200)
    return heat, coh


def _regenerate():
    """Print the FROZEN table at 40 working digits (needs mpmath)."""
    import mpmath as mp

    mp.mp.dps = 40
    w0 = 1 / (1 + mp.exp(-1))
    alpha2 = mp.mpf(1) / 2

    def entries(side, t):
        g = mp.exp(-t)
        d = 1 - g
        if side == "environment":
            g, d = d, g
        b2 = 1 - alpha2
        w1 = 1 - w0
        top = (alpha2 + b2 * d) * w0 + alpha2 * g * w1
        bot = b2 * g * w0 + (b2 + alpha2 * d) * w1
        off = mp.sqrt(alpha2) * mp.sqrt(b2) * mp.sqrt(g)
        return top, bot, off

    def spectral(side, t):
        a, b, c = entries(side, t)
        mean = (a + b) / 2
        disc = mp.sqrt(((a - b) / 2) ** 2 + c * c)
        lam = [mean - disc, mean + disc]
        weights = []
        for lv in lam:
            vx, vy = (c, lv - a) if abs(c) > mp.mpf("1e-30") \
                else (1 if lv == a else 0, 1 if lv != a else 0)
            n2 = vx * vx + vy * vy
            weights.append(vy * vy / n2)
        return lam, weights

    h = mp.mpf("1e-12")

    def heat_integrand(side, t):
        lam_m, w_m = spectral(side, t - h)
        lam_p, w_p = spectral(side, t + h)
        _, w = spectral(side, t)
        return sum(wk * (lp - lm) / (2 * h)
                   for wk, lp, lm in zip(w, lam_p, lam_m))

    def coh_integrand(side, t):
        _, w_m = spectral(side, t - h)
        _, w_p = spectral(side, t + h)
        lam, _ = spectral(side, t)
        return sum(lk * (wp - wm) / (2 * h)
                   for lk, wp, wm in zip(lam, w_p, w_m))

    for side in ("system", "environment"):
        for t in (mp.mpf("0.5"), mp.mpf(2), mp.mpf(10)):
            q = mp.quad(lambda x: heat_integrand(side, x), [h, t])
            c = mp.quad(lambda x: coh_integrand(side, x), [h, t])
            print(f'    ("{side}", {float(t)}): '
                  f'({mp.nstr(q, 12)}, {mp.nstr(c, 12)}),')
    q40 = mp.quad(lambda x: heat_integrand("system", x), [h, mp.mpf(40)])
    print(f"ASYMPTOTIC_SYSTEM_HEAT = {mp.nstr(q40, 12)}")


if __name__ == "__main__":
    _regenerate()
