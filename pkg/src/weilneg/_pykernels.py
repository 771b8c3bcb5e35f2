"""Pure numpy implementation of the numerical kernels.

Mirrors ``_ckernels.pyx`` function for function; selected by ``weilneg.kernels``
when the compiled extension is missing or ``WEILNEG_PURE=1``.
"""
import math

import numpy as np

from .errors import PoleError

SHIFT = 10.0
# B_{2n} / (2n) for n = 1..7
BERNOULLI_OVER_2N = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

NAME = "numpy"


def _check_pole(sigma, t):
    bad = (t == 0.0) & (sigma <= 0.0) & (np.floor(sigma) == sigma)
    if np.any(bad):
        raise PoleError(f"digamma has a pole at {float(sigma[bad].flat[0])}")


def digamma_re_array(sigma, t):
    """Re psi(sigma + i t), broadcasting over ``sigma`` and ``t``."""
    sigma = np.asarray(sigma, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(sigma, t)
    _check_pole(x, t)
    x = x.copy()
    t2 = t * t
    acc = np.zeros(x.shape)
    low = x < SHIFT
    while np.any(low):
        xs = x[low]
        acc[low] += (1.0 / (xs + 1j * t[low])).real
        x[low] = xs + 1.0
        low = x < SHIFT
    r2 = x * x + t2
    # 1/w and 1/w^2 for w = x + i t
    ir, ii = x / r2, -t / r2
    sr, si = ir * ir - ii * ii, 2.0 * ir * ii
    pr, pi_ = sr, si
    series = np.zeros(x.shape)
    for c in BERNOULLI_OVER_2N:
        series += c * pr
        pr, pi_ = pr * sr - pi_ * si, pr * si + pi_ * sr
    return 0.5 * np.log(r2) - 0.5 * ir - series - acc


def digamma_re(sigma, t):
    """Scalar Re psi(sigma + i t)."""
    if t == 0.0 and sigma <= 0.0 and math.floor(sigma) == sigma:
        raise PoleError(f"digamma has a pole at {sigma}")
    return float(digamma_re_array(sigma, t))


def fejer_f(delta, x):
    """delta * (sin(pi delta x) / (pi delta x))**2, elementwise."""
    y = math.pi * delta * np.asarray(x, dtype=float)
    small = np.abs(y) < 1e-4
    ys = np.where(small, 1.0, y)
    s = np.sin(ys) / ys
    y2 = y * y
    return delta * np.where(small, 1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 45.0, s * s)


def ell_integrand(mu, delta, t):
    """Re psi(1/4 + mu + i t/2) * f(t) for the Fejer kernel of half-width ``delta``."""
    t = np.asarray(t, dtype=float)
    return digamma_re_array(0.25 + mu, 0.5 * t) * fejer_f(delta, t)


def zero_sum(delta, ordinates):
    """Sum of f(gamma) over the given ordinates."""
    return float(np.sum(fejer_f(delta, ordinates)))
