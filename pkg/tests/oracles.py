"""Reference computations that share no code with the package."""
import math

import mpmath
import numpy as np
from scipy import integrate, special


def ell_gauss(mu, delta=1 / (2 * math.pi)):
    """ell(mu) from psi(z) = int_0^inf (e^-u/u - e^-zu/(1-e^-u)) du.

    Swapping the integrals turns the t-integral into f^(u/4pi), which vanishes
    for u >= 4 pi delta, so only the first piece survives there.
    """
    # the two 1/u singularities cancel near 0; Gauss-Legendre nodes stay clear
    # of the endpoint, where tanh-sinh would sample u ~ 1e-200
    with mpmath.workdps(40):
        s0 = mpmath.mpf(0.25) + mu
        cut = 4 * mpmath.pi * delta
        head = mpmath.quad(lambda u: mpmath.exp(-u) / u
                           - mpmath.exp(-s0 * u) * (1 - u / cut) / (1 - mpmath.exp(-u)),
                           [0, cut], method="gauss-legendre")
        return float(head + mpmath.e1(cut) - mpmath.log(mpmath.pi))


def ell_romberg(mu, delta=1 / (2 * math.pi), periods=1000, levels=19):
    """Romberg ladder on [0, T] plus a mean-value tail beyond T.

    T sits on a zero of sin^2 so the dropped oscillation starts from rest;
    past T, sin^2 is replaced by its mean 1/2.
    """
    T = periods / delta
    t = np.linspace(0.0, T, 2**levels + 1)
    sinc2 = np.sinc(delta * t) ** 2  # numpy sinc is sin(pi x)/(pi x)
    g = special.psi(0.25 + mu + 0.5j * t).real * delta * sinc2
    head = integrate.romb(g, dx=t[1] - t[0])
    tail = integrate.quad(lambda s: special.psi(0.25 + mu + 0.5j * s).real
                          / (2 * np.pi**2 * delta * s * s), T, np.inf, limit=200)[0]
    return 2 * (head + tail) - math.log(math.pi)


def fejer_f(delta, x):
    return delta * np.sinc(delta * np.asarray(x, dtype=float)) ** 2
