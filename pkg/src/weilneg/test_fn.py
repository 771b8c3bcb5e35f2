"""Fejer test-function pair used in the explicit formula.

``f(x) = delta * (sin(pi delta x) / (pi delta x))**2`` is non-negative and its
Fourier transform (kernel ``exp(-2 pi i u x)``) is the triangle
``max(0, 1 - |x| / delta)``. ``delta = 1/(2 pi)`` gives
``f(x) = sin(x/2)**2 / (2 pi (x/2)**2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateSupport

DEFAULT_DELTA = 1.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class FejerTestFunction:
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")

    def f(self, x):
        return eval_f(self, x)

    def f_hat(self, x):
        return eval_f_hat(self, x)

    @property
    def f0(self) -> float:
        return self.delta

    @property
    def f_hat0(self) -> float:
        return 1.0


def eval_f(tf: FejerTestFunction, x):
    """f at ``x`` (scalar or array); equals ``delta`` at the origin."""
    out = kernels.fejer_f(tf.delta, x)
    return float(out) if np.ndim(out) == 0 else out


def eval_f_hat(tf: FejerTestFunction, x):
    """Triangle ``max(0, 1 - |x|/delta)``."""
    out = np.maximum(0.0, 1.0 - np.abs(np.asarray(x, dtype=float)) / tf.delta)
    return float(out) if np.ndim(out) == 0 else out


def frequency(n: int) -> float:
    """Point ``log(n) / (2 pi)`` at which f-hat weights the n-th prime-side term."""
    return math.log(n) / (2.0 * math.pi)


def support_window(tf: FejerTestFunction) -> tuple[int, int]:
    """Integers ``n >= 2`` whose frequency lies strictly inside the support.

    Returns ``(2, n_max)``; raises :class:`DegenerateSupport` when even
    ``n = 2`` falls outside.
    """
    if frequency(2) >= tf.delta:
        raise DegenerateSupport(
            f"delta={tf.delta:g} <= log(2)/(2 pi): no prime term is visible")
    n = max(2, int(math.floor(math.exp(2.0 * math.pi * tf.delta))))
    while frequency(n) >= tf.delta:
        n -= 1
    while frequency(n + 1) < tf.delta:
        n += 1
    return 2, n
