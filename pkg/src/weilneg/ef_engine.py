"""Term-by-term evaluation of the explicit formula.

    sum_gamma f(gamma) = f^(0)/pi * log Q + 1/(2 pi) * sum_j ell(mu_j, f)
                         + 1/pi * sum_n c(n)/sqrt(n) * f^(log n / 2 pi)

with ``ell(mu, f) = int Re psi(1/4 + mu + i t/2) f(t) dt - f^(0) log pi``.
Because of the ``- log pi`` inside every ell term, the Q used here is the
scale ``Q_an * pi**(d/2)`` where ``Q_an`` is the factor in the completed
L-function; for a newform of level N this is ``sqrt(N)``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import IncompleteData
from .feq_model import CoefficientData, FunctionalEquationParams, von_mangoldt
from .special_fn import QuadratureSpec, integrate_even_decaying
from .test_fn import FejerTestFunction, frequency, support_window


@dataclass(frozen=True)
class ExplicitFormulaBreakdown:
    logq_term: float
    ell_terms: tuple[float, ...]
    prime_terms: Mapping[int, float]
    rhs_total: float
    zero_lower_bound: float = 0.0

    def recompute_total(self) -> float:
        return (self.logq_term + sum(self.ell_terms) / (2.0 * math.pi)
                + sum(self.prime_terms.values()))


@dataclass(frozen=True)
class ZeroList:
    """Ordinates ``gamma >= 0`` of zeros ``1/2 + i gamma``; central zeros appear as 0.0."""

    ordinates: tuple[float, ...]
    central_multiplicity: int = 0

    def __post_init__(self):
        ords = tuple(float(g) for g in self.ordinates)
        if any(g < 0 for g in ords):
            raise ValueError("only non-negative ordinates are stored")
        if list(ords) != sorted(ords):
            raise ValueError("ordinates must be sorted ascending")
        object.__setattr__(self, "ordinates", ords)
        if sum(1 for g in ords if g == 0.0) not in (0, self.central_multiplicity):
            raise ValueError("central_multiplicity disagrees with the zero ordinates listed")

    @classmethod
    def with_central(cls, positive: Sequence[float], r: int) -> "ZeroList":
        return cls(tuple([0.0] * r) + tuple(sorted(positive)), r)

    def positive(self) -> np.ndarray:
        return np.array([g for g in self.ordinates if g > 0.0])


class _EllCache:
    """Memo of ell(mu, f) keyed by (mu, delta, tolerance)."""

    def __init__(self):
        self._values: dict[tuple[float, float, float], float] = {}
        self._lock = threading.Lock()
        self.evaluations = 0

    def get(self, key):
        return self._values.get(key)

    def put(self, key, value):
        with self._lock:
            if key not in self._values:
                self._values[key] = value
                self.evaluations += 1
            return self._values[key]

    def clear(self):
        with self._lock:
            self._values.clear()
            self.evaluations = 0

    def __len__(self):
        return len(self._values)


ELL_CACHE = _EllCache()


def ell_integral(mu: float, tf: FejerTestFunction, spec: QuadratureSpec | None = None) -> float:
    """``int Re psi(1/4 + mu + i t/2) f(t) dt`` without the log pi shift."""
    if mu < 0:
        raise ValueError("mu must be non-negative")
    spec = spec or QuadratureSpec()
    return integrate_even_decaying(lambda t: kernels.ell_integrand(mu, tf.delta, t), spec)


def ell_term(mu: float, tf: FejerTestFunction, spec: QuadratureSpec | None = None) -> float:
    """Archimedean term ``ell(mu, f)``; memoised per (mu, delta, tolerance)."""
    spec = spec or QuadratureSpec()
    key = (float(mu), float(tf.delta), float(spec.tolerance))
    hit = ELL_CACHE.get(key)
    if hit is not None:
        return hit
    value = ell_integral(mu, tf, spec) - tf.f_hat0 * math.log(math.pi)
    return ELL_CACHE.put(key, value)


def prime_weight(n: int, tf: FejerTestFunction) -> float:
    """Coefficient of c(n) on the right side: ``f^(log n/2pi) / (pi sqrt n)``."""
    return float(tf.f_hat(frequency(n))) / (math.pi * math.sqrt(n))


def window_prime_powers(tf: FejerTestFunction) -> list[int]:
    lo, hi = support_window(tf)
    return [n for n in range(lo, hi + 1) if von_mangoldt(n) > 0]


def _assemble(q_eff, ell_terms, prime_terms, tf, rank) -> ExplicitFormulaBreakdown:
    logq = tf.f_hat0 / math.pi * math.log(q_eff)
    prime_terms = dict(prime_terms)
    total = logq + sum(ell_terms) / (2.0 * math.pi) + sum(prime_terms.values())
    return ExplicitFormulaBreakdown(logq, tuple(ell_terms), prime_terms, total,
                                    rank * tf.f0)


def rhs_max(feq: FunctionalEquationParams, tf: FejerTestFunction, rank: int = 0,
            spec: QuadratureSpec | None = None) -> ExplicitFormulaBreakdown:
    """Largest possible right side when every |c(n)| sits at ``d * Lambda(n)``."""
    ells = [ell_term(m, tf, spec) for m in feq.mu]
    primes = {n: prime_weight(n, tf) * feq.degree * von_mangoldt(n)
              for n in window_prime_powers(tf)}
    return _assemble(feq.q_scale, ells, primes, tf, rank)


def rhs_actual(feq: FunctionalEquationParams, coeffs: CoefficientData,
               tf: FejerTestFunction, spec: QuadratureSpec | None = None,
               rank: int = 0) -> ExplicitFormulaBreakdown:
    """Right side from the actual log-derivative coefficients."""
    ells = [ell_term(m, tf, spec) for m in feq.mu]
    primes = {}
    for n in window_prime_powers(tf):
        if n not in coeffs.log_derivative:
            raise IncompleteData(f"c({n}) is needed for delta={tf.delta:g} but missing")
        primes[n] = prime_weight(n, tf) * coeffs.log_derivative[n]
    return _assemble(feq.q_scale, ells, primes, tf, rank)


def zero_side(zeros: ZeroList, tf: FejerTestFunction, height: float = math.inf) -> float:
    """``r f(0) + 2 sum_{0 < gamma <= height} f(gamma)``."""
    pos = zeros.positive()
    pos = pos[pos <= height]
    return zeros.central_multiplicity * tf.f0 + 2.0 * kernels.zero_sum(tf.delta, pos)


def zero_tail_bound(feq: FunctionalEquationParams, tf: FejerTestFunction, height: float) -> float:
    """Upper bound for ``2 sum_{gamma > height} f(gamma)``.

    Uses ``f(t) <= 1/(pi^2 delta t^2)`` and the smooth zero density
    ``(1/pi) log Q + (1/2pi) sum_j (Re psi(1/4 + mu_j + it/2) - log pi)``
    with ``Re psi(z) <= log|z|``, plus one envelope value per
    ``1 + d log T`` zeros to absorb counting fluctuations near ``height``.
    """
    T = float(height)
    if T <= 1.0:
        raise ValueError("height must exceed 1")
    d = feq.degree
    alpha = math.log(feq.q_scale) / math.pi
    alpha += sum(math.log(0.5 + (0.25 + m) / T) - math.log(math.pi) for m in feq.mu) / (2 * math.pi)
    beta = d / (2.0 * math.pi)
    scale = 1.0 / (math.pi**2 * tf.delta)
    integral = max(0.0, alpha + beta * (1.0 + math.log(T))) * scale / T
    jitter = (1.0 + d * math.log(T)) * scale / T**2 if d else 0.0
    return 2.0 * (integral + jitter)


@dataclass(frozen=True)
class ResidualReport:
    lhs_truncated: float
    rhs: float
    tail_bound: float
    height: float
    breakdown: ExplicitFormulaBreakdown = field(repr=False)

    @property
    def residual(self) -> float:
        return abs(self.lhs_truncated - self.rhs)

    def within_budget(self, quadrature_budget: float = 1e-6) -> bool:
        return self.residual <= self.tail_bound + quadrature_budget


def explicit_formula_residual(feq: FunctionalEquationParams, coeffs: CoefficientData,
                              zeros: ZeroList, tf: FejerTestFunction, height: float,
                              spec: QuadratureSpec | None = None) -> ResidualReport:
    """Both sides of the explicit formula for concrete data truncated at ``height``."""
    lhs = zero_side(zeros, tf, height)
    bd = rhs_actual(feq, coeffs, tf, spec)
    return ResidualReport(lhs, bd.rhs_total, zero_tail_bound(feq, tf, height), height, bd)
