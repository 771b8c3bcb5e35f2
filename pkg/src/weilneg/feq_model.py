"""Functional-equation parameters and Dirichlet / log-derivative coefficients.

Coefficients are in the analytic normalisation, where the Ramanujan bound
reads ``|a(p)| <= d``. A weight-k newform coefficient ``A(n)`` becomes
``A(n) / n**((k-1)/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power_base(n: int) -> int | None:
    """Return p if ``n = p**k`` with p prime and k >= 1, else None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
        p += 1
    return n


def von_mangoldt(n: int) -> float:
    if n < 1:
        raise ValueError(f"von_mangoldt needs n >= 1, got {n}")
    p = prime_power_base(n)
    return math.log(p) if p else 0.0


def c_from_a_prime(a_p: float, p: int) -> float:
    """Log-derivative coefficient ``c(p) = -a(p) log p`` at a prime."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return -a_p * math.log(p)


def ramanujan_c_bound(n: int, d: int) -> float:
    """``d * Lambda(n)``, which bounds ``|c(n)|`` under the Ramanujan bound."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    return d * von_mangoldt(n)


@dataclass(frozen=True)
class FunctionalEquationParams:
    """``Q**s prod Gamma(s/2 + mu_j) L(s) = sign * (same at 1 - s)``.

    ``q_scale`` is the scale fed to the explicit formula's log Q term (see
    ``applications.q_of_level`` for how levels map to it). ``sign`` is stored
    for completeness only; no computation reads it. ``degree=0`` is allowed
    as the empty functional equation used in degenerate checks.
    """

    degree: int
    mu: tuple[float, ...]
    q_scale: float
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if len(self.mu) != self.degree:
            raise ValueError(f"expected {self.degree} spectral parameters, got {len(self.mu)}")
        if any(m < 0 for m in self.mu):
            raise ValueError("spectral parameters must be non-negative")
        if not self.q_scale > 0:
            raise ValueError("q_scale must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class CoefficientData:
    """Dirichlet coefficients ``a(n)`` and log-derivative coefficients ``c(n)``."""

    dirichlet: Mapping[int, float] = field(default_factory=lambda: {1: 1.0})
    log_derivative: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        a = dict(self.dirichlet)
        a.setdefault(1, 1.0)
        if a[1] != 1.0:
            raise ValueError("a(1) must equal 1")
        c = dict(self.log_derivative)
        for p, ap in a.items():
            if is_prime(p):
                cp = c_from_a_prime(ap, p)
                if p in c and not math.isclose(c[p], cp, rel_tol=1e-12, abs_tol=1e-15):
                    raise ValueError(f"c({p}) = {c[p]} contradicts a({p}) = {ap}")
                c[p] = cp
        object.__setattr__(self, "dirichlet", MappingProxyType(a))
        object.__setattr__(self, "log_derivative", MappingProxyType(c))

    @classmethod
    def from_primes(cls, a_p: Mapping[int, float]) -> "CoefficientData":
        return cls(dirichlet={1: 1.0, **{int(p): float(v) for p, v in a_p.items()}})

    def satisfies_ramanujan(self, d: int) -> bool:
        return all(abs(v) <= d + 1e-12 for p, v in self.dirichlet.items() if is_prime(p))

    def c(self, n: int) -> float:
        return self.log_derivative[n]


@dataclass(frozen=True)
class CoefficientBound:
    n: int
    bound: float

    @classmethod
    def ramanujan(cls, n: int, d: int) -> "CoefficientBound":
        return cls(n, ramanujan_c_bound(n, d))
