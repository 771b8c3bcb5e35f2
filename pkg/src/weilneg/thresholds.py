"""Existence and forced-sign thresholds Q0 < Q1.

Under the Ramanujan bound and RH the zero side of the explicit formula is at
least ``r f(0)``. Solving "largest right side = r f(0)" for log Q gives Q0;
doing the same with ``c(2)`` pinned at 0 (its largest value compatible with
``a(2) >= 0``) gives Q1. Between the two, only ``a(2) < 0`` balances.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .ef_engine import ell_term, prime_weight, window_prime_powers
from .feq_model import von_mangoldt
from .special_fn import QuadratureSpec
from .test_fn import FejerTestFunction


class Classification(enum.IntEnum):
    Impossible = 0
    ForcedNegativeA2 = 1
    Unconstrained = 2


@dataclass(frozen=True)
class Assumptions:
    ramanujan: bool = True
    riemann_hypothesis: bool = True


@dataclass(frozen=True)
class ThresholdResult:
    q0: float
    q1: float
    rank: int
    ell_sum: float
    ell_terms: tuple[float, ...] = ()
    kappa2: float = 0.0
    assumptions: Assumptions = field(default_factory=Assumptions)

    def __post_init__(self):
        if not 0 < self.q0 < self.q1:
            raise ValueError(f"thresholds out of order: q0={self.q0}, q1={self.q1}")


@dataclass(frozen=True)
class PredictionOutcome:
    classification: Classification
    a2_upper_bound: float | None
    thresholds: ThresholdResult
    q_eff: float

    def __post_init__(self):
        # only the boundary point q == Q1 reaches 0
        if (self.classification is Classification.ForcedNegativeA2
                and not (self.a2_upper_bound is not None and self.a2_upper_bound <= 1e-9)):
            raise ValueError("a forced-negative outcome needs a non-positive a(2) bound")


def _pieces(d: int, mu_list: Sequence[float], tf: FejerTestFunction, spec):
    if len(mu_list) != d:
        raise ValueError(f"degree {d} needs {d} spectral parameters, got {len(mu_list)}")
    ells = tuple(ell_term(m, tf, spec) for m in mu_list)
    windows = window_prime_powers(tf)
    maxima = {n: prime_weight(n, tf) * d * von_mangoldt(n) for n in windows}
    return ells, maxima


def _log_threshold(ells, prime_total, rank, tf):
    return (math.pi / tf.f_hat0) * (rank * tf.f0 - sum(ells) / (2.0 * math.pi) - prime_total)


def compute_thresholds(d: int, mu_list: Sequence[float], rank: int = 0,
                       tf: FejerTestFunction | None = None,
                       spec: QuadratureSpec | None = None) -> ThresholdResult:
    """Q0 and Q1 for degree ``d``, spectral parameters ``mu_list`` and ``rank`` central zeros."""
    if rank < 0:
        raise ValueError("rank must be non-negative")
    tf = tf or FejerTestFunction()
    ells, maxima = _pieces(d, mu_list, tf, spec)
    others = sum(v for n, v in maxima.items() if n != 2)
    log_q0 = _log_threshold(ells, others + maxima[2], rank, tf)
    log_q1 = _log_threshold(ells, others, rank, tf)
    return ThresholdResult(math.exp(log_q0), math.exp(log_q1), rank, sum(ells), ells,
                           prime_weight(2, tf))


def a2_upper_bound(d: int, mu_list: Sequence[float], q_eff: float, rank: int = 0,
                   tf: FejerTestFunction | None = None,
                   spec: QuadratureSpec | None = None) -> float:
    """Largest normalised a(2) for which the right side can still reach ``r f(0)``."""
    tf = tf or FejerTestFunction()
    ells, maxima = _pieces(d, mu_list, tf, spec)
    g = (tf.f_hat0 / math.pi * math.log(q_eff) + sum(ells) / (2.0 * math.pi)
         + sum(v for n, v in maxima.items() if n != 2))
    return (g - rank * tf.f0) / (prime_weight(2, tf) * math.log(2))


def classify(q_eff: float, d: int, mu_list: Sequence[float], rank: int = 0,
             tf: FejerTestFunction | None = None,
             spec: QuadratureSpec | None = None,
             thresholds: ThresholdResult | None = None) -> PredictionOutcome:
    """Impossible if q <= Q0, ForcedNegativeA2 if Q0 < q <= Q1, else Unconstrained."""
    if not q_eff > 0:
        raise ValueError("q_eff must be positive")
    tf = tf or FejerTestFunction()
    th = thresholds or compute_thresholds(d, mu_list, rank, tf, spec)
    if q_eff <= th.q0:
        return PredictionOutcome(Classification.Impossible, None, th, q_eff)
    ub = a2_upper_bound(d, mu_list, q_eff, rank, tf, spec)
    if q_eff <= th.q1:
        return PredictionOutcome(Classification.ForcedNegativeA2, ub, th, q_eff)
    return PredictionOutcome(Classification.Unconstrained, ub, th, q_eff)
