"""Real part of the digamma function and quadrature over the real line.

The quadrature targets even integrands whose envelope decays like
``log(t) / t**2`` (the archimedean term of the explicit formula). Such tails
are far too heavy to truncate: bounding them by their envelope at 1e-8 would
need a half-width near 1e9. Instead the half-line is integrated over doubling
segments ``[T, 2T]`` and the remaining tail is extrapolated from the last two
segments under the model ``(a + b log t) / t**2``; the integral is accepted once
successive extrapolations agree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import NonConvergence

# Gauss-Kronrod 7/15 on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class ComplexPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite point {self.re!r} + {self.im!r}i")


class TailModel(enum.Enum):
    LogOverTSquared = "log_over_t_squared"


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for :func:`integrate_even_decaying`.

    ``max_halfwidth`` caps the doubling of the integration window;
    ``initial_halfwidth`` is where doubling starts.
    """

    tolerance: float = 1e-8
    max_halfwidth: float = 2.0**21
    tail_model: TailModel = TailModel.LogOverTSquared
    initial_halfwidth: float = 32.0
    panel_width: float = 4.0
    max_panels: int = 4_000_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not self.max_halfwidth >= 10:
            raise ValueError("max_halfwidth must be at least 10")
        if not 0 < self.initial_halfwidth <= self.max_halfwidth:
            raise ValueError("initial_halfwidth must lie in (0, max_halfwidth]")
        if not self.panel_width > 0:
            raise ValueError("panel_width must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    halfwidth: float
    envelope_bound: float
    panels: int


def digamma_re(z) -> float:
    """Re psi(z) for a :class:`ComplexPoint`, complex or real ``z``.

    Shifts by the recurrence until Re z >= 10, then sums the asymptotic series
    through B_14.
    """
    if isinstance(z, ComplexPoint):
        return kernels.digamma_re(float(z.re), float(z.im))
    z = complex(z)
    return kernels.digamma_re(z.real, z.imag)


def _gk_panels(g, lo, hi, anchor):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(g(x.ravel()), dtype=float).reshape(x.shape)
    k = (y @ _KWEIGHTS) * half
    gs = (y @ _GWEIGHTS) * half
    moment = None
    if anchor is not None:
        moment = ((y * (anchor - x)) @ _KWEIGHTS) * half
    return k, np.abs(k - gs), moment


def integrate_panels(g: Callable, a: float, b: float, tol: float,
                     panel_width: float = 4.0, max_panels: int = 4_000_000,
                     anchor: float | None = None):
    """Adaptive Gauss-Kronrod over ``[a, b]`` with vectorised panel evaluation.

    Returns ``(value, error_estimate, panels_used, moment)`` where ``moment`` is
    the integral of ``(anchor - t) * g(t)`` on the same panels (``0.0`` when no
    anchor is given).
    """
    if b <= a:
        return 0.0, 0.0, 0, 0.0
    n = max(1, math.ceil((b - a) / panel_width))
    edges = np.linspace(a, b, n + 1)
    lo, hi = edges[:-1], edges[1:]
    length = b - a
    total = err_total = moment_total = 0.0
    used = 0
    while lo.size:
        used += lo.size
        if used > max_panels:
            raise NonConvergence(
                f"panel budget {max_panels} exhausted on [{a}, {b}]",
                estimate=total, error_estimate=math.inf)
        k, err, moment = _gk_panels(g, lo, hi, anchor)
        width = hi - lo
        ok = (err <= tol * width / length) | (width < 1e-12 * max(1.0, abs(b)))
        total += float(np.sum(k[ok]))
        err_total += float(np.sum(err[ok]))
        if moment is not None:
            moment_total += float(np.sum(moment[ok]))
        mid = 0.5 * (lo[~ok] + hi[~ok])
        lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
    return total, err_total, used, moment_total


def _envelope_constant(g, T):
    # sampled over short windows: the kernels vanish on lattices, so isolated
    # points (T, 2T, 4T) can land exactly on zeros
    t = np.concatenate([np.linspace(s * T, s * T * 1.05, 65) for s in (1.0, 2.0, 4.0)])
    vals = np.abs(np.asarray(g(t), dtype=float)) * t * t / (1.0 + np.log(t))
    return 2.0 * float(np.max(vals))


def integrate_even_decaying(g: Callable, spec: QuadratureSpec | None = None,
                            full_output: bool = False):
    """Integral of an even integrand ``g`` over the whole real line.

    ``g`` must accept a numpy array and return values of the same shape, and
    decay at least like ``log(t)/t**2`` on average.

    Raises
    ------
    NonConvergence
        If successive tail extrapolations still disagree by more than the
        tolerance once the window reaches ``spec.max_halfwidth``.
    """
    spec = spec or QuadratureSpec()
    tol_half = 0.5 * spec.tolerance
    seg_tol = tol_half / 16.0
    T = spec.initial_halfwidth
    partial, qerr, panels, _ = integrate_panels(g, 0.0, T, seg_tol, spec.panel_width,
                                                spec.max_panels)
    # rows (ln2/T, ln2/T * ln T, M(T)) where M(T) is the cut-off integral
    # averaged over cut points in [T, 2T]; averaging damps oscillating tails
    rows = []
    estimates = []
    while True:
        if 2.0 * T > spec.max_halfwidth:
            best = estimates[-1] if estimates else partial
            diff = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else math.inf
            raise NonConvergence(
                f"tail extrapolation did not settle below {spec.tolerance:g} "
                f"by half-width {T:g}",
                estimate=2.0 * best, error_estimate=2.0 * (diff + qerr))
        s, e, used, w = integrate_panels(g, T, 2.0 * T, seg_tol, spec.panel_width,
                                         spec.max_panels - panels, anchor=2.0 * T)
        panels += used
        x = math.log(2.0) / T
        rows.append((x, x * math.log(T), partial + w / T))
        partial += s
        qerr += e
        T *= 2.0
        if len(rows) < 3:
            continue
        # M(T) = I - (ln2/T) * (alpha + b ln T) under the (a + b log t)/t^2 tail
        A = np.array([[1.0, -r[0], -r[1]] for r in rows[-3:]])
        rhs = np.array([r[2] for r in rows[-3:]])
        estimates.append(float(np.linalg.solve(A, rhs)[0]))
        if len(estimates) >= 3:
            d1 = abs(estimates[-1] - estimates[-2])
            d2 = abs(estimates[-2] - estimates[-3])
            if max(d1, d2) + qerr <= 0.5 * tol_half:
                break
    value = 2.0 * estimates[-1]
    if not full_output:
        return value
    C = _envelope_constant(g, T)
    return QuadratureResult(
        value=value,
        error_estimate=2.0 * (abs(estimates[-1] - estimates[-2]) + qerr),
        halfwidth=T,
        envelope_bound=C * (1.0 + math.log(T)) / T,
        panels=panels,
    )
