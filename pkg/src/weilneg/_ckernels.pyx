# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; same surface as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, sin, floor, fabs, M_PI

from .errors import PoleError

cnp.import_array()

NAME = "cython"

cdef double SHIFT = 10.0
cdef double[7] B2N
B2N[:] = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
          1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0]


cdef inline bint _is_pole(double sigma, double t) noexcept nogil:
    return t == 0.0 and sigma <= 0.0 and floor(sigma) == sigma


cdef inline double _re_recip(double x, double t) noexcept nogil:
    # Re 1/(x + i t) without squaring tiny or huge components
    cdef double r
    if fabs(x) >= fabs(t):
        r = t / x
        return 1.0 / (x * (1.0 + r * r))
    r = x / t
    return r / (t * (1.0 + r * r))


cdef double _digamma_re(double x, double t) noexcept nogil:
    cdef double t2 = t * t, acc = 0.0
    cdef double r2, ir, ii, sr, si, pr, pi_, tmp, series = 0.0
    cdef int n
    while x < SHIFT:
        acc += _re_recip(x, t)
        x += 1.0
    r2 = x * x + t2
    ir = x / r2
    ii = -t / r2
    sr = ir * ir - ii * ii
    si = 2.0 * ir * ii
    pr = sr
    pi_ = si
    for n in range(7):
        series += B2N[n] * pr
        tmp = pr * sr - pi_ * si
        pi_ = pr * si + pi_ * sr
        pr = tmp
    return 0.5 * log(r2) - 0.5 * ir - series - acc


cdef inline double _fejer(double delta, double x) noexcept nogil:
    cdef double y = M_PI * delta * x, s
    if fabs(y) < 1e-4:
        return delta * (1.0 - y * y / 3.0 + 2.0 * y * y * y * y / 45.0)
    s = sin(y) / y
    return delta * s * s


def digamma_re(double sigma, double t):
    """Scalar Re psi(sigma + i t)."""
    if _is_pole(sigma, t):
        raise PoleError(f"digamma has a pole at {sigma}")
    return _digamma_re(sigma, t)


def digamma_re_array(sigma, t):
    """Re psi(sigma + i t), broadcasting over ``sigma`` and ``t``."""
    s_b, t_b = np.broadcast_arrays(np.asarray(sigma, dtype=np.float64),
                                   np.asarray(t, dtype=np.float64))
    shape = s_b.shape
    cdef double[::1] sv = np.ascontiguousarray(s_b).ravel()
    cdef double[::1] tv = np.ascontiguousarray(t_b).ravel()
    cdef Py_ssize_t i, n = sv.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    for i in range(n):
        if _is_pole(sv[i], tv[i]):
            raise PoleError(f"digamma has a pole at {sv[i]}")
    with nogil:
        for i in range(n):
            ov[i] = _digamma_re(sv[i], tv[i])
    return out.reshape(shape)


def fejer_f(double delta, x):
    """delta * (sin(pi delta x) / (pi delta x))**2, elementwise."""
    xa = np.asarray(x, dtype=np.float64)
    shape = xa.shape
    cdef double[::1] xv = np.ascontiguousarray(xa).ravel()
    cdef Py_ssize_t i, n = xv.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _fejer(delta, xv[i])
    return out.reshape(shape)


def ell_integrand(double mu, double delta, t):
    """Re psi(1/4 + mu + i t/2) * f(t) for the Fejer kernel of half-width ``delta``."""
    ta = np.asarray(t, dtype=np.float64)
    shape = ta.shape
    cdef double[::1] tv = np.ascontiguousarray(ta).ravel()
    cdef Py_ssize_t i, n = tv.shape[0]
    cdef double sigma = 0.25 + mu
    out = np.empty(n)
    cdef double[::1] ov = out
    if sigma <= 0.0 and floor(sigma) == sigma:
        for i in range(n):
            if tv[i] == 0.0:
                raise PoleError(f"digamma has a pole at {sigma}")
    with nogil:
        for i in range(n):
            ov[i] = _digamma_re(sigma, 0.5 * tv[i]) * _fejer(delta, tv[i])
    return out.reshape(shape)


def zero_sum(double delta, ordinates):
    """Sum of f(gamma) over the given ordinates."""
    cdef double[::1] gv = np.ascontiguousarray(ordinates, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = gv.shape[0]
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += _fejer(delta, gv[i])
    return acc
