# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: moment-equation right-hand side, Dormand-Prince 5(4)
integration of the moment set, and potential grid evaluation.

Moment vector layout (complex, length 12):
    0 <b_L>  1 <b_R>  2 L1  3 L2  4 L3  5 R1  6 R2  7 R3  8 C1  9 C2  10 C3  11 C4
"""

import numpy as np
from libc.math cimport cos, sqrt, fabs, pow, M_PI
from libc.math cimport fmax, fmin

from ._errors import IntegrationError

cdef enum:
    NM = 12

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176
cdef double A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784
cdef double B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40

cdef enum:
    OK = 0
    UNDERFLOW = 1
    BUDGET = 2


cdef inline double complex conj(double complex z) nogil:
    return z.real - 1j * z.imag


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void _rhs(const double complex* y, double complex* dy,
               double xi, double kL, double kR) nogil:
    cdef double kp2 = 0.5 * (kL + kR)
    dy[0] = -0.5 * kL * y[0] - xi * conj(y[1])
    dy[1] = -0.5 * kR * y[1] - xi * conj(y[0])
    dy[2] = -kL * y[2] - xi * y[9]
    dy[3] = -kL * y[3] - xi * (y[8] + y[11]) + kL
    dy[4] = -kL * y[4] - xi * y[10]
    dy[5] = -kR * y[5] - xi * y[10]
    dy[6] = -kR * y[6] - xi * (y[8] + y[11]) + kR
    dy[7] = -kR * y[7] - xi * y[9]
    dy[8] = -kp2 * y[8] - xi * (y[3] + y[6])
    dy[9] = -kp2 * y[9] - 2 * xi * (y[7] + y[2])
    dy[10] = -kp2 * y[10] - 2 * xi * (y[5] + y[4])
    dy[11] = -kp2 * y[11] - xi * (y[3] + y[6])


cdef double _norm(const double complex* v) nogil:
    cdef double s = 0
    cdef int i
    for i in range(NM):
        s += cabs2(v[i])
    return sqrt(s)


cdef struct Stepper:
    double xi
    double kL
    double kR
    double rtol
    double atol
    double h
    long steps
    long rejected
    long max_steps
    double complex k[7][NM]


cdef int _advance(Stepper* s, double complex* y, double* t, double t_end) nogil:
    """Integrate y from t to t_end in place; FSAL stage k[0] must hold f(y)."""
    cdef double complex ytmp[NM]
    cdef double complex ynew[NM]
    cdef double h, err, sc, fac, yi, yn
    cdef double complex e
    cdef int i
    cdef bint last
    while t[0] < t_end:
        if s.steps >= s.max_steps:
            return BUDGET
        h = s.h
        last = False
        if t[0] + h >= t_end:
            h = t_end - t[0]
            last = True
        for i in range(NM):
            ytmp[i] = y[i] + h * A21 * s.k[0][i]
        _rhs(ytmp, s.k[1], s.xi, s.kL, s.kR)
        for i in range(NM):
            ytmp[i] = y[i] + h * (A31 * s.k[0][i] + A32 * s.k[1][i])
        _rhs(ytmp, s.k[2], s.xi, s.kL, s.kR)
        for i in range(NM):
            ytmp[i] = y[i] + h * (A41 * s.k[0][i] + A42 * s.k[1][i] + A43 * s.k[2][i])
        _rhs(ytmp, s.k[3], s.xi, s.kL, s.kR)
        for i in range(NM):
            ytmp[i] = y[i] + h * (A51 * s.k[0][i] + A52 * s.k[1][i] + A53 * s.k[2][i]
                                  + A54 * s.k[3][i])
        _rhs(ytmp, s.k[4], s.xi, s.kL, s.kR)
        for i in range(NM):
            ytmp[i] = y[i] + h * (A61 * s.k[0][i] + A62 * s.k[1][i] + A63 * s.k[2][i]
                                  + A64 * s.k[3][i] + A65 * s.k[4][i])
        _rhs(ytmp, s.k[5], s.xi, s.kL, s.kR)
        for i in range(NM):
            ynew[i] = y[i] + h * (B1 * s.k[0][i] + B3 * s.k[2][i] + B4 * s.k[3][i]
                                  + B5 * s.k[4][i] + B6 * s.k[5][i])
        _rhs(ynew, s.k[6], s.xi, s.kL, s.kR)
        err = 0
        for i in range(NM):
            e = h * (E1 * s.k[0][i] + E3 * s.k[2][i] + E4 * s.k[3][i] + E5 * s.k[4][i]
                     + E6 * s.k[5][i] + E7 * s.k[6][i])
            yi = sqrt(cabs2(y[i]))
            yn = sqrt(cabs2(ynew[i]))
            sc = s.atol + s.rtol * fmax(yi, yn)
            err += cabs2(e) / (sc * sc)
        err = sqrt(err / NM)
        s.steps += 1
        if err <= 1.0:
            if last:
                t[0] = t_end
            else:
                t[0] += h
            for i in range(NM):
                y[i] = ynew[i]
                s.k[0][i] = s.k[6][i]
            if err == 0:
                fac = 5.0
            else:
                fac = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
            if not last or fac < 1:
                s.h = h * fac
        else:
            s.rejected += 1
            s.h = h * fmax(0.2, 0.9 * pow(err, -0.2))
            if s.h < 1e-14 * fmax(1.0, fabs(t[0])):
                return UNDERFLOW
    return OK


cdef void _init(Stepper* s, double xi, double kL, double kR, double rtol, double atol,
                long max_steps, double span) nogil:
    s.xi = xi
    s.kL = kL
    s.kR = kR
    s.rtol = rtol
    s.atol = atol
    s.steps = 0
    s.rejected = 0
    s.max_steps = max_steps
    cdef double rate = kL + kR + 2 * fabs(xi)
    if rate > 0:
        s.h = fmin(0.01 / rate, span) if span > 0 else 0.01 / rate
    else:
        s.h = span if span > 0 else 1.0


cdef _raise(int status, double t):
    if status == UNDERFLOW:
        raise IntegrationError(f"step size underflow at t={t!r}")
    if status == BUDGET:
        raise IntegrationError(f"step budget exhausted at t={t!r}")


def moment_rhs(y, double xi, double kappa_L, double kappa_R):
    """Time derivative of the 12-component moment vector."""
    cdef double complex[::1] yv = np.ascontiguousarray(y, dtype=np.complex128)
    out = np.empty(NM, dtype=np.complex128)
    cdef double complex[::1] ov = out
    _rhs(&yv[0], &ov[0], xi, kappa_L, kappa_R)
    return out


def integrate_moments(y0, double xi, double kappa_L, double kappa_R, t_grid,
                      double rtol=1e-10, double atol=1e-12, long max_steps=10_000_000):
    """Adaptive DP5(4) integration; returns (trajectory on t_grid, info dict)."""
    cdef double[::1] tg = np.ascontiguousarray(t_grid, dtype=np.float64)
    cdef Py_ssize_t n = tg.shape[0], j
    cdef int i, status = OK
    cdef double t
    cdef double complex y[NM]
    cdef Stepper s
    out = np.empty((n, NM), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double complex[::1] y0v = np.ascontiguousarray(y0, dtype=np.complex128)
    if n == 0:
        return out, {"steps": 0, "rejected": 0}
    for i in range(NM):
        y[i] = y0v[i]
        ov[0, i] = y[i]
    t = tg[0]
    _init(&s, xi, kappa_L, kappa_R, rtol, atol, max_steps, tg[n - 1] - tg[0])
    with nogil:
        _rhs(y, s.k[0], xi, kappa_L, kappa_R)
        for j in range(1, n):
            status = _advance(&s, y, &t, tg[j])
            if status != OK:
                break
            for i in range(NM):
                ov[j, i] = y[i]
    _raise(status, t)
    return out, {"steps": s.steps, "rejected": s.rejected}


def integrate_to_steady(y0, double xi, double kappa_L, double kappa_R,
                        double rtol=1e-10, double atol=1e-12, double deriv_tol=1e-10,
                        double t_max=1e9, long max_steps=10_000_000):
    """Integrate until |dy/dt| < deriv_tol * (|y| + 1); returns (y, t, info)."""
    cdef double complex y[NM]
    cdef double complex dy[NM]
    cdef double t = 0, chunk
    cdef int i, status = OK
    cdef bint converged = False
    cdef Stepper s
    cdef double complex[::1] y0v = np.ascontiguousarray(y0, dtype=np.complex128)
    for i in range(NM):
        y[i] = y0v[i]
    cdef double rate = kappa_L + kappa_R + 2 * fabs(xi)
    chunk = 1.0 / rate if rate > 0 else 1.0
    _init(&s, xi, kappa_L, kappa_R, rtol, atol, max_steps, chunk)
    with nogil:
        _rhs(y, s.k[0], xi, kappa_L, kappa_R)
        while t < t_max:
            _rhs(y, dy, xi, kappa_L, kappa_R)
            if _norm(dy) < deriv_tol * (_norm(y) + 1):
                converged = True
                break
            status = _advance(&s, y, &t, fmin(t + chunk, t_max))
            if status != OK:
                break
    _raise(status, t)
    if not converged:
        raise IntegrationError(f"no steady state reached by t_max={t_max!r}")
    out = np.empty(NM, dtype=np.complex128)
    for i in range(NM):
        out[i] = y[i]
    return out, t, {"steps": s.steps, "rejected": s.rejected}


def potential_grid(phi, flux_over_phi0, double ib_over_ic, double phib_over_phi0):
    """U / E_J on the (phi, Phi_X / Phi_0) grid, shape (len(phi), len(flux))."""
    cdef double[::1] p = np.ascontiguousarray(phi, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(flux_over_phi0, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], m = f.shape[0], i, j
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double cf
    with nogil:
        for j in range(m):
            cf = -2 * cos(M_PI * (phib_over_phi0 + f[j]))
            for i in range(n):
                ov[i, j] = cf * cos(p[i]) - ib_over_ic * p[i]
    return out
