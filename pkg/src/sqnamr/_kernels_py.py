"""Pure-Python twin of the compiled kernels (same signatures, same results)."""

import math

import numpy as np

from ._errors import IntegrationError

NM = 12

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _rhs(y, xi, kL, kR):
    bL, bR, L1, L2, L3, R1, R2, R3, C1, C2, C3, C4 = y
    kp2 = 0.5 * (kL + kR)
    return [
        -0.5 * kL * bL - xi * bR.conjugate(),
        -0.5 * kR * bR - xi * bL.conjugate(),
        -kL * L1 - xi * C2,
        -kL * L2 - xi * (C1 + C4) + kL,
        -kL * L3 - xi * C3,
        -kR * R1 - xi * C3,
        -kR * R2 - xi * (C1 + C4) + kR,
        -kR * R3 - xi * C2,
        -kp2 * C1 - xi * (L2 + R2),
        -kp2 * C2 - 2 * xi * (R3 + L1),
        -kp2 * C3 - 2 * xi * (R1 + L3),
        -kp2 * C4 - xi * (L2 + R2),
    ]


def _norm(v):
    return math.sqrt(sum(abs(z) ** 2 for z in v))


class _Stepper:
    def __init__(self, xi, kL, kR, rtol, atol, max_steps, span):
        self.xi, self.kL, self.kR = xi, kL, kR
        self.rtol, self.atol = rtol, atol
        self.max_steps = max_steps
        self.steps = 0
        self.rejected = 0
        rate = kL + kR + 2 * abs(xi)
        if rate > 0:
            self.h = min(0.01 / rate, span) if span > 0 else 0.01 / rate
        else:
            self.h = span if span > 0 else 1.0
        self.k0 = None

    def f(self, y):
        return _rhs(y, self.xi, self.kL, self.kR)

    def advance(self, y, t, t_end):
        while t < t_end:
            if self.steps >= self.max_steps:
                raise IntegrationError(f"step budget exhausted at t={t!r}")
            h = self.h
            last = False
            if t + h >= t_end:
                h = t_end - t
                last = True
            k = [self.k0]
            for stage in range(1, 6):
                a = _A[stage]
                ytmp = [y[i] + h * sum(a[j] * k[j][i] for j in range(stage))
                        for i in range(NM)]
                k.append(self.f(ytmp))
            ynew = [y[i] + h * sum(_B[j] * k[j][i] for j in range(6)) for i in range(NM)]
            k.append(self.f(ynew))
            err = 0.0
            for i in range(NM):
                e = h * sum(_E[j] * k[j][i] for j in range(7))
                sc = self.atol + self.rtol * max(abs(y[i]), abs(ynew[i]))
                err += abs(e) ** 2 / sc**2
            err = math.sqrt(err / NM)
            self.steps += 1
            if err <= 1.0:
                t = t_end if last else t + h
                y = ynew
                self.k0 = k[6]
                fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err**-0.2))
                if not last or fac < 1:
                    self.h = h * fac
            else:
                self.rejected += 1
                self.h = h * max(0.2, 0.9 * err**-0.2)
                if self.h < 1e-14 * max(1.0, abs(t)):
                    raise IntegrationError(f"step size underflow at t={t!r}")
        return y, t


def moment_rhs(y, xi, kappa_L, kappa_R):
    y = [complex(z) for z in np.asarray(y, dtype=complex)]
    return np.array(_rhs(y, float(xi), float(kappa_L), float(kappa_R)), dtype=complex)


def integrate_moments(y0, xi, kappa_L, kappa_R, t_grid, rtol=1e-10, atol=1e-12,
                      max_steps=10_000_000):
    t_grid = np.asarray(t_grid, dtype=float)
    n = len(t_grid)
    out = np.empty((n, NM), dtype=complex)
    if n == 0:
        return out, {"steps": 0, "rejected": 0}
    y = [complex(z) for z in np.asarray(y0, dtype=complex)]
    out[0] = y
    s = _Stepper(float(xi), float(kappa_L), float(kappa_R), rtol, atol, max_steps,
                 t_grid[-1] - t_grid[0])
    s.k0 = s.f(y)
    t = float(t_grid[0])
    for j in range(1, n):
        y, t = s.advance(y, t, float(t_grid[j]))
        out[j] = y
    return out, {"steps": s.steps, "rejected": s.rejected}


def integrate_to_steady(y0, xi, kappa_L, kappa_R, rtol=1e-10, atol=1e-12,
                        deriv_tol=1e-10, t_max=1e9, max_steps=10_000_000):
    y = [complex(z) for z in np.asarray(y0, dtype=complex)]
    rate = kappa_L + kappa_R + 2 * abs(xi)
    chunk = 1.0 / rate if rate > 0 else 1.0
    s = _Stepper(float(xi), float(kappa_L), float(kappa_R), rtol, atol, max_steps, chunk)
    s.k0 = s.f(y)
    t = 0.0
    while t < t_max:
        if _norm(s.f(y)) < deriv_tol * (_norm(y) + 1):
            return np.array(y, dtype=complex), t, {"steps": s.steps, "rejected": s.rejected}
        y, t = s.advance(y, t, min(t + chunk, t_max))
    raise IntegrationError(f"no steady state reached by t_max={t_max!r}")


def potential_grid(phi, flux_over_phi0, ib_over_ic, phib_over_phi0):
    phi = np.asarray(phi, dtype=float)
    flux = np.asarray(flux_over_phi0, dtype=float)
    cf = -2 * np.cos(np.pi * (phib_over_phi0 + flux))
    return cf[None, :] * np.cos(phi)[:, None] - ib_over_ic * phi[:, None]
