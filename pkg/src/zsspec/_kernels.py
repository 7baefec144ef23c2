"""Compiled double-precision Magnus propagation loops.

The step formulas are written out entrywise for
A_g = [[-i lam, u_g], [v_g, i lam]] at the two Gauss nodes g = 1, 2.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SERIES_TERMS = 10
_SERIES_LIMIT = 0.05


_C5 = (1.0, 1.0 / 2, 1.0 / 24, 1.0 / 720, 1.0 / 40320, 1.0 / 3628800)
_S5 = (1.0, 1.0 / 6, 1.0 / 120, 1.0 / 5040, 1.0 / 362880, 1.0 / 39916800)


@njit(cache=True)
def _cs(w):
    """cosh(sqrt w), sinh(sqrt w)/sqrt w and d/dw of the latter."""
    if abs(w) < 2e-3:
        # short Horner forms; truncation below 1e-20 relative at this size
        C = _C5[0] + w * (_C5[1] + w * (_C5[2] + w * (_C5[3] + w * (_C5[4] + w * _C5[5]))))
        S = _S5[0] + w * (_S5[1] + w * (_S5[2] + w * (_S5[3] + w * (_S5[4] + w * _S5[5]))))
        dS = _S5[1] + w * (2 * _S5[2] + w * (3 * _S5[3] + w * (4 * _S5[4] + w * 5 * _S5[5])))
        return C, S, dS
    if abs(w) < _SERIES_LIMIT:
        C = 0j
        S = 0j
        dS = 0j
        fact_even = 1.0
        fact_odd = 1.0
        p = 1.0 + 0j
        pprev = 0j
        for k in range(_SERIES_TERMS):
            if k > 0:
                fact_even = fact_odd * (2 * k)
            fact_odd = fact_even * (2 * k + 1)
            C += p / fact_even
            S += p / fact_odd
            if k > 0:
                dS += k * pprev / fact_odd
            pprev = p
            p = p * w
        return C, S, dS
    s = np.sqrt(w)
    C = np.cosh(s)
    S = np.sinh(s) / s
    return C, S, (C - S) / (2.0 * w)


@njit(cache=True)
def _step(lam, u1, v1, u2, v2, h, c):
    il = 1j * lam
    ch2 = c * h * h
    al = -il * h + ch2 * (u2 * v1 - u1 * v2)
    be = 0.5 * h * (u1 + u2) + ch2 * 2.0 * il * (u2 - u1)
    ga = 0.5 * h * (v1 + v2) + ch2 * 2.0 * il * (v1 - v2)
    w = al * al + be * ga
    C, S, dS = _cs(w)
    dal = -1j * h
    dbe = 2j * ch2 * (u2 - u1)
    dga = 2j * ch2 * (v1 - v2)
    dw = 2.0 * al * dal + be * dga + ga * dbe
    dC = 0.5 * S * dw
    dSw = dS * dw
    e11 = C + S * al
    e12 = S * be
    e21 = S * ga
    e22 = C - S * al
    f11 = dC + dSw * al + S * dal
    f12 = dSw * be + S * dbe
    f21 = dSw * ga + S * dga
    f22 = dC - dSw * al - S * dal
    return e11, e12, e21, e22, f11, f12, f21, f22


@njit(cache=True)
def propagate(lams, u1, v1, u2, v2, h, c, M, dM):
    """Endpoint M(1, lam) and dM/dlam for each lam; M, dM are (L, 2, 2) outputs."""
    N = u1.shape[0]
    for l in range(lams.shape[0]):
        lam = lams[l]
        m11 = 1.0 + 0j
        m12 = 0j
        m21 = 0j
        m22 = 1.0 + 0j
        d11 = 0j
        d12 = 0j
        d21 = 0j
        d22 = 0j
        for k in range(N):
            e11, e12, e21, e22, f11, f12, f21, f22 = _step(lam, u1[k], v1[k], u2[k], v2[k], h, c)
            n11 = f11 * m11 + f12 * m21 + e11 * d11 + e12 * d21
            n12 = f11 * m12 + f12 * m22 + e11 * d12 + e12 * d22
            n21 = f21 * m11 + f22 * m21 + e21 * d11 + e22 * d21
            n22 = f21 * m12 + f22 * m22 + e21 * d12 + e22 * d22
            d11, d12, d21, d22 = n11, n12, n21, n22
            a11 = e11 * m11 + e12 * m21
            a12 = e11 * m12 + e12 * m22
            a21 = e21 * m11 + e22 * m21
            a22 = e21 * m12 + e22 * m22
            m11, m12, m21, m22 = a11, a12, a21, a22
        M[l, 0, 0] = m11
        M[l, 0, 1] = m12
        M[l, 1, 0] = m21
        M[l, 1, 1] = m22
        dM[l, 0, 0] = d11
        dM[l, 0, 1] = d12
        dM[l, 1, 0] = d21
        dM[l, 1, 1] = d22


@njit(cache=True)
def propagate_path(lams, u1, v1, u2, v2, h, c, stride, P):
    """M(x_j, lam) at every ``stride``-th step; P is (L, N // stride + 1, 2, 2)."""
    N = u1.shape[0]
    for l in range(lams.shape[0]):
        lam = lams[l]
        m11 = 1.0 + 0j
        m12 = 0j
        m21 = 0j
        m22 = 1.0 + 0j
        P[l, 0, 0, 0] = 1.0
        P[l, 0, 0, 1] = 0.0
        P[l, 0, 1, 0] = 0.0
        P[l, 0, 1, 1] = 1.0
        for k in range(N):
            e11, e12, e21, e22, f11, f12, f21, f22 = _step(lam, u1[k], v1[k], u2[k], v2[k], h, c)
            a11 = e11 * m11 + e12 * m21
            a12 = e11 * m12 + e12 * m22
            a21 = e21 * m11 + e22 * m21
            a22 = e21 * m12 + e22 * m22
            m11, m12, m21, m22 = a11, a12, a21, a22
            if (k + 1) % stride == 0:
                j = (k + 1) // stride
                P[l, j, 0, 0] = m11
                P[l, j, 0, 1] = m12
                P[l, j, 1, 0] = m21
                P[l, j, 1, 1] = m22
