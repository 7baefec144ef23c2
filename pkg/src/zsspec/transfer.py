"""Fundamental matrix M(x, lam) of the Zakharov-Shabat system and its lam-derivative.

The system L(phi) M = lam M with L = i R d/dx + offdiag(phi1, phi2) and
R = diag(1, -1) is rewritten as M' = A M with the traceless coefficient

    A(x, lam) = [[-i lam,  i phi1(x)],
                 [-i phi2(x), i lam ]],     dA/dlam = -i R.

Integration uses the fourth-order Magnus scheme with two Gauss nodes. Each
step propagator is the exact exponential of a traceless 2x2 matrix, so the
scheme is exact for potentials that are constant in x, and it is
differentiated exactly in lam. Endpoint products are formed by pairwise
(tree) reduction. For constant potentials every step matrix is identical, so
per-step rounding errors add coherently over N steps. The default
"extended" precision carries the propagation in long double and rounds to
complex128 at the end; "double" is several times faster and is what the
contour-based root finders use, where |Im lam| stays moderate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import StepUnderflow
from . import _kernels
from ._kernels import _SERIES_LIMIT, _SERIES_TERMS
from .potential import Potential, _pi

PRECISIONS = {"double": (np.float64, np.complex128), "extended": (np.longdouble, np.clongdouble)}


class _Consts:
    def __init__(self, precision: str):
        if precision not in PRECISIONS:
            raise ValueError(f"unknown precision {precision!r}")
        self.real, self.work = PRECISIONS[precision]
        sqrt3 = np.sqrt(self.real(3))
        self.R = np.array([[1, 0], [0, -1]], dtype=self.work)
        self.eye = np.eye(2, dtype=self.work)
        self.gauss = (self.real(1) / 2 - sqrt3 / 6, self.real(1) / 2 + sqrt3 / 6)
        self.comm = sqrt3 / 12


_CONSTS = {name: _Consts(name) for name in PRECISIONS}


@dataclass
class TransferResult:
    lam: complex
    endpoint: np.ndarray
    dlambda: Optional[np.ndarray] = None
    path_x: Optional[np.ndarray] = None
    path: Optional[np.ndarray] = None

    @property
    def m(self) -> tuple[complex, complex, complex, complex]:
        """Entries (m1, m2, m3, m4) of the endpoint, row-major."""
        e = self.endpoint
        return e[0, 0], e[0, 1], e[1, 0], e[1, 1]


# -- step counts ----------------------------------------------------------------


def step_count(p: Potential, lam_abs_max: float, tol: Tolerances = DEFAULT, minimum: int = 0) -> int:
    scale = lam_abs_max + p.sup_bound() + 2.0 * math.pi * p.max_frequency()
    n = max(tol.min_steps, minimum, tol.steps_per_unit * math.ceil(scale))
    n = 1 << (n - 1).bit_length()
    if n > tol.max_steps:
        raise StepUnderflow(lam_abs_max, n)
    return n


# -- exact exponential of traceless 2x2 matrices ------------------------------------


def _cosh_sinhc(w: np.ndarray):
    """C = cosh(sqrt w), S = sinh(sqrt w)/sqrt w and their w-derivatives."""
    real = np.real(w).dtype.type
    small = np.abs(w) < _SERIES_LIMIT
    ws = np.where(small, 1, w)
    s = np.sqrt(ws)
    C = np.cosh(s)
    S = np.sinh(s) / s
    dS = (C - S) / (2 * ws)
    if np.any(small):
        ws = np.where(small, w, 0.0)
        Cs = np.zeros_like(ws)
        Ss = np.zeros_like(ws)
        dSs = np.zeros_like(ws)
        term_c = np.ones_like(ws)
        prev = term_c
        for k in range(_SERIES_TERMS):
            Cs = Cs + term_c / real(math.factorial(2 * k))
            Ss = Ss + term_c / real(math.factorial(2 * k + 1))
            if k >= 1:
                dSs = dSs + k * prev / real(math.factorial(2 * k + 1))
            prev = term_c
            term_c = term_c * ws
        C = np.where(small, Cs, C)
        S = np.where(small, Ss, S)
        dS = np.where(small, dSs, dS)
    return C, S, S / 2, dS


def _expm_traceless(Om: np.ndarray, dOm: Optional[np.ndarray], eye: np.ndarray):
    a = Om[..., 0, 0]
    b = Om[..., 0, 1]
    c = Om[..., 1, 0]
    w = a * a + b * c
    C, S, dC, dS = _cosh_sinhc(w)
    E = C[..., None, None] * eye + S[..., None, None] * Om
    if dOm is None:
        return E, None
    da = dOm[..., 0, 0]
    db = dOm[..., 0, 1]
    dc = dOm[..., 1, 0]
    dw = 2 * a * da + b * dc + c * db
    dE = (dC * dw)[..., None, None] * eye + (dS * dw)[..., None, None] * Om + S[..., None, None] * dOm
    return E, dE


def _step_propagators(p: Potential, lams: np.ndarray, N: int, with_dlambda: bool, cst: _Consts):
    """Magnus step matrices, shape (N, L, 2, 2), propagating x_k -> x_k + 1/N."""
    h = cst.real(1) / N
    xk = np.arange(N, dtype=cst.real) * h
    phis = [p.evaluate(xk + g * h, dtype=cst.real) for g in cst.gauss]
    lam = np.asarray(lams, dtype=cst.work)[None, :]
    _R = cst.R

    def offdiag(ph):
        X = np.zeros((N, 1, 2, 2), dtype=cst.work)
        X[:, 0, 0, 1] = 1j * ph[0]
        X[:, 0, 1, 0] = -1j * ph[1]
        return X

    X1, X2 = offdiag(phis[0]), offdiag(phis[1])
    diag = (-1j * lam)[..., None, None] * _R
    A1 = X1 + diag
    A2 = X2 + diag
    Om = h / 2 * (A1 + A2) + cst.comm * h * h * (A2 @ A1 - A1 @ A2)
    dOm = None
    if with_dlambda:
        D = X1 - X2
        comm = _R @ D - D @ _R
        dOm = np.broadcast_to(-1j * h * _R - 1j * cst.comm * h * h * comm, Om.shape)
    return _expm_traceless(Om, dOm, cst.eye)


def _tree_product(E: np.ndarray, dE: Optional[np.ndarray]):
    """Ordered product E[N-1] ... E[0] along axis 0, with its derivative."""
    while E.shape[0] > 1:
        if E.shape[0] % 2:
            pad = np.broadcast_to(np.eye(2, dtype=E.dtype), (1,) + E.shape[1:])
            E = np.concatenate([E, pad])
            if dE is not None:
                dE = np.concatenate([dE, np.zeros_like(pad)])
        lo, hi = E[0::2], E[1::2]
        if dE is not None:
            dE = dE[1::2] @ lo + hi @ dE[0::2]
        E = hi @ lo
    return E[0], (None if dE is None else dE[0])


def _gauss_coefficients(p: Potential, N: int):
    """Off-diagonal entries u = i phi1, v = -i phi2 at both Gauss nodes of every step."""
    cst = _CONSTS["double"]
    h = 1.0 / N
    xk = np.arange(N) * h
    out = []
    for g in cst.gauss:
        phi1, phi2 = p.evaluate(xk + g * h)
        out += [np.ascontiguousarray(1j * phi1), np.ascontiguousarray(-1j * phi2)]
    return out


def _transfer_raw(p, lams, N, with_dlambda, precision):
    if precision == "double":
        u1, v1, u2, v2 = _gauss_coefficients(p, N)
        M = np.empty((lams.size, 2, 2), dtype=complex)
        dM = np.empty_like(M)
        _kernels.propagate(lams, u1, v1, u2, v2, 1.0 / N, float(_CONSTS["double"].comm), M, dM)
        return M, (dM if with_dlambda else None)
    E, dE = _step_propagators(p, lams, N, with_dlambda, _CONSTS[precision])
    M, dM = _tree_product(E, dE)
    return M.astype(complex), (None if dM is None else dM.astype(complex))


def transfer_batch(
    p: Potential,
    lams,
    with_dlambda: bool = True,
    tol: Tolerances = DEFAULT,
    steps: Optional[int] = None,
    richardson: bool = False,
    precision: str = "extended",
):
    """Endpoint matrices M(1, lam) for an array of lam values.

    Returns (M, dM) with shapes (L, 2, 2); dM is None when not requested.
    With ``richardson`` the results at N and 2N steps are combined as
    (16 M_2N - M_N) / 15, which is useful for validating the step count.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    if lams.size == 0:
        empty = np.zeros((0, 2, 2), dtype=complex)
        return empty, (empty.copy() if with_dlambda else None)
    N = steps or step_count(p, float(np.max(np.abs(lams))), tol)
    M, dM = _transfer_raw(p, lams, N, with_dlambda, precision)
    if richardson:
        if 2 * N > tol.max_steps:
            raise StepUnderflow(complex(lams[np.argmax(np.abs(lams))]), 2 * N)
        M2, dM2 = _transfer_raw(p, lams, 2 * N, with_dlambda, precision)
        M = (16.0 * M2 - M) / 15.0
        if with_dlambda:
            dM = (16.0 * dM2 - dM) / 15.0
    return M, dM


def path_batch(
    p: Potential,
    lams,
    tol: Tolerances = DEFAULT,
    points: Optional[int] = None,
    precision: str = "extended",
):
    """M(x_j, lam) on the uniform grid x_j = j / points, j = 0..points.

    Returns (x, paths) with paths of shape (L, points + 1, 2, 2).
    """
    points = points or tol.path_points
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    N = step_count(p, float(np.max(np.abs(lams))) if lams.size else 0.0, tol, minimum=points)
    if N % points:
        raise ValueError("path grid must divide the step count")
    cst = _CONSTS[precision]
    if precision == "double":
        u1, v1, u2, v2 = _gauss_coefficients(p, N)
        P = np.empty((lams.size, points + 1, 2, 2), dtype=complex)
        _kernels.propagate_path(lams, u1, v1, u2, v2, 1.0 / N, float(cst.comm), N // points, P)
        return np.arange(points + 1) / points, P
    E, _ = _step_propagators(p, lams, N, False, cst)
    sub = N // points
    E = E.reshape(points, sub, *E.shape[1:])
    blocks = np.moveaxis(E, 1, 0)
    blocks, _ = _tree_product(blocks, None)  # (points, L, 2, 2)
    out = np.empty((points + 1,) + blocks.shape[1:], dtype=cst.work)
    out[0] = cst.eye
    for j in range(points):
        out[j + 1] = blocks[j] @ out[j]
    x = np.arange(points + 1) / points
    return x, np.moveaxis(out, 0, 1).astype(complex)


def fundamental_matrix(
    p: Potential,
    lam: complex,
    with_path: bool = False,
    with_dlambda: bool = True,
    tol: Tolerances = DEFAULT,
    precision: str = "extended",
) -> TransferResult:
    lam = complex(lam)
    M, dM = transfer_batch(p, [lam], with_dlambda=with_dlambda, tol=tol, precision=precision)
    res = TransferResult(lam, M[0], None if dM is None else dM[0])
    if with_path:
        res.path_x, paths = path_batch(p, [lam], tol, precision=precision)
        res.path = paths[0]
    return res


# -- closed forms -----------------------------------------------------------------


def _sinc_kappa(kappa, x):
    """sin(kappa x) / kappa, with the Taylor branch near kappa = 0."""
    z = kappa * x
    small = np.abs(z) < 1e-3
    safe = np.where(small, 1, kappa)
    val = np.sin(safe * x) / safe
    z2 = z * z
    series = x * (1 - z2 / 6 + z2 * z2 / 120)
    return np.where(small, series, val)


def constant_closed_form(a: complex, lam, x=1.0, k: int = 0) -> np.ndarray:
    """M(x, lam) for phi_{a,k}; broadcasts over lam and x, trailing shape (2, 2).

    Evaluated in long double and rounded. For k != 0 the gauge relation
    M_{a,k}(x, lam) = diag(e^{i pi k x}, e^{-i pi k x}) M_a(x, lam + k pi) is used.
    """
    cst = _CONSTS["extended"]
    pi = _pi(cst.real)
    a = cst.work(complex(a))
    lam = np.asarray(lam, dtype=complex).astype(cst.work) + k * pi
    x = np.asarray(x, dtype=float).astype(cst.real)
    lam, x = np.broadcast_arrays(lam, x)
    kappa = np.sqrt(lam * lam + abs(a) ** 2)
    sc = _sinc_kappa(kappa, x)
    cs = np.cos(kappa * x)
    M = np.empty(lam.shape + (2, 2), dtype=cst.work)
    M[..., 0, 0] = cs - 1j * lam * sc
    M[..., 0, 1] = 1j * a * sc
    M[..., 1, 0] = 1j * np.conj(a) * sc
    M[..., 1, 1] = cs + 1j * lam * sc
    if k:
        ph = np.exp(1j * pi * k * x)
        M[..., 0, :] *= ph[..., None]
        M[..., 1, :] /= ph[..., None]
    return M.astype(complex)


def zero_potential_matrix(lam, x=1.0) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    x = np.asarray(x, dtype=float)
    lam, x = np.broadcast_arrays(lam, x)
    M = np.zeros(lam.shape + (2, 2), dtype=complex)
    M[..., 0, 0] = np.exp(-1j * lam * x)
    M[..., 1, 1] = np.exp(1j * lam * x)
    return M
