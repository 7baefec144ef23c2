"""L2-gradients of spectral quantities with respect to the potential.

Gradients are sampled on the uniform path grid x_j = j / 1024 and paired
with directions h through

    <dF, h>_r = int_0^1 (dF_1 h_1 + dF_2 h_2) dx,

evaluated by Simpson's rule (the integrands are smooth but not periodic).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from .characteristic import CharKind, Disk, char_from_matrices
from .config import DEFAULT, Tolerances
from .errors import GeometricMultiplicityTwo, NotAnEigenvalue, ZeroInput
from .potential import Potential
from .rootfinder import converged_samples
from .transfer import path_batch

PATH_PRECISION = "double"


@dataclass
class GradientField:
    grid: np.ndarray
    comp1: np.ndarray
    comp2: np.ndarray

    def __post_init__(self):
        self.comp1 = np.asarray(self.comp1, dtype=complex)
        self.comp2 = np.asarray(self.comp2, dtype=complex)
        if self.comp1.shape != self.grid.shape or self.comp2.shape != self.grid.shape:
            raise ValueError("gradient components must match the grid")

    def _check(self, other: "GradientField"):
        if self.grid.shape != other.grid.shape or not np.array_equal(self.grid, other.grid):
            raise ValueError("grid mismatch")

    def __add__(self, other):
        self._check(other)
        return GradientField(self.grid, self.comp1 + other.comp1, self.comp2 + other.comp2)

    def __sub__(self, other):
        self._check(other)
        return GradientField(self.grid, self.comp1 - other.comp1, self.comp2 - other.comp2)

    def __mul__(self, c):
        return GradientField(self.grid, c * self.comp1, c * self.comp2)

    __rmul__ = __mul__

    def at(self, j: int) -> tuple[complex, complex]:
        return complex(self.comp1[j]), complex(self.comp2[j])

    def norm(self) -> float:
        return float(np.sqrt(simpson(np.abs(self.comp1) ** 2 + np.abs(self.comp2) ** 2, x=self.grid)))

    def pair(self, h) -> complex:
        """<self, h>_r; ``h`` is a Potential or a GradientField."""
        h1, h2 = _components(h, self.grid)
        return complex(simpson(self.comp1 * h1 + self.comp2 * h2, x=self.grid))

    def to_json(self) -> dict:
        return {
            "grid_n": int(self.grid.size),
            "comp1": [[c.real, c.imag] for c in self.comp1],
            "comp2": [[c.real, c.imag] for c in self.comp2],
        }

    @classmethod
    def from_json(cls, d: dict) -> "GradientField":
        n = int(d["grid_n"])
        grid = np.arange(n) / (n - 1)
        return cls(grid, [complex(*c) for c in d["comp1"]], [complex(*c) for c in d["comp2"]])


def _components(f, grid=None):
    if isinstance(f, GradientField):
        return f.comp1, f.comp2
    if isinstance(f, Potential):
        return f.evaluate(grid)
    f1, f2 = f
    return np.asarray(f1, dtype=complex), np.asarray(f2, dtype=complex)


def _like(f, c1, c2):
    if isinstance(f, GradientField):
        return GradientField(f.grid, c1, c2)
    return c1, c2


# -- pointwise algebra ---------------------------------------------------------------


def star(f, g):
    """(f1, f2) * (g1, g2) = (f2 g2, f1 g1)."""
    if isinstance(f, GradientField) and isinstance(g, GradientField):
        f._check(g)
    f1, f2 = _components(f)
    g1, g2 = _components(g)
    if np.shape(f1) != np.shape(g1):
        raise ValueError("grid mismatch")
    return _like(f, f2 * g2, f1 * g1)


def hat(f):
    """-(conj f2, conj f1); its fixed points are the focusing potentials."""
    f1, f2 = _components(f)
    return _like(f, -np.conj(f2), -np.conj(f1))


def breve(f):
    """(-conj f2, conj f1); applying it twice gives -f."""
    f1, f2 = _components(f)
    return _like(f, -np.conj(f2), np.conj(f1))


# -- Floquet-matrix gradients --------------------------------------------------------


@dataclass
class _Path:
    x: np.ndarray
    P: np.ndarray  # (n, 2, 2)

    @property
    def endpoint(self) -> np.ndarray:
        return self.P[-1]

    def stars(self):
        """M1*M1, M2*M2 and M1*M2 as (comp1, comp2) arrays; M1, M2 are the columns."""
        a, c = self.P[:, 0, 0], self.P[:, 1, 0]  # M1 = (m1, m3)
        b, d = self.P[:, 0, 1], self.P[:, 1, 1]  # M2 = (m2, m4)
        return (c * c, a * a), (d * d, b * b), (c * d, a * b)


def _path(p: Potential, lam: complex, tol: Tolerances) -> _Path:
    x, P = path_batch(p, [lam], tol, precision=PATH_PRECISION)
    return _Path(x, P[0])


def _floquet_from_stars(mhat, s11, s22, s12):
    m1, m2, m3, m4 = mhat
    out = []
    for first, second in ((m1, m2), (m3, m4)):
        # i dm_(row,1) = -first M1*M2 + second M1*M1 ; i dm_(row,2) = -first M2*M2 + second M1*M2
        out.append(tuple(-1j * (-first * s12[c] + second * s11[c]) for c in range(2)))
        out.append(tuple(-1j * (-first * s22[c] + second * s12[c]) for c in range(2)))
    return out


def grad_floquet_entries(p: Potential, lam: complex, tol: Tolerances = DEFAULT) -> tuple[GradientField, ...]:
    """Gradients of the four entries m1, m2, m3, m4 of the Floquet matrix at lam."""
    path = _path(p, complex(lam), tol)
    E = path.endpoint
    mhat = (E[0, 0], E[0, 1], E[1, 0], E[1, 1])
    grads = _floquet_from_stars(mhat, *path.stars())
    return tuple(GradientField(path.x, g[0], g[1]) for g in grads)


def grad_delta_general(p: Potential, lam: complex, tol: Tolerances = DEFAULT) -> GradientField:
    """Gradient of Delta = m1 + m4 at any lam, from the Floquet-entry formula."""
    g1, _, _, g4 = grad_floquet_entries(p, lam, tol)
    return g1 + g4


def _eigen_branches(path: _Path, lam, tol: Tolerances):
    E = path.endpoint
    m1, m2, m3, m4 = E[0, 0], E[0, 1], E[1, 0], E[1, 1]
    delta = m1 + m4
    xi = 1.0 if delta.real >= 0 else -1.0
    if abs(delta - 2 * xi) > tol.residual * max(1.0, float(np.max(np.abs(E)))):
        raise NotAnEigenvalue(f"|Delta -+ 2| = {abs(delta - 2 * xi):.3e} at {lam}")
    M1 = (path.P[:, 0, 0], path.P[:, 1, 0])
    M2 = (path.P[:, 0, 1], path.P[:, 1, 1])
    branches = {}
    if abs(m2) > tol.geometric:
        zeta = (xi - m1) / m2
        f = (M1[0] + zeta * M2[0], M1[1] + zeta * M2[1])
        s = star(f, f)
        branches["m2"] = (abs(m2), (-1j * m2 * s[0], -1j * m2 * s[1]))
    if abs(m3) > tol.geometric:
        zeta = (xi - m4) / m3
        f = (zeta * M1[0] + M2[0], zeta * M1[1] + M2[1])
        s = star(f, f)
        branches["m3"] = (abs(m3), (1j * m3 * s[0], 1j * m3 * s[1]))
    if not branches:
        raise GeometricMultiplicityTwo(f"Floquet matrix is +-Id at {lam}")
    return branches


def grad_delta(p: Potential, lam: complex, tol: Tolerances = DEFAULT) -> GradientField:
    """Gradient of Delta at a periodic eigenvalue of geometric multiplicity one.

    Uses the eigenfunction normalised through whichever of m2, m3 is larger.
    """
    path = _path(p, complex(lam), tol)
    branches = _eigen_branches(path, lam, tol)
    _, (c1, c2) = max(branches.values(), key=lambda b: b[0])
    return GradientField(path.x, c1, c2)


def grad_delta_branches(p: Potential, lam: complex, tol: Tolerances = DEFAULT) -> dict[str, GradientField]:
    path = _path(p, complex(lam), tol)
    return {k: GradientField(path.x, *v[1]) for k, v in _eigen_branches(path, lam, tol).items()}


def _chi_d_from_stars(mhat, s11, s22, s12):
    m1, m2, m3, m4 = mhat
    return tuple(0.5 * ((m2 - m4) * s11[c] + (m3 - m1) * s22[c] + (m2 + m3 - m1 - m4) * s12[c]) for c in range(2))


def grad_chi_D(p: Potential, lam: complex, tol: Tolerances = DEFAULT) -> GradientField:
    """Gradient of the Dirichlet characteristic function at lam."""
    path = _path(p, complex(lam), tol)
    E = path.endpoint
    c1, c2 = _chi_d_from_stars((E[0, 0], E[0, 1], E[1, 0], E[1, 1]), *path.stars())
    return GradientField(path.x, c1, c2)


# -- averaged functionals ------------------------------------------------------------


class Integrand(str, enum.Enum):
    ONE = "one"
    POWER = "power"
    M2 = "m2"


def _char_gradients(kind: CharKind, mhat, stars):
    """Gradient of chi at each contour node, shape (2, nodes, npts)."""
    m1, m2, m3, m4 = (m[:, None] for m in mhat)
    s11, s22, s12 = stars
    if kind is CharKind.CHI_D:
        return np.stack(_chi_d_from_stars((m1, m2, m3, m4), s11, s22, s12))
    g = _floquet_from_stars((m1, m2, m3, m4), s11, s22, s12)
    dd = np.stack([g[0][c] + g[3][c] for c in range(2)])
    if kind is CharKind.CHI_P:
        return 2 * (m1 + m4)[None] * dd
    return dd


def averaged_functional(
    p: Potential,
    disk: Disk,
    kind,
    F: str = "power",
    q: int = 1,
    lam0: complex = 0.0,
    tol: Tolerances = DEFAULT,
) -> tuple[complex, GradientField]:
    """Sum of F over the zeros of chi in ``disk`` and its L2-gradient, both by contour integrals.

    F is "one" (zero count), "power" ((lam - lam0)^q) or "m2" (Floquet entry m2).
    The gradient uses the integrated-by-parts contour form
    dF_chi = (1/2 pi i) * contour integral of [(chi'/chi) dF - (d_lam F) dchi / chi] dlam.
    """
    kind = CharKind.parse(kind)
    F = Integrand(F)
    samples, _, _ = converged_samples(p, disk, kind, tol)
    lam = samples.lam
    x, P = path_batch(p, lam, tol, precision=PATH_PRECISION)
    Mh, dMh = samples.matrices, samples.dmatrices
    chi, dchi = samples.value, samples.dvalue
    w = (lam - disk.center) / lam.size  # (1/2 pi i) dlam on the trapezoid nodes
    a, c = P[:, :, 0, 0], P[:, :, 1, 0]
    b, d = P[:, :, 0, 1], P[:, :, 1, 1]
    stars = ((c * c, a * a), (d * d, b * b), (c * d, a * b))
    mhat = (Mh[:, 0, 0], Mh[:, 0, 1], Mh[:, 1, 0], Mh[:, 1, 1])
    grad_chi = _char_gradients(kind, mhat, stars)

    if F is Integrand.ONE:
        f_val = np.ones_like(lam)
        f_lam = np.zeros_like(lam)
        f_grad = None
    elif F is Integrand.POWER:
        if q < 0:
            raise ValueError("power must be nonnegative")
        f_val = (lam - lam0) ** q
        f_lam = q * (lam - lam0) ** (q - 1) if q else np.zeros_like(lam)
        f_grad = None
    else:
        f_val = Mh[:, 0, 1]
        f_lam = dMh[:, 0, 1]
        m1, m2, m3, m4 = (m[:, None] for m in mhat)
        f_grad = np.stack(_floquet_from_stars((m1, m2, m3, m4), *stars)[1])

    value = complex(np.sum(w * f_val * dchi / chi))
    coef = (w * f_lam / chi)[None, :, None]
    grad = -np.sum(coef * grad_chi, axis=1)
    if f_grad is not None:
        grad = grad + np.sum((w * dchi / chi)[None, :, None] * f_grad, axis=1)
    return value, GradientField(x, grad[0], grad[1])


def functional_G(p: Potential, disk: Disk, kind, lam0: complex, tol: Tolerances = DEFAULT):
    """G = m^(m-1) E_m - E_1^m over the m zeros in ``disk``; vanishes when all m zeros coincide.

    Returns (G, dG, m, scale) with scale = m^(m-1)|E_m| + |E_1|^m for relative comparisons.
    """
    m = int(round(averaged_functional(p, disk, kind, "one", tol=tol)[0].real))
    if m == 0:
        raise ZeroInput("no zeros in the disk")
    e1, g1 = averaged_functional(p, disk, kind, "power", 1, lam0, tol)
    em, gm = averaged_functional(p, disk, kind, "power", m, lam0, tol)
    G = m ** (m - 1) * em - e1**m
    dG = m ** (m - 1) * gm - (m * e1 ** (m - 1)) * g1
    scale = m ** (m - 1) * abs(em) + abs(e1) ** m
    return G, dG, m, scale


# -- linear independence -------------------------------------------------------------


@dataclass
class IndependenceResult:
    verdict: str
    gram: np.ndarray
    determinant: float
    norm_plus: float
    norm_minus: float


def _real_inner(f, g, grid) -> float:
    f1, f2 = f
    g1, g2 = g
    return float(simpson(np.real(f1 * np.conj(g1) + f2 * np.conj(g2)), x=grid))


def linear_independence(f, grid: Optional[np.ndarray] = None, tol: Tolerances = DEFAULT) -> IndependenceResult:
    """Decide whether Re- and Im-parts of h -> <f, h>_r are R-linearly dependent on iL2_r.

    With g+ = (f + hat f)/2 and g- = (f - hat f)/(2i) both functionals are
    pairings with elements of iL2_r; they are dependent iff the Gram matrix of
    {g+, g-} is singular.
    """
    if isinstance(f, GradientField):
        grid = f.grid
    f1, f2 = _components(f)
    if grid is None:
        grid = np.linspace(0.0, 1.0, np.size(f1))
    norm_f = np.sqrt(_real_inner((f1, f2), (f1, f2), grid))
    if norm_f == 0:
        raise ZeroInput("linear_independence needs a nonzero input")
    h1, h2 = hat((f1, f2))
    gp = ((f1 + h1) / 2, (f2 + h2) / 2)
    gm = ((f1 - h1) / 2j, (f2 - h2) / 2j)
    G = np.array(
        [
            [_real_inner(gp, gp, grid), _real_inner(gp, gm, grid)],
            [_real_inner(gm, gp, grid), _real_inner(gm, gm, grid)],
        ]
    )
    det = float(np.linalg.det(G))
    npl, nmi = float(np.sqrt(G[0, 0])), float(np.sqrt(G[1, 1]))
    tiny = 1e-12 * norm_f
    dependent = npl < tiny or nmi < tiny or det < tol.gram * G[0, 0] * G[1, 1]
    return IndependenceResult("dependent" if dependent else "independent", G, det, npl, nmi)


# -- finite-difference validation ----------------------------------------------------


def directional_fd(func: Callable[[Potential], complex], p: Potential, h: Potential, s: float = 1e-5) -> complex:
    """Central difference (F(p + s h) - F(p - s h)) / 2s."""
    return (func(p.combine(h, 1.0, s)) - func(p.combine(h, 1.0, -s))) / (2 * s)


def fd_check(grad: GradientField, func, p: Potential, directions, s: float = 1e-5) -> list[float]:
    """Relative errors |<grad, h> - FD| / max(|FD|, |<grad, h>|) over the directions."""
    errs = []
    for h in directions:
        an = grad.pair(h)
        fd = directional_fd(func, p, h, s)
        errs.append(abs(an - fd) / max(abs(fd), abs(an), 1e-300))
    return errs
