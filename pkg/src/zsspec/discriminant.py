"""Multiple-eigenvalue detection in B_R through the discriminant of a finite polynomial.

The zeros of chi_p in B_R (or the Dirichlet zeros together with their
conjugates) are packed into a monic polynomial Q whose coefficients come from
contour power sums. Q has a multiple zero iff the resultant of Q and Q' vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .characteristic import CharKind, central_disk
from .config import DEFAULT, Tolerances
from .errors import LayoutError
from .potential import Potential
from .rootfinder import converged_samples, newton_identities

_LOG_MAX = math.log(np.finfo(float).max)

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class CharPolynomial:
    """Monic polynomial, coefficients highest degree first."""

    coeffs: tuple[complex, ...]
    which: str = PERIODIC
    R: int = 0

    def __post_init__(self):
        if len(self.coeffs) < 1 or self.coeffs[0] != 1:
            raise ValueError("CharPolynomial must be monic")

    @classmethod
    def from_roots(cls, roots, which: str = PERIODIC, R: int = 0) -> "CharPolynomial":
        c = np.poly(np.asarray(roots, dtype=complex)).astype(complex)
        return cls(tuple(complex(x) for x in c), which, R)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def roots(self) -> np.ndarray:
        return np.roots(self.array)

    def reality_defect(self) -> float:
        a = self.array
        return float(np.max(np.abs(a.imag)) / np.max(np.abs(a)))

    def to_json(self) -> dict:
        return {"R": self.R, "which": self.which, "coeffs": [[c.real, c.imag] for c in self.coeffs]}


def _zero_polynomial(p: Potential, R: int, which: str, tol: Tolerances) -> np.ndarray:
    """Monic coefficients of prod (lam - z) over the zeros z of chi_p or chi_D in B_R."""
    disk = central_disk(R)
    kind = CharKind.CHI_P if which == PERIODIC else CharKind.CHI_D
    expected = 4 * R + 2 if which == PERIODIC else 2 * R + 1
    _, m, nu = converged_samples(p, disk, kind, tol, with_moments=True)
    if m != expected:
        raise LayoutError(f"{m} {which} zeros in {disk}, expected {expected}")
    return newton_identities(nu, m) * disk.radius ** np.arange(m + 1)


def build_qpoly(p: Potential, R: int, which: str = PERIODIC, tol: Tolerances = DEFAULT) -> CharPolynomial:
    """Q_{p,R} (periodic) or Q_{D,R} (Dirichlet zeros and their conjugates) from contour power sums.

    Moments are taken in the scaled variable u = lam / r on |lam| = r = pi (R + 1/4)
    and the coefficients rescaled afterwards, which keeps Newton's identities
    well conditioned for larger R. Q_{D,R} is real by construction.
    """
    if which not in (PERIODIC, DIRICHLET):
        raise ValueError(f"which must be {PERIODIC!r} or {DIRICHLET!r}")
    coeffs = _zero_polynomial(p, R, which, tol)
    if which == DIRICHLET:
        # prod (lam - mu)(lam - conj mu) = P(lam) * conj(P)(lam)
        coeffs = np.convolve(coeffs, np.conj(coeffs))
    return CharPolynomial(tuple(complex(c) for c in coeffs), which, R)


def sylvester_matrix(q: CharPolynomial) -> np.ndarray:
    """(2d-1) x (2d-1) Sylvester matrix of Q and Q': d-1 shifted rows of Q, d of Q'."""
    d = q.degree
    if d < 2:
        raise ValueError("degree must be at least 2")
    a = q.array
    b = np.polyder(a)
    n = 2 * d - 1
    S = np.zeros((n, n), dtype=complex)
    for i in range(d - 1):
        S[i, i : i + d + 1] = a
    for i in range(d):
        S[d - 1 + i, i : i + d] = b
    return S


def _logdet_extended(S: np.ndarray) -> tuple[complex, float]:
    """(phase, log|det|) by Gaussian elimination with partial pivoting in extended precision.

    LAPACK only works in double; the extra digits matter because the Sylvester
    determinant is small compared with the product of its row norms.
    """
    A = np.array(S, dtype=np.clongdouble)
    n = A.shape[0]
    phase = np.clongdouble(1)
    logabs = 0.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if A[piv, k] == 0:
            return 0j, -math.inf
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            phase = -phase
        pivot = A[k, k]
        mag = np.abs(pivot)
        phase *= pivot / mag
        logabs += float(np.log(mag))
        A[k + 1 :, k:] -= np.outer(A[k + 1 :, k] / pivot, A[k, k:])
    return complex(phase), logabs


def _scaled_logdet(q: CharPolynomial):
    """(phase, log|det|, log scale) with rows divided by the largest coefficient magnitude."""
    S = sylvester_matrix(q)
    scale = float(np.max(np.abs(q.array)))
    phase, logabs = _logdet_extended(S / scale)
    return phase, logabs, math.log(scale)


def sylvester_discriminant(q: CharPolynomial) -> complex:
    """Determinant of the Sylvester matrix of (Q, Q') with coefficients listed highest degree first.

    For monic Q of degree d this equals (-1)^(d(d-1)/2) prod_{i<j} (r_i - r_j)^2;
    for lam^2 + 1 it is +4.
    """
    phase, log_abs = discriminant_polar(q)
    if phase == 0:
        return 0j
    if log_abs > _LOG_MAX:
        # beyond double range; the phase survives in the real/imaginary signs
        return complex(math.copysign(math.inf, phase.real) if phase.real else 0.0,
                       math.copysign(math.inf, phase.imag) if phase.imag else 0.0)
    return phase * math.exp(log_abs)


def discriminant_polar(q: CharPolynomial) -> tuple[complex, float]:
    """(phase, natural log of |D|); finite even when D itself overflows a double."""
    phase, logabs, logscale = _scaled_logdet(q)
    if phase == 0:
        return 0j, -math.inf
    return phase, logabs + (2 * q.degree - 1) * logscale


def pairwise_discriminant(roots) -> complex:
    """(-1)^(d(d-1)/2) prod_{i<j} (r_i - r_j)^2, the Sylvester value for the monic polynomial with these roots."""
    r = np.asarray(roots, dtype=complex)
    d = r.size
    i, j = np.triu_indices(d, 1)
    return complex((-1) ** (d * (d - 1) // 2) * np.prod((r[i] - r[j]) ** 2))


def indicator_of(q: CharPolynomial) -> float:
    """|D| / (max_j |a_j|)^(2d-2)."""
    phase, logabs, logscale = _scaled_logdet(q)
    if phase == 0:
        return 0.0
    return math.exp(logabs + logscale)


def dirichlet_collision_indicator(p: Potential, R: int, tol: Tolerances = DEFAULT) -> float:
    """Indicator of the Dirichlet zeros alone, without their conjugates.

    Q_{D,R} also degenerates whenever some Dirichlet zero is real (mu = conj mu);
    this signal separates genuine collisions of Dirichlet zeros from that case.
    """
    coeffs = _zero_polynomial(p, R, DIRICHLET, tol)
    return indicator_of(CharPolynomial(tuple(complex(c) for c in coeffs), DIRICHLET, R))


def multiple_root_indicator(p: Potential, R: int, which: str = PERIODIC, tol: Tolerances = DEFAULT) -> float:
    """Scale-free discriminant of Q_{p,R}; near zero iff B_R holds a multiple zero."""
    return indicator_of(build_qpoly(p, R, which, tol))


@dataclass
class DiscriminantReport:
    R: int
    which: str
    poly: CharPolynomial
    discriminant: complex
    indicator: float
    collision_indicator: Optional[float] = None
    phase: complex = 0j
    log10_abs: float = -math.inf

    def to_json(self) -> dict:
        d = self.discriminant
        finite = math.isfinite(d.real) and math.isfinite(d.imag)
        out = {
            "R": self.R,
            "which": self.which,
            "coeffs": [[c.real, c.imag] for c in self.poly.coeffs],
            "discriminant": [d.real, d.imag] if finite else None,
            "phase": [self.phase.real, self.phase.imag],
            "log10_abs_discriminant": self.log10_abs if math.isfinite(self.log10_abs) else None,
            "indicator": self.indicator,
        }
        if self.collision_indicator is not None:
            out["collision_indicator"] = self.collision_indicator
        return out


def discriminant_report(p: Potential, R: int, which: str = PERIODIC, tol: Tolerances = DEFAULT) -> DiscriminantReport:
    q = build_qpoly(p, R, which, tol)
    collision = dirichlet_collision_indicator(p, R, tol) if which == DIRICHLET and R >= 1 else None
    phase, log_abs = discriminant_polar(q)
    return DiscriminantReport(
        R, which, q, sylvester_discriminant(q), indicator_of(q), collision, phase, log_abs / math.log(10)
    )
