"""Potentials phi = (phi1, phi2) on the circle R/Z.

Two representations are supported: truncated Fourier series with
coefficients indexed -K..K with respect to exp(2 pi i n x), and the
constant family phi_{a,k}(x) = (a e^{2 pi i k x}, -conj(a) e^{-2 pi i k x}).
Potentials are immutable and hashable so they can key caches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

FOCUSING = "focusing"
GENERAL = "general"

QUARTIC_GRID = 2048


def _pi(dtype):
    if np.dtype(dtype) == np.dtype(np.longdouble):
        # pi rounded to extended precision
        return np.longdouble("3.14159265358979323846264338327950288")
    return np.pi


def _as_complex_tuple(values) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class Potential:
    representation: str
    K: int = 0
    coeffs1: tuple[complex, ...] = (0j,)
    coeffs2: tuple[complex, ...] = (0j,)
    a: complex = 0j
    k: int = 0
    symmetry: str = GENERAL

    def __post_init__(self):
        if self.representation == "fourier":
            if len(self.coeffs1) != 2 * self.K + 1 or len(self.coeffs2) != 2 * self.K + 1:
                raise ValueError("coefficient arrays must have length 2K+1")
        elif self.representation == "constant":
            if self.symmetry != FOCUSING:
                raise ValueError("constant potentials are focusing by construction")
        else:
            raise ValueError(f"unknown representation {self.representation!r}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def fourier(cls, coeffs1, coeffs2, symmetry: str = GENERAL) -> "Potential":
        c1 = np.asarray(coeffs1, dtype=complex)
        c2 = np.asarray(coeffs2, dtype=complex)
        if c1.shape != c2.shape or c1.ndim != 1 or c1.size % 2 == 0:
            raise ValueError("expected two odd-length coefficient arrays of equal size")
        K = (c1.size - 1) // 2
        return cls("fourier", K, _as_complex_tuple(c1), _as_complex_tuple(c2), symmetry=symmetry)

    @classmethod
    def constant(cls, a: complex, k: int = 0) -> "Potential":
        return cls("constant", a=complex(a), k=int(k), symmetry=FOCUSING)

    @classmethod
    def zero(cls) -> "Potential":
        return cls.fourier([0j], [0j], symmetry=FOCUSING)

    # -- views ----------------------------------------------------------------

    @property
    def is_focusing(self) -> bool:
        return self.symmetry == FOCUSING

    def fourier_arrays(self) -> tuple[int, np.ndarray, np.ndarray]:
        """(K, c1, c2) with c[j] the coefficient of frequency j - K."""
        if self.representation == "fourier":
            return self.K, np.array(self.coeffs1), np.array(self.coeffs2)
        K = abs(self.k)
        c1 = np.zeros(2 * K + 1, dtype=complex)
        c2 = np.zeros(2 * K + 1, dtype=complex)
        c1[K + self.k] = self.a
        c2[K - self.k] = -np.conj(self.a)
        return K, c1, c2

    def to_fourier(self) -> "Potential":
        if self.representation == "fourier":
            return self
        _, c1, c2 = self.fourier_arrays()
        return Potential.fourier(c1, c2, symmetry=FOCUSING)

    def evaluate(self, x, dtype=float):
        """(phi1(x), phi2(x)); x may be a scalar or an array.

        ``dtype=np.longdouble`` evaluates in extended precision.
        """
        x = np.asarray(x, dtype=dtype)
        cdt = np.result_type(x.dtype, np.complex64)
        two_pi_i = 2j * _pi(dtype)
        if self.representation == "constant":
            a = np.asarray(self.a, dtype=cdt)
            ph = np.exp(two_pi_i * self.k * x)
            return a * ph, -np.conj(a) * np.conj(ph)
        K, c1, c2 = self.fourier_arrays()
        freqs = np.arange(-K, K + 1)
        basis = np.exp(two_pi_i * np.multiply.outer(x, freqs))
        return basis @ c1.astype(cdt), basis @ c2.astype(cdt)

    def sup_bound(self) -> float:
        """Upper bound for max_x max(|phi1|, |phi2|)."""
        _, c1, c2 = self.fourier_arrays()
        return float(max(np.abs(c1).sum(), np.abs(c2).sum()))

    def max_frequency(self) -> int:
        K, c1, c2 = self.fourier_arrays()
        nz = np.nonzero((np.abs(c1) > 0) | (np.abs(c2) > 0))[0]
        if nz.size == 0:
            return 0
        return int(np.max(np.abs(nz - K)))

    # -- algebra ------------------------------------------------------------

    def combine(self, other: "Potential", s: complex = 1.0, t: complex = 1.0) -> "Potential":
        """s * self + t * other, in Fourier representation."""
        K1, a1, a2 = self.fourier_arrays()
        K2, b1, b2 = other.fourier_arrays()
        K = max(K1, K2)
        c1 = np.zeros(2 * K + 1, dtype=complex)
        c2 = np.zeros(2 * K + 1, dtype=complex)
        c1[K - K1:K + K1 + 1] += s * a1
        c2[K - K1:K + K1 + 1] += s * a2
        c1[K - K2:K + K2 + 1] += t * b1
        c2[K - K2:K + K2 + 1] += t * b2
        real_weights = complex(s).imag == 0 and complex(t).imag == 0
        sym = FOCUSING if (self.is_focusing and other.is_focusing and real_weights) else GENERAL
        return Potential.fourier(c1, c2, symmetry=sym)

    def __add__(self, other: "Potential") -> "Potential":
        return self.combine(other)

    def __sub__(self, other: "Potential") -> "Potential":
        return self.combine(other, 1.0, -1.0)

    def scaled(self, s: complex) -> "Potential":
        return self.combine(Potential.zero(), s, 0.0)

    def coefficient_distance(self, other: "Potential") -> float:
        d = self - other
        _, c1, c2 = d.fourier_arrays()
        return float(max(np.abs(c1).max(), np.abs(c2).max()))

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        if self.representation == "constant":
            return {"representation": "constant", "a": [self.a.real, self.a.imag], "k": self.k}
        return {
            "representation": "fourier",
            "K": self.K,
            "coeffs1": [[c.real, c.imag] for c in self.coeffs1],
            "coeffs2": [[c.real, c.imag] for c in self.coeffs2],
            "symmetry": self.symmetry,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Potential":
        rep = data.get("representation")
        if rep == "constant":
            re, im = data["a"]
            return cls.constant(complex(re, im), int(data.get("k", 0)))
        if rep == "fourier":
            K = int(data["K"])
            c1 = [complex(re, im) for re, im in data["coeffs1"]]
            c2 = [complex(re, im) for re, im in data["coeffs2"]]
            if len(c1) != 2 * K + 1 or len(c2) != 2 * K + 1:
                raise ValueError("coefficient arrays must have length 2K+1")
            sym = data.get("symmetry", GENERAL)
            if sym not in (FOCUSING, GENERAL):
                raise ValueError(f"unknown symmetry {sym!r}")
            p = cls.fourier(c1, c2, symmetry=sym)
            if sym == FOCUSING and focusing_defect(p) > 1e-12:
                raise ValueError("coefficients violate the focusing relation c2[n] = -conj(c1[-n])")
            return p
        raise ValueError(f"unknown representation {rep!r}")


def make_focusing(coeffs1: Mapping[int, complex] | Sequence[complex]) -> Potential:
    """Focusing potential from the coefficients of phi1.

    ``coeffs1`` is either a mapping frequency -> coefficient or an odd-length
    sequence indexed -K..K. The second component is fixed by phi2 = -conj(phi1),
    i.e. c2[n] = -conj(c1[-n]).
    """
    if isinstance(coeffs1, Mapping):
        K = max((abs(int(n)) for n in coeffs1), default=0)
        c1 = np.zeros(2 * K + 1, dtype=complex)
        for n, c in coeffs1.items():
            c1[K + int(n)] += complex(c)
    else:
        c1 = np.asarray(coeffs1, dtype=complex)
        if c1.ndim != 1 or c1.size % 2 == 0:
            raise ValueError("coefficient sequence must have odd length 2K+1")
    c2 = -np.conj(c1[::-1])
    return Potential.fourier(c1, c2, symmetry=FOCUSING)


def random_focusing(rng: np.random.Generator, K: int, norm: float = 1.0) -> Potential:
    """Random focusing trigonometric polynomial with L2 norm ``norm``."""
    c1 = rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1)
    p = make_focusing(c1)
    return p.scaled(norm / sobolev_norm(p, 0))


def focusing_defect(p: Potential) -> float:
    """max_n |c2[n] + conj(c1[-n])|; zero exactly for focusing coefficients."""
    _, c1, c2 = p.fourier_arrays()
    return float(np.max(np.abs(c2 + np.conj(c1[::-1]))))


def evaluate(p: Potential, x):
    return p.evaluate(x)


def sobolev_norm(p: Potential, N: int) -> float:
    if N < 0:
        raise ValueError("Sobolev index must be nonnegative")
    K, c1, c2 = p.fourier_arrays()
    w = (1.0 + (2 * np.pi * np.arange(-K, K + 1)) ** 2) ** N
    return float(np.sqrt(np.sum(w * (np.abs(c1) ** 2 + np.abs(c2) ** 2))))


def gauge_shift(p: Potential, k: int) -> Potential:
    """(phi1 e^{2 pi i k x}, phi2 e^{-2 pi i k x})."""
    if p.representation == "constant":
        return Potential.constant(p.a, p.k + k)
    K, c1, c2 = p.fourier_arrays()
    Kn = K + abs(k)
    n1 = np.zeros(2 * Kn + 1, dtype=complex)
    n2 = np.zeros(2 * Kn + 1, dtype=complex)
    n1[Kn - K + k:Kn + K + k + 1] = c1
    n2[Kn - K - k:Kn + K - k + 1] = c2
    return Potential.fourier(n1, n2, symmetry=p.symmetry)


def trace_invariants(p: Potential) -> tuple[float, float]:
    """J1 = int |phi1|^2 and J2 = int |phi1'|^2 - |phi1|^4 over one period."""
    K, c1, _ = p.fourier_arrays()
    freqs = 2 * np.pi * np.arange(-K, K + 1)
    j1 = float(np.sum(np.abs(c1) ** 2))
    grad = float(np.sum(freqs**2 * np.abs(c1) ** 2))
    if p.representation == "constant":
        quartic = abs(p.a) ** 4
    else:
        x = np.arange(QUARTIC_GRID) / QUARTIC_GRID
        phi1, _ = p.evaluate(x)
        quartic = float(np.mean(np.abs(phi1) ** 4))
    return j1, grad - quartic


def constant_modulus_circle(modulus: float, alphas) -> list[Potential]:
    return [Potential.constant(modulus * complex(math.cos(al), math.sin(al))) for al in alphas]
