"""Discriminant and characteristic functions of the periodic and Dirichlet problems."""

from __future__ import annotations

import enum
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import BoundaryRoot
from .potential import Potential
from .transfer import transfer_batch


class CharKind(str, enum.Enum):
    DELTA = "delta"
    CHI_P = "chi_p"
    CHI_P_PLUS = "chi_p_plus"
    CHI_P_MINUS = "chi_p_minus"
    CHI_D = "chi_D"

    @classmethod
    def parse(cls, value) -> "CharKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if kind.value.lower() == str(value).lower():
                return kind
        raise ValueError(f"unknown characteristic kind {value!r}")


def char_from_matrices(M: np.ndarray, dM: np.ndarray, kind: CharKind):
    """Values and lam-derivatives of a characteristic function from M(1, lam), dM/dlam.

    Works on stacks of matrices (trailing shape (2, 2)).
    """
    kind = CharKind.parse(kind)
    m1, m2, m3, m4 = M[..., 0, 0], M[..., 0, 1], M[..., 1, 0], M[..., 1, 1]
    d1, d2, d3, d4 = dM[..., 0, 0], dM[..., 0, 1], dM[..., 1, 0], dM[..., 1, 1]
    if kind is CharKind.CHI_D:
        return (m4 + m3 - m2 - m1) / 2j, (d4 + d3 - d2 - d1) / 2j
    delta = m1 + m4
    ddelta = d1 + d4
    if kind is CharKind.DELTA:
        return delta, ddelta
    if kind is CharKind.CHI_P_PLUS:
        return delta - 2, ddelta
    if kind is CharKind.CHI_P_MINUS:
        return delta + 2, ddelta
    # factored form avoids cancellation near Delta = +-2
    return (delta - 2) * (delta + 2), 2 * delta * ddelta


def evaluate_char(p: Potential, lam, kind, tol: Tolerances = DEFAULT, precision: str = "extended"):
    """(value, derivative) of the characteristic function ``kind`` at lam (scalar or array)."""
    scalar = np.ndim(lam) == 0
    M, dM = transfer_batch(p, np.ravel(lam), tol=tol, precision=precision)
    v, dv = char_from_matrices(M, dM, kind)
    if scalar:
        return complex(v[0]), complex(dv[0])
    shape = np.shape(lam)
    return v.reshape(shape), dv.reshape(shape)


# -- contours ------------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, lam, margin: float = 0.0) -> bool:
        return abs(complex(lam) - self.center) < self.radius - margin

    def nodes(self, n: int) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(n) / n)
        return self.center + self.radius * z

    def __str__(self) -> str:
        c = self.center
        return f"Disk({c.real:.6g}{c.imag:+.6g}j, r={self.radius:.6g})"


def counting_disk(n: int) -> Disk:
    """D_n = {|lam - n pi| < pi/4}."""
    return Disk(n * np.pi, np.pi / 4)


def central_disk(R: int) -> Disk:
    """B_R = {|lam| < R pi + pi/4}."""
    return Disk(0.0, R * np.pi + np.pi / 4)


@dataclass(frozen=True)
class ContourSamples:
    disk: Disk
    lam: np.ndarray
    value: np.ndarray
    dvalue: np.ndarray
    matrices: np.ndarray
    dmatrices: np.ndarray

    @property
    def n(self) -> int:
        return self.lam.size

    def clearance(self) -> float:
        """min |chi / chi'| / radius over the nodes: a local distance-to-root estimate."""
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(self.value) / np.abs(self.dvalue)
        ratio = np.where(np.isfinite(ratio), ratio, np.inf)
        if np.any(self.value == 0):
            return 0.0
        return float(np.min(ratio) / self.disk.radius)


class _ContourCache:
    """Bounded LRU store of transfer matrices on contour nodes."""

    def __init__(self, maxsize: int = 512):
        self.maxsize = maxsize
        self._data: OrderedDict = OrderedDict()

    def get(self, key):
        if key in self._data:
            self._data.move_to_end(key)
            return self._data[key]
        return None

    def put(self, key, value):
        self._data[key] = value
        self._data.move_to_end(key)
        while len(self._data) > self.maxsize:
            self._data.popitem(last=False)

    def clear(self):
        self._data.clear()


CONTOUR_CACHE = _ContourCache()
CONTOUR_PRECISION = "double"


def contour_matrices(p: Potential, disks, nodes: int, tol: Tolerances = DEFAULT):
    """Transfer matrices on the nodes of several circles, computed in one batch.

    Returns a list of (lam, M, dM) per disk; results are cached.
    """
    if nodes < 64:
        raise ValueError("contours need at least 64 nodes")
    keys = [(p, d, nodes, tol) for d in disks]
    missing = [i for i, k in enumerate(keys) if CONTOUR_CACHE.get(k) is None]
    if missing:
        lams = np.concatenate([disks[i].nodes(nodes) for i in missing])
        M, dM = transfer_batch(p, lams, tol=tol, precision=CONTOUR_PRECISION)
        M.setflags(write=False)
        dM.setflags(write=False)
        for j, i in enumerate(missing):
            sl = slice(j * nodes, (j + 1) * nodes)
            CONTOUR_CACHE.put(keys[i], (lams[sl], M[sl], dM[sl]))
    return [CONTOUR_CACHE.get(k) for k in keys]


def char_on_contour(
    p: Potential,
    disk: Disk,
    nodes: int,
    kind,
    tol: Tolerances = DEFAULT,
    check: bool = True,
) -> ContourSamples:
    """Samples of (chi, chi') on the positively oriented circle bounding ``disk``."""
    lam, M, dM = contour_matrices(p, [disk], nodes, tol)[0]
    v, dv = char_from_matrices(M, dM, kind)
    samples = ContourSamples(disk, lam, v, dv, M, dM)
    if check:
        c = samples.clearance()
        if c < tol.clearance:
            raise BoundaryRoot(disk, c)
    return samples
