"""Closed-form periodic and Dirichlet spectra of the constant potentials phi_{a,k}.

For phi_a = (a, -conj(a)) one has Delta = 2 cos(kappa), kappa^2 = lam^2 + |a|^2,
and chi_D = sin(kappa)/kappa * (lam - i Im a). Records are indexed by the
integer n with kappa = n pi; coincident values are merged with their
multiplicities added. The gauge shift phi_{a,k} moves every eigenvalue by
-k pi and, for odd k, exchanges periodic and anti-periodic eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

PROPER = "proper"
ANTI = "anti"
DIRICHLET = "dirichlet"

_SNAP = 1e-12


@dataclass
class OracleRecord:
    value: complex
    m_alg: int
    m_geom: int
    parity: str
    indices: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "m_alg": self.m_alg,
            "m_geom": self.m_geom,
            "parity": self.parity,
            "indices": list(self.indices),
        }


@dataclass
class OracleSpectrum:
    a: complex
    k: int
    periodic: list[OracleRecord]
    dirichlet: list[OracleRecord]

    @property
    def records(self) -> list[OracleRecord]:
        return self.periodic + self.dirichlet


def _resonance(modulus: float, n: int) -> bool:
    return n != 0 and abs(modulus - abs(n) * math.pi) <= _SNAP * abs(n) * math.pi


def _branch(modulus: float, n: int) -> complex:
    """sgn(n) * sqrt(n^2 pi^2 - |a|^2) with the principal complex root; 0 at resonance."""
    if _resonance(modulus, n):
        return 0j
    root = cmath.sqrt(complex(n * n * math.pi**2 - modulus**2))
    return root if n > 0 else -root


def _merge(raw: list[OracleRecord]) -> list[OracleRecord]:
    out: list[OracleRecord] = []
    for r in raw:
        for o in out:
            if o.parity == r.parity and abs(o.value - r.value) <= _SNAP * (1 + abs(r.value)):
                o.m_alg += r.m_alg
                o.m_geom = max(o.m_geom, r.m_geom)
                o.indices = tuple(sorted(o.indices + r.indices))
                break
        else:
            out.append(OracleRecord(r.value, r.m_alg, r.m_geom, r.parity, r.indices))
    out.sort(key=lambda r: (round(r.value.real, 9), round(r.value.imag, 9)))
    return out


def _parity(n: int) -> str:
    return PROPER if n % 2 == 0 else ANTI


def constant_periodic(a: complex, n_range: int) -> list[OracleRecord]:
    """Periodic eigenvalues of phi_a with index |n| <= n_range."""
    modulus = abs(complex(a))
    raw = []
    for n in range(-n_range, n_range + 1):
        if n == 0:
            if modulus == 0:
                raw.append(OracleRecord(0j, 2, 2, PROPER, (0,)))
            else:
                raw.append(OracleRecord(1j * modulus, 1, 1, PROPER, (0,)))
                raw.append(OracleRecord(-1j * modulus, 1, 1, PROPER, (0,)))
        else:
            raw.append(OracleRecord(_branch(modulus, n), 2, 2, _parity(n), (n,)))
    return _merge(raw)


def constant_dirichlet(a: complex, n_range: int) -> list[OracleRecord]:
    """Dirichlet eigenvalues of phi_a with index |n| <= n_range."""
    a = complex(a)
    modulus = abs(a)
    raw = [OracleRecord(1j * a.imag, 1, 1, DIRICHLET, (0,))]
    for n in range(-n_range, n_range + 1):
        if n:
            raw.append(OracleRecord(_branch(modulus, n), 1, 1, DIRICHLET, (n,)))
    return _merge(raw)


def _shift(records: list[OracleRecord], k: int) -> list[OracleRecord]:
    out = []
    for r in records:
        parity = r.parity
        if k % 2 and parity != DIRICHLET:
            parity = ANTI if parity == PROPER else PROPER
        out.append(OracleRecord(r.value - k * math.pi, r.m_alg, r.m_geom, parity, r.indices))
    return out


def shifted_spectrum(a: complex, k: int, n_range: int) -> OracleSpectrum:
    """Oracle spectrum of phi_{a,k}: the spectrum of phi_a moved by -k pi."""
    return OracleSpectrum(
        complex(a),
        int(k),
        _shift(constant_periodic(a, n_range), k),
        _shift(constant_dirichlet(a, n_range), k),
    )


def within_disk(records: list[OracleRecord], center: complex, radius: float) -> list[OracleRecord]:
    return [r for r in records if abs(r.value - center) < radius]


@dataclass
class RecordDiff:
    parity: str
    oracle: Optional[OracleRecord]
    found_value: Optional[complex]
    found_m_alg: Optional[int]
    found_m_geom: Optional[int]

    @property
    def value_error(self) -> float:
        if self.oracle is None or self.found_value is None:
            return math.inf
        return abs(self.oracle.value - self.found_value)

    def ok(self, value_tol: float = 1e-7) -> bool:
        if self.oracle is None or self.found_value is None:
            return False
        geom_ok = self.parity == DIRICHLET or self.found_m_geom == self.oracle.m_geom
        return self.value_error < value_tol and self.found_m_alg == self.oracle.m_alg and geom_ok

    def to_json(self) -> dict:
        fv = self.found_value
        return {
            "parity": self.parity,
            "oracle": None if self.oracle is None else self.oracle.to_json(),
            "found": None
            if fv is None
            else {"value": [fv.real, fv.imag], "m_alg": self.found_m_alg, "m_geom": self.found_m_geom},
            "value_error": None if math.isinf(self.value_error) else self.value_error,
            "ok": self.ok(),
        }


def compare(found, expected: list[OracleRecord], match_tol: float = 1e-6) -> list[RecordDiff]:
    """Pair numerically found records with oracle records by nearest value.

    ``found`` is any sequence of objects with value, m_alg, m_geom and parity
    attributes. Unpaired entries on either side appear with a None partner.
    """
    pool = list(found)
    diffs = []
    for o in expected:
        best, dist = None, match_tol
        for f in pool:
            if f.parity == o.parity and abs(f.value - o.value) < dist:
                best, dist = f, abs(f.value - o.value)
        if best is None:
            diffs.append(RecordDiff(o.parity, o, None, None, None))
        else:
            pool.remove(best)
            diffs.append(RecordDiff(o.parity, o, best.value, best.m_alg, best.m_geom))
    for f in pool:
        diffs.append(RecordDiff(f.parity, None, f.value, f.m_alg, f.m_geom))
    return diffs
