"""Shared, cached spectra of constant potentials."""

from functools import lru_cache

import numpy as np

from zsspec.classify import full_spectrum
from zsspec.oracle import shifted_spectrum
from zsspec.potential import Potential

N_SCAN = 8
ORACLE_AMPLITUDES = (1, 2 + 1j, 3.0, 4j, np.pi * np.exp(1j * np.pi / 3))
ORACLE_SHIFTS = (0, 1, -2)


@lru_cache(maxsize=None)
def constant_report(a: complex, k: int = 0, n_scan: int = N_SCAN):
    return full_spectrum(Potential.constant(complex(a), k), n_scan=n_scan)


def scanned(value: complex, R: int, n_scan: int) -> bool:
    if abs(value) < R * np.pi + np.pi / 4:
        return True
    return any(abs(value - n * np.pi) < np.pi / 4 for n in range(-n_scan, n_scan + 1) if abs(n) > R)


def oracle_records(a: complex, k: int, R: int, n_scan: int = N_SCAN):
    o = shifted_spectrum(a, k, n_scan + abs(k) + 2)
    return [r for r in o.records if scanned(r.value, R, n_scan)]
