import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zsspec.characteristic import evaluate_char
from zsspec.oracle import ANTI, DIRICHLET, PROPER, compare, constant_dirichlet, constant_periodic, shifted_spectrum
from zsspec.potential import constant_modulus_circle

from .spectra import ORACLE_AMPLITUDES, ORACLE_SHIFTS, constant_report, oracle_records


def _at(records, value, tol=1e-9):
    hits = [r for r in records if abs(r.value - value) < tol]
    assert len(hits) == 1, (value, records)
    return hits[0]


def test_periodic_a_one():
    recs = constant_periodic(1, 3)
    for v in (1j, -1j):
        r = _at(recs, v)
        assert (r.m_alg, r.m_geom, r.parity) == (1, 1, PROPER)
    r = _at(recs, np.sqrt(np.pi**2 - 1))
    assert r.m_alg == 2 and r.parity == ANTI
    assert abs(r.value - 2.9782) < 1e-4


def test_periodic_large_imaginary():
    r = _at(constant_periodic(4j, 3), 1j * np.sqrt(16 - np.pi**2))
    assert (r.m_alg, r.m_geom) == (2, 2)
    assert abs(r.value - 2.4760j) < 1e-4


def test_periodic_resonant_fourfold():
    r = _at(constant_periodic(np.pi * np.exp(0.4j), 3), 0)
    assert r.m_alg == 4


@given(st.floats(0.05, 9.0).filter(lambda m: min(abs(m - n * np.pi) for n in range(1, 4)) > 1e-6), st.floats(0, 2 * np.pi))
def test_periodic_values_satisfy_dispersion(modulus, alpha):
    a = modulus * np.exp(1j * alpha)
    for r in constant_periodic(a, 4):
        for n in r.indices:
            assert abs(r.value**2 + modulus**2 - (n * np.pi) ** 2) < 1e-9 * (1 + n * n)


def test_dirichlet_cases():
    assert all(r.m_alg == 1 for r in constant_dirichlet(1, 4))
    a = np.sqrt(16 - (16 - np.pi**2)) + 1j * np.sqrt(16 - np.pi**2)
    assert abs(abs(a) - 4) < 1e-12
    r = _at(constant_dirichlet(a, 4), 1j * np.sqrt(16 - np.pi**2))
    assert r.m_alg == 2
    assert _at(constant_dirichlet(np.pi, 4), 0).m_alg == 3


def test_shift_identity_and_move():
    base = shifted_spectrum(1, 0, 3)
    assert [r.value for r in base.periodic] == [r.value for r in constant_periodic(1, 3)]
    moved = shifted_spectrum(1, 1, 3)
    for v in (-np.pi + 1j, -np.pi - 1j):
        assert _at(moved.periodic, v).m_alg == 1
    assert _at(moved.dirichlet, -np.pi).parity == DIRICHLET
    a = 2 + 1j
    assert _at(shifted_spectrum(a, 2, 3).dirichlet, 1j - 2 * np.pi).m_alg == 1


def test_odd_shift_swaps_parity():
    assert _at(shifted_spectrum(1, 1, 3).periodic, -np.pi + 1j).parity == ANTI


def test_delta_invariant_on_modulus_circle():
    lam = np.linspace(-10, 10, 41) + 0.4j
    ref, _ = evaluate_char(constant_modulus_circle(2.5, [0.0])[0], lam, "delta")
    for p in constant_modulus_circle(2.5, np.linspace(0, 2 * np.pi, 7)):
        d, _ = evaluate_char(p, lam, "delta")
        assert np.max(np.abs(d - ref)) < 1e-9


@pytest.mark.parametrize("k", ORACLE_SHIFTS)
@pytest.mark.parametrize("a", ORACLE_AMPLITUDES)
def test_numeric_spectrum_matches_closed_form(a, k):
    rep = constant_report(a, k)
    diffs = compare(rep.records, oracle_records(a, k, rep.R))
    bad = [d.to_json() for d in diffs if not d.ok()]
    assert not bad
