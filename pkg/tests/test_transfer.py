import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zsspec.potential import Potential, gauge_shift, make_focusing, random_focusing
from zsspec.transfer import (
    constant_closed_form,
    fundamental_matrix,
    path_batch,
    transfer_batch,
    zero_potential_matrix,
)

from .conftest import complexes

lams = st.builds(complex, st.floats(-20, 20), st.floats(-3, 3))


def test_zero_potential_is_diagonal_exponential():
    ls = np.array([0.3, 2 + 1j, -7.5, 15 - 0.5j])
    M, _ = transfer_batch(Potential.zero(), ls)
    assert np.max(np.abs(M - zero_potential_matrix(ls))) < 1e-12


def test_initial_value_is_identity():
    res = fundamental_matrix(make_focusing({1: 0.4j, 0: 0.3}), 1.5 + 0.2j, with_path=True)
    assert np.array_equal(res.path[0], np.eye(2))
    assert np.allclose(res.path[-1], res.endpoint, atol=1e-10)


@given(st.integers(0, 500), st.integers(1, 3), st.floats(0.1, 5.0), lams)
def test_wronskian(seed, K, norm, lam):
    p = random_focusing(np.random.default_rng(seed), K, norm)
    res = fundamental_matrix(p, lam, with_path=True, precision="double")
    dets = np.linalg.det(res.path)
    assert np.max(np.abs(dets - 1)) < 1e-9
    assert abs(np.linalg.det(fundamental_matrix(p, lam).endpoint) - 1) < 1e-9


@given(complexes, lams)
def test_constant_numeric_matches_closed_form(a, lam):
    M = fundamental_matrix(Potential.constant(a), lam).endpoint
    assert np.max(np.abs(M - constant_closed_form(a, lam))) < 1e-8


def test_fourier_constant_matches_closed_form():
    a = 1.1 + 0.7j
    ls = np.linspace(-10, 10, 21) + 0.3j
    M, _ = transfer_batch(make_focusing({0: a}), ls)
    assert np.max(np.abs(M - constant_closed_form(a, ls))) < 1e-8


def test_closed_form_zero_amplitude():
    ls = np.array([0.5, -2 + 1j])
    assert np.allclose(constant_closed_form(0, ls, 0.7), zero_potential_matrix(ls, 0.7), atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, -3])
def test_closed_form_resonant_kappa(n):
    a = 2.0
    lam = np.sqrt(complex((n * np.pi) ** 2 - a**2))
    assert np.allclose(constant_closed_form(a, lam), (-1) ** n * np.eye(2), atol=1e-12)


def test_closed_form_kappa_zero():
    a = 1.5
    M = constant_closed_form(a, 1j * a)
    assert M[0, 0] == pytest.approx(1 + a)
    assert M[1, 1] == pytest.approx(1 - a)
    M = constant_closed_form(a, -1j * a)
    assert M[0, 0] == pytest.approx(1 - a)


@given(st.integers(0, 500), lams)
def test_dlambda_against_finite_differences(seed, lam):
    p = random_focusing(np.random.default_rng(seed), 2, 1.0)
    h = 1e-5
    M, dM = transfer_batch(p, [lam, lam + h, lam - h])
    fd = (M[1] - M[2]) / (2 * h)
    assert np.max(np.abs(fd - dM[0])) / max(np.max(np.abs(dM[0])), 1.0) < 1e-6


@given(st.integers(0, 500), st.integers(-2, 2), lams)
def test_gauge_covariance(seed, k, lam):
    p = random_focusing(np.random.default_rng(seed), 2, 1.0)
    x, P = path_batch(gauge_shift(p, k), [lam], points=64)
    _, Q = path_batch(p, [lam + k * np.pi], points=64)
    ph = np.exp(1j * np.pi * k * x)
    D = np.zeros((x.size, 2, 2), dtype=complex)
    D[:, 0, 0], D[:, 1, 1] = ph, 1 / ph
    assert np.max(np.abs(P[0] - D @ Q[0])) < 1e-8


def test_richardson_agrees():
    p = make_focusing({1: 0.5j, -1: 0.2})
    ls = [0.3, 4 + 1j]
    M, _ = transfer_batch(p, ls)
    Mr, _ = transfer_batch(p, ls, richardson=True)
    assert np.max(np.abs(M - Mr)) < 1e-10


def test_double_and_extended_agree():
    p = make_focusing({2: 0.8, 0: -0.3j})
    ls = np.linspace(-12, 12, 7) + 0.5j
    Me, _ = transfer_batch(p, ls)
    Md, _ = transfer_batch(p, ls, precision="double")
    assert np.max(np.abs(Me - Md)) < 1e-9
