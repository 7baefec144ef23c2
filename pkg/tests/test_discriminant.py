import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zsspec.discriminant import (
    DIRICHLET,
    PERIODIC,
    CharPolynomial,
    build_qpoly,
    discriminant_polar,
    discriminant_report,
    indicator_of,
    multiple_root_indicator,
    pairwise_discriminant,
    sylvester_discriminant,
    sylvester_matrix,
)
from zsspec.errors import LayoutError
from zsspec.potential import Potential, constant_modulus_circle, random_focusing

from .conftest import complexes


def test_degree_two_hand_expansion():
    q = CharPolynomial((1, 0, 1))
    S = sylvester_matrix(q)
    assert np.array_equal(S, np.array([[1, 0, 1], [2, 0, 0], [0, 2, 0]]))
    # det = 1*(0*0 - 0*2) - 0 + 1*(2*2 - 0) = 4 = -(b^2 - 4c)
    assert sylvester_discriminant(q) == pytest.approx(4)


def test_double_root_vanishes():
    assert sylvester_discriminant(CharPolynomial((1, 0, 0))) == 0


def test_cubic_against_pairwise():
    q = CharPolynomial.from_roots([1, 2, 3])
    assert sylvester_discriminant(q) == pytest.approx(-4)
    assert sylvester_discriminant(q) == pytest.approx(pairwise_discriminant([1, 2, 3]))


@given(st.lists(complexes, min_size=2, max_size=8))
def test_sylvester_matches_pairwise(roots):
    q = CharPolynomial.from_roots(roots)
    ref = pairwise_discriminant(roots)
    got = sylvester_discriminant(q)
    scale = np.max(np.abs(q.array)) ** (2 * q.degree - 2)
    assert abs(got - ref) <= 1e-9 * max(abs(ref), 1e-6 * scale)


def test_monic_required():
    with pytest.raises(ValueError):
        CharPolynomial((2, 1))
    with pytest.raises(ValueError):
        sylvester_matrix(CharPolynomial((1, 3)))


def test_qpoly_examples():
    q = build_qpoly(Potential.zero(), 0)
    assert np.allclose(q.array, [1, 0, 0], atol=1e-10)
    # zeros +-i|a| must lie in B_0 (radius pi/4), so |a| = 1 is out of reach here
    q = build_qpoly(Potential.constant(0.5), 0)
    assert np.allclose(q.array, [1, 0, 0.25], atol=1e-10)
    with pytest.raises(LayoutError):
        build_qpoly(Potential.constant(1), 0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_qpoly_real_for_focusing(seed):
    p = random_focusing(np.random.default_rng(seed), 2, 0.5)
    for which in (PERIODIC, DIRICHLET):
        assert build_qpoly(p, 1, which).reality_defect() < 1e-8


def test_indicator_examples():
    assert multiple_root_indicator(Potential.constant(np.pi), 1) < 1e-8
    assert multiple_root_indicator(Potential.constant(0.5), 0) > 1e-3
    assert multiple_root_indicator(Potential.zero(), 0) < 1e-8


def test_discriminant_real_for_focusing():
    p = random_focusing(np.random.default_rng(4), 3, 0.5)
    rep = discriminant_report(p, 0)
    assert rep.indicator > 1e-8
    assert abs(rep.discriminant.imag) < 1e-8 * abs(rep.discriminant)


def test_indicator_continuous_on_modulus_circle():
    alphas = np.linspace(0, np.pi / 2, 9)
    vals = [multiple_root_indicator(p, 0) for p in constant_modulus_circle(0.5, alphas)]
    assert max(vals) - min(vals) < 1e-8


def test_indicator_scale_free():
    q = CharPolynomial.from_roots([1, 2, 3])
    q10 = CharPolynomial.from_roots([10, 20, 30])
    assert indicator_of(q) == pytest.approx(abs(sylvester_discriminant(q)) / 11.0 ** 4, rel=1e-12)
    assert indicator_of(q10) > 0


def test_dirichlet_report_has_collision_signal():
    rep = discriminant_report(Potential.constant(1), 1, DIRICHLET)
    data = json.loads(json.dumps(rep.to_json()))
    assert set(data) >= {"R", "which", "coeffs", "discriminant", "indicator", "collision_indicator"}
    # real Dirichlet zeros make Q_D degenerate, simple ones keep the collision signal away from zero
    assert rep.indicator < 1e-8
    assert rep.collision_indicator > 1e-3


def test_huge_discriminant_keeps_phase_and_log():
    roots = np.arange(1, 9) * 1e6
    q = CharPolynomial.from_roots(roots)
    d = sylvester_discriminant(q)
    assert np.isinf(d.real) and d.imag == 0
    phase, log_abs = discriminant_polar(q)
    ref = np.sum(np.log(np.abs(np.subtract.outer(roots, roots))[np.triu_indices(8, 1)])) * 2
    assert log_abs == pytest.approx(ref, rel=1e-10)
    assert abs(phase - np.sign(pairwise_discriminant(roots / 1e6).real)) < 1e-9
