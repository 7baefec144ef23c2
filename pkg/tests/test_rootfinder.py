import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zsspec.characteristic import CharKind, Disk, central_disk, counting_disk, evaluate_char
from zsspec.config import DEFAULT
from zsspec.errors import BoundaryRoot, NoValidR
from zsspec.potential import Potential, random_focusing
from zsspec.rootfinder import (
    converged_samples,
    count_zeros,
    localize_spectrum,
    newton_identities,
    power_sums,
    roots_in_disk,
    select_R,
)

ZERO = Potential.zero()


@pytest.mark.parametrize("n", [-3, -1, 1, 2, 5])
def test_zero_potential_counts_in_counting_disks(n):
    assert count_zeros(ZERO, counting_disk(n), "chi_p") == 2
    assert count_zeros(ZERO, counting_disk(n), "chi_D") == 1


@pytest.mark.parametrize("R", [0, 1, 3])
def test_zero_potential_counts_in_ball(R):
    assert count_zeros(ZERO, central_disk(R), "chi_p") == 4 * R + 2
    assert count_zeros(ZERO, central_disk(R), "chi_D") == 2 * R + 1


def test_power_sums_zero_potential():
    s = power_sums(ZERO, counting_disk(0), "chi_p", 2)
    assert s[0] == 2 and abs(s[1]) < 1e-10
    s = power_sums(ZERO, counting_disk(1), "chi_D", 1)
    assert s[0] == 1 and abs(s[1] - np.pi) < 1e-10


def test_power_sums_imaginary_pair():
    a = 4j
    top = 1j * np.sqrt(16 - np.pi**2)
    s = power_sums(Potential.constant(a), Disk(top, 0.3), "chi_p", 1)
    # chi_p = -4 sin^2(kappa) for constants, so every zero is double
    assert s[0] == 2
    assert abs(s[1] / s[0] - 2.4760j) < 1e-4


def test_power_sum_zero_is_count():
    p = random_focusing(np.random.default_rng(4), 2, 0.7)
    for kind in ("chi_p", "chi_D"):
        assert power_sums(p, central_disk(1), kind, 3)[0] == count_zeros(p, central_disk(1), kind)


def test_newton_identities_recover_polynomial():
    roots = np.array([1.0, -2.0 + 1j, 0.5j])
    psums = [np.sum(roots**k) for k in range(4)]
    assert np.allclose(newton_identities(psums, 3), np.poly(roots), atol=1e-12)


def test_roots_double_at_pi():
    (c,) = roots_in_disk(ZERO, counting_disk(1), "chi_p")
    assert c.multiplicity == 2 and abs(c.value - np.pi) < 1e-7


def test_roots_fourfold_at_origin():
    (c,) = roots_in_disk(Potential.constant(np.pi), Disk(0, 0.5), "chi_p")
    assert c.multiplicity == 4 and abs(c.value) < 1e-5


def test_roots_constant_one_double():
    (c,) = roots_in_disk(Potential.constant(1), counting_disk(1), "chi_p")
    assert c.multiplicity == 2
    assert abs(c.value - np.sqrt(np.pi**2 - 1)) < 1e-6
    assert abs(c.value - 2.9782) < 1e-4


def test_boundary_root_detected():
    with pytest.raises(BoundaryRoot):
        count_zeros(ZERO, Disk(np.pi / 2, np.pi / 2), "chi_D")


@given(st.integers(0, 300), st.integers(1, 3))
def test_multiplicities_sum_and_residuals(seed, K):
    p = random_focusing(np.random.default_rng(seed), K, 0.5)
    disk = central_disk(1)
    for kind in (CharKind.CHI_P, CharKind.CHI_D):
        s, m, _ = converged_samples(p, disk, kind)
        roots = roots_in_disk(p, disk, kind)
        assert sum(c.multiplicity for c in roots) == m
        scale = float(np.max(np.abs(s.value)))
        for c in roots:
            assert c.residual < 1e-7 * scale


@given(st.integers(0, 300))
def test_focusing_roots_closed_under_conjugation(seed):
    p = random_focusing(np.random.default_rng(seed), 2, 1.0)
    roots = roots_in_disk(p, central_disk(1), "chi_p")
    for c in roots:
        partner = [d for d in roots if abs(d.value - np.conj(c.value)) < 1e-7 * (1 + abs(c.value))]
        assert partner and partner[0].multiplicity == c.multiplicity


def test_simple_roots_agree_with_newton():
    p = random_focusing(np.random.default_rng(9), 2, 1.5)
    for c in roots_in_disk(p, central_disk(1), "chi_p"):
        if c.multiplicity != 1:
            continue
        lam = c.value
        for _ in range(6):
            v, dv = evaluate_char(p, lam, "chi_p")
            lam = lam - v / dv
        assert abs(lam - c.value) < 1e-7 * (1 + abs(lam))


def test_layout_zero_potential():
    rep = localize_spectrum(ZERO, 0, 8)
    assert rep.passed and rep.rejections == 0
    assert len(rep.checks) == 2 * 17


def test_layout_small_random():
    p = random_focusing(np.random.default_rng(0), 2, 0.1)
    assert localize_spectrum(p, 0, 6).passed


def test_select_R_examples():
    assert select_R(ZERO, 4) == 0
    # |a| = 1 moves the zeros at 0 to +-i, outside the disk of radius pi/4
    assert select_R(Potential.constant(1), 4) == 1


def test_select_R_large_imaginary_constant():
    # zeros sqrt(n^2 pi^2 - 16) sit outside their D_n for n <= 3, so R = 3 is minimal
    p = Potential.constant(4j)
    R = select_R(p, 6)
    assert R == 3
    assert localize_spectrum(p, R, 6).passed
    assert not localize_spectrum(p, R - 1, 6).passed


def test_select_R_raises_when_scan_too_small():
    with pytest.raises(NoValidR):
        select_R(Potential.constant(4j), 0)


def test_layout_rejects_bad_arguments():
    with pytest.raises(ValueError):
        localize_spectrum(ZERO, 3, 2)
    assert DEFAULT.max_roots >= 64
