"""Argument-principle root counting and localisation for characteristic functions.

On a circle lam = c + r z, |z| = 1, the trapezoid rule with N nodes gives the
normalised moments

    nu_n = (1 / 2 pi i) * contour integral of ((lam - c) / r)^n chi'/chi dlam
         ~ (r / N) * sum_j z_j^(n+1) (chi'/chi)(lam_j),

so nu_0 is the number of zeros inside and nu_1..nu_m are power sums of the
zeros in the scaled coordinate u = (lam - c) / r. Nested rules (all nodes and
every second node) provide the convergence check without extra transfer calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .characteristic import (
    CharKind,
    ContourSamples,
    Disk,
    central_disk,
    char_from_matrices,
    char_on_contour,
    contour_matrices,
    counting_disk,
)
from .config import DEFAULT, Tolerances
from .errors import ClusterAmbiguity, NonIntegerWinding, NoValidR, SpectralError
from .potential import Potential
from .transfer import transfer_batch


@dataclass(frozen=True)
class RootCluster:
    value: complex
    multiplicity: int
    residual: float


# -- quadrature -------------------------------------------------------------------


def _normalised_moments(samples: ContourSamples, n_max: int, stride: int = 1) -> np.ndarray:
    z = (samples.lam[::stride] - samples.disk.center) / samples.disk.radius
    g = samples.dvalue[::stride] / samples.value[::stride]
    w = samples.disk.radius * z * g / z.size
    powers = z[None, :] ** np.arange(n_max + 1)[:, None]
    return powers @ w


def _moments_agree(a: np.ndarray, b: np.ndarray, rel: float = 1e-9) -> bool:
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - b))) <= rel * scale


def _noise_level(samples: ContourSamples, kind: CharKind) -> float:
    """Relative rounding level of chi'/chi on the contour, from the Floquet-entry size."""
    size = float(np.max(np.abs(samples.matrices)))
    if kind is CharKind.CHI_P:
        size = size * size
    return 1e3 * np.finfo(float).eps * max(size, 1.0) / float(np.min(np.abs(samples.value)))


def _is_integer_like(w: complex, window: float) -> bool:
    return abs(w.real - round(w.real)) < window and abs(w.imag) < window


def converged_samples(
    p: Potential,
    disk: Disk,
    kind,
    tol: Tolerances = DEFAULT,
    with_moments: bool = False,
):
    """Adaptively sampled contour data whose winding number (and moments) have settled.

    Returns (samples, count, nu) with nu the normalised moments nu_0..nu_count
    (only nu_0 unless ``with_moments``).
    """
    kind = CharKind.parse(kind)
    nodes = tol.min_nodes
    last = 0j
    while nodes <= tol.max_nodes:
        s = char_on_contour(p, disk, nodes, kind, tol)
        coarse = _normalised_moments(s, 0, stride=2)
        fine = _normalised_moments(s, 0)
        last = complex(fine[0])
        w_c, w_f = complex(coarse[0]), last
        if (
            _is_integer_like(w_f, tol.winding_window)
            and _is_integer_like(w_c, tol.winding_window)
            and round(w_c.real) == round(w_f.real)
        ):
            count = int(round(w_f.real))
            if not with_moments or count == 0:
                return s, count, fine
            n_max = min(count, tol.max_roots)
            nu_f = _normalised_moments(s, n_max)
            nu_c = _normalised_moments(s, n_max, stride=2)
            if _moments_agree(nu_f, nu_c, max(1e-9, _noise_level(s, kind))):
                return s, count, nu_f
        nodes *= 2
    raise NonIntegerWinding(disk, last)


def count_zeros(p: Potential, disk: Disk, kind, tol: Tolerances = DEFAULT) -> int:
    """Number of zeros of the characteristic function inside ``disk``, with multiplicity."""
    return converged_samples(p, disk, kind, tol)[1]


def power_sums(p: Potential, disk: Disk, kind, n_max: int, tol: Tolerances = DEFAULT) -> np.ndarray:
    """s_n = (1/2 pi i) * contour integral of lam^n chi'/chi dlam, n = 0..n_max."""
    kind = CharKind.parse(kind)
    s, count, _ = converged_samples(p, disk, kind, tol)
    # refine until the requested moments are stable as well
    while True:
        g = s.dvalue / s.value
        dl = s.lam - disk.center
        w = dl * g / s.n
        powers = s.lam[None, :] ** np.arange(n_max + 1)[:, None]
        fine = powers @ w
        coarse = powers[:, ::2] @ (dl[::2] * g[::2] / (s.n // 2))
        if _moments_agree(fine, coarse) or 2 * s.n > tol.max_nodes:
            break
        s = char_on_contour(p, disk, 2 * s.n, kind, tol)
    fine[0] = count
    return fine


def newton_identities(psums, m: int) -> np.ndarray:
    """Monic coefficients [1, c_1, ..., c_m] (highest degree first) from power sums p_1..p_m.

    ``psums[k]`` is the k-th power sum; psums[0] is ignored.
    """
    e = np.zeros(m + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, m + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * psums[i]
        e[k] = acc / k
    signs = (-1.0) ** np.arange(m + 1)
    return signs * e


# -- clustering -------------------------------------------------------------------


def cluster_tolerance(k: int, center: complex, scale: float, tol: Tolerances) -> float:
    """Largest spread of k polynomial roots still read as one k-fold root.

    A k-fold root perturbed at relative level eps splits by about eps^(1/k),
    so the tolerance grows with multiplicity.
    """
    base = tol.cluster_radius * (1.0 + abs(center))
    return max(base, 4.0 * tol.noise_floor ** (1.0 / k) * scale)


def _group_guesses(guesses: np.ndarray, scale: float, tol: Tolerances) -> list[np.ndarray]:
    groups = []
    stack = [np.arange(guesses.size)]
    while stack:
        idx = stack.pop()
        pts = guesses[idx]
        mean = pts.mean()
        spread = float(np.max(np.abs(pts - mean)))
        if idx.size == 1 or spread <= cluster_tolerance(idx.size, mean, scale, tol):
            groups.append(idx)
            continue
        Z = linkage(np.column_stack([pts.real, pts.imag]), method="single")
        labels = fcluster(Z, 2, criterion="maxclust")
        if np.unique(labels).size < 2:
            # tied linkage heights: peel off the point farthest from the mean
            labels = np.ones(idx.size, dtype=int)
            labels[int(np.argmax(np.abs(pts - mean)))] = 2
        stack.extend(idx[labels == lab] for lab in (1, 2))
    groups.sort(key=lambda g: (guesses[g].mean().real, guesses[g].mean().imag))
    return groups


def _newton_refine(p, kind, lam0: np.ndarray, limit: np.ndarray, tol: Tolerances, iters: int = 4):
    lam = lam0.copy()
    for _ in range(iters):
        M, dM = transfer_batch(p, lam, tol=tol, precision="double")
        v, dv = char_from_matrices(M, dM, kind)
        step = np.where(dv != 0, v / np.where(dv != 0, dv, 1), 0)
        lam = lam - step
        if np.all(np.abs(step) < 1e-15 * (1 + np.abs(lam))):
            break
    drift = np.abs(lam - lam0)
    return np.where(drift < limit, lam, lam0)


def _separation(guesses: np.ndarray, groups: list[np.ndarray], i: int) -> float:
    others = np.delete(guesses, groups[i])
    return float(np.min(np.abs(others - guesses[groups[i]].mean()))) if others.size else math.inf


def _resolve_groups(p, disk: Disk, kind, guesses, groups, tol: Tolerances):
    """Confirm crowded groups by local recounts, merging neighbours the contour cannot split.

    Returns the final groups and, for each locally recounted group, the root
    mean from its local contour.
    """
    groups = list(groups)
    local_values: dict[int, complex] = {}
    changed = True
    while changed:
        changed = False
        local_values = {}
        for i, g in enumerate(groups):
            center = guesses[g].mean()
            spread = float(np.max(np.abs(guesses[g] - center)))
            sep = _separation(guesses, groups, i)
            floor = tol.cluster_radius * (1.0 + abs(center))
            crowded = sep < 10.0 * max(spread, floor)
            if not crowded and not (g.size > 1 and sep < 0.1 * disk.radius):
                continue
            radius = min(0.45 * sep, disk.radius - abs(center - disk.center))
            ok = radius > 1.5 * spread
            if ok:
                d = Disk(center, radius)
                try:
                    _, k, nloc = converged_samples(p, d, kind, tol, with_moments=True)
                    ok = k == g.size
                    if ok:
                        local_values[i] = d.center + d.radius * nloc[1] / k
                except SpectralError:
                    ok = False
            if ok:
                continue
            if len(groups) == 1:
                raise ClusterAmbiguity(f"cannot confirm the cluster near {center:.6g} in {disk}")
            others = [j for j in range(len(groups)) if j != i]
            j = min(others, key=lambda j: abs(guesses[groups[j]].mean() - center))
            merged = np.concatenate([g, groups[j]])
            groups = [h for k2, h in enumerate(groups) if k2 not in (i, j)] + [merged]
            groups.sort(key=lambda h: (guesses[h].mean().real, guesses[h].mean().imag))
            changed = True
            break
    return groups, local_values


def roots_in_disk(p: Potential, disk: Disk, kind, tol: Tolerances = DEFAULT) -> list[RootCluster]:
    """Roots of the characteristic function in ``disk`` as multiplicity clusters."""
    kind = CharKind.parse(kind)
    samples, m, nu = converged_samples(p, disk, kind, tol, with_moments=True)
    if m == 0:
        return []
    if m > tol.max_roots:
        raise ClusterAmbiguity(f"{m} roots in {disk} exceed the cap of {tol.max_roots}")
    scale = float(np.max(np.abs(samples.value)))
    coeffs = newton_identities(nu, m)
    u = np.roots(coeffs) if m > 1 else np.array([-coeffs[1]])
    guesses = disk.center + disk.radius * u
    groups = _group_guesses(guesses, disk.radius, tol)

    groups, local_values = _resolve_groups(p, disk, kind, guesses, groups, tol)
    centers = np.array([guesses[g].mean() for g in groups])
    sizes = np.array([g.size for g in groups])
    values = centers.copy()
    simple = [i for i in range(len(groups)) if sizes[i] == 1]
    if simple:
        sep = np.array([_separation(guesses, groups, i) for i in simple])
        limit = np.minimum(0.25 * sep, disk.radius)
        values[simple] = _newton_refine(p, kind, centers[simple], limit, tol)
    for i, v in local_values.items():
        if sizes[i] > 1:
            values[i] = v

    M, dM = transfer_batch(p, values, tol=tol, precision="double")
    res, _ = char_from_matrices(M, dM, kind)
    out = [RootCluster(complex(v), int(k), float(abs(r))) for v, k, r in zip(values, sizes, res)]
    for c in out:
        if c.residual > tol.residual * max(scale, 1.0):
            raise ClusterAmbiguity(f"root {c.value:.6g} in {disk} failed refinement (residual {c.residual:.2e})")
    return out


# -- counting-disk layout ------------------------------------------------------------


@dataclass
class DiskCheck:
    label: str
    disk: Disk
    which: str
    expected: int
    count: Optional[int]
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.count == self.expected

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "center": [self.disk.center.real, self.disk.center.imag],
            "radius": self.disk.radius,
            "which": self.which,
            "expected": self.expected,
            "count": self.count,
            "error": self.error,
            "passed": self.passed,
        }


@dataclass
class LayoutReport:
    R: int
    n_scan: int
    checks: list[DiskCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def rejections(self) -> int:
        return sum(1 for c in self.checks if c.error is not None)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def layout_disks(R: int, n_scan: int) -> list[tuple[str, Disk, int, int]]:
    """(label, disk, expected periodic count, expected Dirichlet count)."""
    out = [(f"B_{R}", central_disk(R), 4 * R + 2, 2 * R + 1)]
    for n in range(-n_scan, n_scan + 1):
        if abs(n) > R:
            out.append((f"D_{n}", counting_disk(n), 2, 1))
    return out


def localize_spectrum(p: Potential, R: int, n_scan: int, tol: Tolerances = DEFAULT) -> LayoutReport:
    """Check the counting-disk layout for B_R and the disks D_n, R < |n| <= n_scan."""
    if R < 0 or n_scan < R:
        raise ValueError("need 0 <= R <= n_scan")
    disks = layout_disks(R, n_scan)
    contour_matrices(p, [d for _, d, _, _ in disks], tol.min_nodes, tol)
    report = LayoutReport(R, n_scan)
    for label, d, n_per, n_dir in disks:
        for which, kind, expected in (("periodic", CharKind.CHI_P, n_per), ("dirichlet", CharKind.CHI_D, n_dir)):
            try:
                report.checks.append(DiskCheck(label, d, which, expected, count_zeros(p, d, kind, tol)))
            except SpectralError as exc:
                report.checks.append(DiskCheck(label, d, which, expected, None, f"{type(exc).__name__}: {exc}"))
    return report


def select_R(p: Potential, n_scan: int, tol: Tolerances = DEFAULT) -> int:
    """Smallest R <= n_scan whose layout check passes."""
    for R in range(n_scan + 1):
        if localize_spectrum(p, R, n_scan, tol).passed:
            return R
    raise NoValidR(f"no R <= {n_scan} satisfies the counting layout")
