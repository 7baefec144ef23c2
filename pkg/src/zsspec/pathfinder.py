"""Degeneracy metrics along straight paths of potentials, and random detours around degeneracies.

For a potential with layout radius R:

    M_D = max m_D(lam) over periodic eigenvalues lam in B_R with m_g(lam) = 2 (0 if none),
    M_p = max m_p(lam) over periodic eigenvalues lam in B_R,

where m_D is the Dirichlet multiplicity. A path is simple when M_D = 0 and
M_p = 1 at every sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classify import SpectrumReport, full_spectrum
from .config import DEFAULT, Tolerances
from .errors import SpectralError
from .potential import Potential, random_focusing

DEFAULT_SAMPLES = 33
PATH_N_SCAN = 4


@dataclass
class PathSample:
    t: float
    potential: Potential
    report: Optional[SpectrumReport]
    M_D: int
    M_p: int
    error: Optional[str] = None

    @property
    def R(self) -> Optional[int]:
        return None if self.report is None else self.report.R

    @property
    def standard(self) -> Optional[bool]:
        return None if self.report is None else bool(self.report.verdicts.get("standard"))

    @property
    def simple(self) -> bool:
        return self.error is None and self.M_D == 0 and self.M_p == 1

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "potential": self.potential.to_json(),
            "R": self.R,
            "M_D": self.M_D,
            "M_p": self.M_p,
            "standard": self.standard,
            "error": self.error,
        }


def metrics(report: SpectrumReport, tol: Tolerances = DEFAULT) -> tuple[int, int]:
    """(M_D, M_p) over the periodic eigenvalues in B_R of ``report``."""
    ball = report.periodic(ball_only=True)
    dirichlet = report.dirichlet(ball_only=True)
    m_p = max((r.m_alg for r in ball), default=1)
    m_d = 0
    for r in ball:
        if r.m_geom != 2:
            continue
        reach = 10 * tol.cluster_radius * (1 + abs(r.value))
        near = [d.m_alg for d in dirichlet if abs(d.value - r.value) < reach]
        m_d = max(m_d, max(near, default=0))
    return m_d, m_p


def evaluate_sample(t: float, p: Potential, n_scan: int = PATH_N_SCAN, tol: Tolerances = DEFAULT) -> PathSample:
    """Spectral metrics at one point of a path; numerical failures are recorded, not raised."""
    try:
        report = full_spectrum(p, n_scan=n_scan, tol=tol, ball_only=True)
    except SpectralError as exc:
        worst = (2 * n_scan + 1, 4 * n_scan + 2)
        return PathSample(t, p, None, worst[0], worst[1], f"{type(exc).__name__}: {exc}")
    m_d, m_p = metrics(report, tol)
    return PathSample(t, p, report, m_d, m_p)


@dataclass
class Path:
    samples: list[PathSample]
    status: str = "initial"
    tries: int = 0
    history: list[tuple[int, int]] = field(default_factory=list)

    @property
    def M_D(self) -> int:
        return max(s.M_D for s in self.samples)

    @property
    def M_p(self) -> int:
        return max(s.M_p for s in self.samples)

    @property
    def key(self) -> tuple[int, int]:
        return self.M_D, self.M_p

    @property
    def simple(self) -> bool:
        return all(s.simple for s in self.samples)

    @property
    def interior_simple(self) -> bool:
        return all(s.simple for s in self.samples[1:-1])

    @property
    def R_changes(self) -> list[float]:
        """Parameters t at which the layout radius differs from the previous sample."""
        out = []
        for a, b in zip(self.samples, self.samples[1:]):
            if a.R != b.R:
                out.append(b.t)
        return out

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "tries": self.tries,
            "M_D": self.M_D,
            "M_p": self.M_p,
            "history": [list(h) for h in self.history],
            "R_changes": self.R_changes,
            "samples": [s.to_json() for s in self.samples],
        }

    def csv_rows(self) -> list[list]:
        return [[f"{s.t:.6f}", s.M_D, s.M_p, s.standard, s.R] for s in self.samples]


def _grid(samples: int) -> np.ndarray:
    if samples < 2:
        raise ValueError("a path needs at least two samples")
    return np.linspace(0.0, 1.0, samples)


def straight_path(
    zeta: Potential,
    xi: Potential,
    samples: int = DEFAULT_SAMPLES,
    n_scan: int = PATH_N_SCAN,
    tol: Tolerances = DEFAULT,
    refine: bool = False,
) -> Path:
    """Samples of t -> (1 - t) zeta + t xi; endpoints are the given potentials themselves.

    With ``refine`` a midpoint is inserted between neighbours whose metrics or R differ.
    """
    if not (zeta.is_focusing and xi.is_focusing):
        raise ValueError("path endpoints must be focusing")
    ts = _grid(samples)

    def at(t):
        if t == 0.0:
            return zeta
        if t == 1.0:
            return xi
        return zeta.combine(xi, 1.0 - t, t)

    out = [evaluate_sample(float(t), at(t), n_scan, tol) for t in ts]
    if refine:
        extra = []
        for a, b in zip(out, out[1:]):
            if (a.M_D, a.M_p, a.R) != (b.M_D, b.M_p, b.R):
                tm = 0.5 * (a.t + b.t)
                extra.append(evaluate_sample(tm, at(tm), n_scan, tol))
        out = sorted(out + extra, key=lambda s: s.t)
    return Path(out)


def _band(path: Path) -> int:
    return max(1, max(s.potential.fourier_arrays()[0] for s in path.samples))


def perturb_path(
    path: Path,
    magnitude: float = 0.2,
    seed: int = 0,
    max_tries: int = 8,
    n_scan: int = PATH_N_SCAN,
    tol: Tolerances = DEFAULT,
    K: Optional[int] = None,
) -> Path:
    """Random detours gamma(t) + sin(pi t) h with focusing h, accepted when (M_D, M_p) improves.

    Candidates are compared lexicographically on the path metrics (M_D first).
    Each accepted candidate becomes the new base path; the loop stops once the
    interior is simple or after ``max_tries`` draws. Endpoints are never touched,
    so a degenerate endpoint ends the search with status "endpoints_degenerate";
    the other outcomes are "simple", "improved" and "exhausted".
    """
    if path.simple:
        return Path(path.samples, "simple", 0, [path.key])
    rng = np.random.default_rng(seed)
    band = _band(path) if K is None else K
    best = path
    history = [path.key]
    improved = False
    tries = 0
    while tries < max_tries and not best.interior_simple:
        tries += 1
        h = random_focusing(rng, band, magnitude)
        samples = [best.samples[0]]
        for s in best.samples[1:-1]:
            q = s.potential.combine(h, 1.0, float(np.sin(np.pi * s.t)))
            samples.append(evaluate_sample(s.t, q, n_scan, tol))
        samples.append(best.samples[-1])
        cand = Path(samples)
        if cand.key < best.key or (cand.key == best.key and _bad_count(cand) < _bad_count(best)):
            best = cand
            improved = True
            history.append(best.key)
    if best.simple:
        status = "simple"
    elif best.interior_simple:
        status = "endpoints_degenerate"
    else:
        status = "improved" if improved else "exhausted"
    return Path(best.samples, status, tries, history)


def _bad_count(path: Path) -> int:
    return sum(1 for s in path.samples if not s.simple)
