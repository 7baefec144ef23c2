"""Multiplicities, spectrum reports and the classification predicates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .characteristic import CharKind, Disk
from .config import DEFAULT, Tolerances
from .errors import LayoutError, NotAnEigenvalue
from .oracle import ANTI, DIRICHLET, PROPER
from .potential import Potential
from .rootfinder import LayoutReport, cluster_tolerance, layout_disks, localize_spectrum, roots_in_disk, select_R
from .transfer import fundamental_matrix, transfer_batch

PARITY_KIND = {PROPER: CharKind.CHI_P_PLUS, ANTI: CharKind.CHI_P_MINUS, DIRICHLET: CharKind.CHI_D}


@dataclass
class EigenvalueRecord:
    value: complex
    m_alg: int
    m_geom: int
    parity: str
    is_real: bool
    conjugate_partner: Optional[int] = None
    disk: str = ""
    residual: float = 0.0

    @property
    def periodic(self) -> bool:
        return self.parity != DIRICHLET

    @property
    def non_degenerate(self) -> bool:
        """Geometric multiplicity two and algebraic multiplicity exactly two."""
        return self.periodic and self.m_geom == 2 and self.m_alg == 2

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "m_alg": self.m_alg,
            "m_geom": self.m_geom,
            "parity": self.parity,
            "is_real": self.is_real,
            "partner": self.conjugate_partner,
            "disk": self.disk,
            "residual": self.residual,
        }

    @classmethod
    def from_json(cls, d: dict) -> "EigenvalueRecord":
        return cls(
            complex(*d["value"]),
            int(d["m_alg"]),
            int(d["m_geom"]),
            d["parity"],
            bool(d["is_real"]),
            d.get("partner"),
            d.get("disk", ""),
            float(d.get("residual", 0.0)),
        )


@dataclass
class Verdict:
    value: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.value


@dataclass
class SpectrumReport:
    R: int
    n_scan: int
    records: list[EigenvalueRecord]
    layout: Optional[LayoutReport] = None
    verdicts: dict = field(default_factory=dict)
    focusing: bool = True

    @property
    def ball_label(self) -> str:
        return f"B_{self.R}"

    def periodic(self, ball_only: bool = False) -> list[EigenvalueRecord]:
        return [r for r in self.records if r.periodic and (not ball_only or r.disk == self.ball_label)]

    def dirichlet(self, ball_only: bool = False) -> list[EigenvalueRecord]:
        return [r for r in self.records if not r.periodic and (not ball_only or r.disk == self.ball_label)]

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "n_scan": self.n_scan,
            "focusing": self.focusing,
            "records": [r.to_json() for r in self.records],
            "verdicts": dict(self.verdicts),
            "layout": [] if self.layout is None else self.layout.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "SpectrumReport":
        return cls(
            int(d["R"]),
            int(d["n_scan"]),
            [EigenvalueRecord.from_json(r) for r in d["records"]],
            None,
            dict(d.get("verdicts", {})),
            bool(d.get("focusing", True)),
        )


def _sign(parity: str) -> int:
    if parity == PROPER:
        return 1
    if parity == ANTI:
        return -1
    raise ValueError("geometric multiplicity is defined for periodic parities only")


def _geom_from_matrix(M: np.ndarray, parity: str, tol: Tolerances, threshold: Optional[float] = None) -> int:
    dev = np.max(np.abs(M - _sign(parity) * np.eye(2)))
    return 2 if dev < (tol.geometric if threshold is None else threshold) else 1


def _cluster_geometric_threshold(dM: np.ndarray, m_alg: int, center: complex, radius: float, tol: Tolerances) -> float:
    """Geometric tolerance at the resolution the cluster was formed with.

    A k-fold cluster only locates its roots to within the cluster tolerance, so
    M at the cluster mean may sit up to |dM/dlam| times that distance from +-Id.
    """
    if m_alg < 2:
        return tol.geometric
    return max(tol.geometric, 2.0 * float(np.max(np.abs(dM))) * cluster_tolerance(m_alg, center, radius, tol))


def geometric_multiplicity(p: Potential, lam: complex, parity: str, tol: Tolerances = DEFAULT) -> int:
    """2 iff the Floquet matrix at lam equals +Id (proper) or -Id (anti), else 1."""
    s = _sign(parity)
    M = fundamental_matrix(p, lam, with_dlambda=False, tol=tol).endpoint
    residual = abs(M[0, 0] + M[1, 1] - 2 * s)
    if residual > tol.residual * max(1.0, float(np.max(np.abs(M)))):
        raise NotAnEigenvalue(f"|Delta -+ 2| = {residual:.3e} at {lam}")
    return _geom_from_matrix(M, parity, tol)


def is_real_value(lam: complex, tol: Tolerances = DEFAULT) -> bool:
    return abs(lam.imag) < tol.reality * (1 + abs(lam))


def _pair_conjugates(records: list[EigenvalueRecord], tol: Tolerances) -> None:
    for i, r in enumerate(records):
        if not r.periodic or r.conjugate_partner is not None:
            continue
        if r.is_real:
            r.conjugate_partner = i
            continue
        target = r.value.conjugate()
        best, dist = None, tol.reality * 10 * (1 + abs(r.value))
        for j, q in enumerate(records):
            if j != i and q.parity == r.parity and q.conjugate_partner is None and abs(q.value - target) < dist:
                best, dist = j, abs(q.value - target)
        if best is not None:
            r.conjugate_partner = best
            records[best].conjugate_partner = i


def full_spectrum(
    p: Potential,
    R: Optional[int] = None,
    n_scan: int = 8,
    tol: Tolerances = DEFAULT,
    layout: Optional[LayoutReport] = None,
    ball_only: bool = False,
) -> SpectrumReport:
    """Periodic and Dirichlet eigenvalues in B_R and in D_n, R < |n| <= n_scan.

    With ``ball_only`` the layout is still checked on every disk but eigenvalues
    are only extracted in B_R (the verdicts then refer to B_R alone).
    """
    if R is None:
        R = select_R(p, n_scan, tol)
    if layout is None:
        layout = localize_spectrum(p, R, n_scan, tol)
    if not layout.passed:
        raise LayoutError(f"counting layout fails at R={R}")
    found = []
    disks = layout_disks(R, n_scan)
    for label, disk, _, _ in disks[:1] if ball_only else disks:
        for parity, kind in PARITY_KIND.items():
            for c in roots_in_disk(p, disk, kind, tol):
                found.append((label, parity, c, disk.radius))
    periodic_idx = [i for i, f in enumerate(found) if f[1] != DIRICHLET]
    geoms = {}
    if periodic_idx:
        M, dM = transfer_batch(p, [found[i][2].value for i in periodic_idx], tol=tol)
        for j, i in enumerate(periodic_idx):
            _, parity, c, radius = found[i]
            threshold = _cluster_geometric_threshold(dM[j], c.multiplicity, c.value, radius, tol)
            geoms[i] = _geom_from_matrix(M[j], parity, tol, threshold)
    records = [
        EigenvalueRecord(
            c.value,
            c.multiplicity,
            geoms.get(i, 1),
            parity,
            is_real_value(c.value, tol),
            None,
            label,
            c.residual,
        )
        for i, (label, parity, c, _) in enumerate(found)
    ]
    records.sort(key=lambda r: (r.parity == DIRICHLET, round(r.value.real, 9), round(r.value.imag, 9)))
    report = SpectrumReport(R, n_scan, records, layout, focusing=p.is_focusing)
    if p.is_focusing:
        _pair_conjugates(records, tol)
    report.verdicts = {
        "standard": bool(is_standard(report)),
        "r_simple": is_r_simple(report),
        "dirichlet_simple": dirichlet_simple(report),
    }
    return report


def is_standard(report: SpectrumReport) -> Verdict:
    """Real periodic eigenvalues double, non-real ones simple, over all scanned disks."""
    reasons = []
    for r in report.periodic():
        if r.is_real and r.m_alg != 2:
            reasons.append(f"real eigenvalue {r.value.real:.9g} has algebraic multiplicity {r.m_alg}")
        if not r.is_real and r.m_alg != 1:
            reasons.append(f"non-real eigenvalue {r.value:.9g} has algebraic multiplicity {r.m_alg}")
    return Verdict(not reasons, reasons)


def is_r_simple(report: SpectrumReport) -> bool:
    if report.layout is not None and not report.layout.passed:
        return False
    return all(r.m_alg == 1 for r in report.periodic(ball_only=True))


def dirichlet_simple(report: SpectrumReport) -> bool:
    return all(r.m_alg == 1 for r in report.dirichlet())


def ball_disk(report: SpectrumReport) -> Disk:
    from .characteristic import central_disk

    return central_disk(report.R)
