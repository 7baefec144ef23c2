"""Spectra of a few constant and random focusing potentials, with the oracle cross-check."""

import argparse

import numpy as np

from zsspec.classify import full_spectrum
from zsspec.discriminant import discriminant_report
from zsspec.oracle import compare, shifted_spectrum
from zsspec.potential import Potential, random_focusing


def show(name: str, p: Potential, n_scan: int) -> None:
    rep = full_spectrum(p, n_scan=n_scan)
    disc = discriminant_report(p, rep.R)
    print(f"\n{name}: R={rep.R}  verdicts={rep.verdicts}  indicator={disc.indicator:.3e}")
    for r in rep.periodic(ball_only=True):
        print(f"  {r.parity:6s} {r.value.real:+.9f}{r.value.imag:+.9f}j  m_alg={r.m_alg} m_geom={r.m_geom}")
    if p.representation == "constant":
        oracle = shifted_spectrum(p.a, p.k, n_scan + abs(p.k) + 2)
        ball = [o for o in oracle.records if abs(o.value) < rep.R * np.pi + np.pi / 4]
        diffs = compare(rep.records, ball)
        matched = [d for d in diffs if d.oracle is not None]
        print(f"  closed form: {sum(d.ok() for d in matched)}/{len(matched)} ball records agree")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-scan", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    show("zero", Potential.zero(), args.n_scan)
    for a in (1.0, 3.0, np.pi, 4j):
        show(f"constant a={a}", Potential.constant(a), args.n_scan)
    show("random focusing K=2", random_focusing(np.random.default_rng(args.seed), 2, 0.5), args.n_scan)


if __name__ == "__main__":
    main()
