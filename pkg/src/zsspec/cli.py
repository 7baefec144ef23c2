"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 counting-layout failure,
3 numerical failure (or a failed validation), 4 violated precondition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .characteristic import central_disk, counting_disk
from .classify import SpectrumReport, full_spectrum
from .config import DEFAULT, Tolerances
from .discriminant import DIRICHLET, PERIODIC, discriminant_report
from .errors import GeometricMultiplicityTwo, LayoutError, NotAnEigenvalue, NoValidR, SpectralError
from .gradients import fd_check, grad_chi_D, grad_delta, grad_floquet_entries
from .oracle import compare, shifted_spectrum
from .pathfinder import DEFAULT_SAMPLES, PATH_N_SCAN, perturb_path, straight_path
from .potential import Potential, random_focusing
from .transfer import fundamental_matrix

EXIT_OK, EXIT_INPUT, EXIT_LAYOUT, EXIT_NUMERIC, EXIT_PRECONDITION = 0, 1, 2, 3, 4
GRADCHECK_LIMIT = 1e-4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Config:
    tol: Tolerances = DEFAULT
    fmt: str = "json"
    n_scan: int = 8

    @classmethod
    def from_args(cls, args) -> "Config":
        overrides = {f.name: getattr(args, f"tol_{f.name}", None) for f in fields(Tolerances)}
        try:
            tol = DEFAULT.with_overrides(**overrides)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return cls(tol, args.format, args.n_scan)


# -- serialisation helpers -----------------------------------------------------------


def complex_str(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_complex(text: str) -> complex:
    try:
        re, im = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected RE,IM but got {text!r}") from exc
    return complex(re, im)


def load_potential(path: str) -> Potential:
    try:
        data = json.loads(Path(path).read_text())
        return Potential.from_json(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read potential from {path}: {exc}") from exc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dump_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------


SPECTRUM_COLUMNS = ["value", "m_alg", "m_geom", "parity", "is_real", "partner", "disk"]


def spectrum_csv(report: SpectrumReport) -> str:
    rows = [
        [complex_str(r.value), r.m_alg, r.m_geom, r.parity, r.is_real, "" if r.conjugate_partner is None else r.conjugate_partner, r.disk]
        for r in report.records
    ]
    return dump_csv(SPECTRUM_COLUMNS, rows)


def cmd_spectrum(args, cfg: Config) -> int:
    p = load_potential(args.potential)
    report = full_spectrum(p, R=args.R, n_scan=cfg.n_scan, tol=cfg.tol)
    _emit(spectrum_csv(report) if cfg.fmt == "csv" else dump_json(report.to_json()), args.out)
    return EXIT_OK


def cmd_gradcheck(args, cfg: Config) -> int:
    p = load_potential(args.potential)
    if args.lam is None:
        raise InputError("--lambda is required")
    lam = parse_complex(args.lam)
    rng = np.random.default_rng(args.seed)
    directions = [random_focusing(rng, max(1, args.band), 1.0) for _ in range(args.directions)]

    def entry(i):
        return lambda q: complex(fundamental_matrix(q, lam, with_dlambda=False, tol=cfg.tol).endpoint.flat[i])

    if args.which == "delta":
        targets = [("delta", grad_delta(p, lam, cfg.tol), lambda q: entry(0)(q) + entry(3)(q))]
    elif args.which == "chiD":

        def chi_d(q):
            E = fundamental_matrix(q, lam, with_dlambda=False, tol=cfg.tol).endpoint
            return complex((E[1, 1] + E[1, 0] - E[0, 1] - E[0, 0]) / 2j)

        targets = [("chiD", grad_chi_D(p, lam, cfg.tol), chi_d)]
    else:
        grads = grad_floquet_entries(p, lam, cfg.tol)
        targets = [(f"m{i + 1}", g, entry(i)) for i, g in enumerate(grads)]

    rows = []
    for name, g, func in targets:
        for j, err in enumerate(fd_check(g, func, p, directions)):
            rows.append({"quantity": name, "direction": j, "rel_error": err})
    ok = all(r["rel_error"] < GRADCHECK_LIMIT for r in rows)
    if cfg.fmt == "csv":
        text = dump_csv(["quantity", "direction", "rel_error"], [[r["quantity"], r["direction"], f"{r['rel_error']:.6e}"] for r in rows])
    else:
        payload = {"lambda": [lam.real, lam.imag], "which": args.which, "seed": args.seed, "limit": GRADCHECK_LIMIT, "ok": ok, "checks": rows}
        if args.with_gradient:
            payload["gradients"] = {name: g.to_json() for name, g, _ in targets}
        text = dump_json(payload)
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_discriminant(args, cfg: Config) -> int:
    p = load_potential(args.potential)
    R = args.R if args.R is not None else 0
    rep = discriminant_report(p, R, args.which, cfg.tol)
    if cfg.fmt == "csv":
        d = rep.discriminant
        text = dump_csv(["R", "which", "discriminant", "indicator"], [[R, args.which, complex_str(d), f"{rep.indicator:.17g}"]])
    else:
        text = dump_json(rep.to_json())
    _emit(text, args.out)
    return EXIT_OK


def _scanned(value: complex, R: int, n_scan: int) -> bool:
    if central_disk(R).contains(value):
        return True
    return any(counting_disk(n).contains(value) for n in range(-n_scan, n_scan + 1) if abs(n) > R)


def cmd_oracle_compare(args, cfg: Config) -> int:
    if args.potential:
        p = load_potential(args.potential)
        if p.representation != "constant":
            raise InputError("oracle-compare needs a constant potential")
        a, k = p.a, p.k
    else:
        if args.a is None:
            raise InputError("give --potential or --a RE,IM")
        a, k = parse_complex(args.a), args.k
        p = Potential.constant(a, k)
    report = full_spectrum(p, R=args.R, n_scan=cfg.n_scan, tol=cfg.tol)
    oracle = shifted_spectrum(a, k, cfg.n_scan + abs(k) + 2)
    expected = [r for r in oracle.records if _scanned(r.value, report.R, cfg.n_scan)]
    diffs = compare(report.records, expected, cfg.tol.match)
    ok = all(d.ok() for d in diffs)
    if cfg.fmt == "csv":
        rows = []
        for d in diffs:
            o = d.oracle
            rows.append(
                [
                    d.parity,
                    "" if o is None else complex_str(o.value),
                    "" if d.found_value is None else complex_str(d.found_value),
                    "" if o is None else o.m_alg,
                    "" if d.found_m_alg is None else d.found_m_alg,
                    "" if math.isinf(d.value_error) else f"{d.value_error:.3e}",
                    d.ok(),
                ]
            )
        text = dump_csv(["parity", "oracle", "found", "oracle_m_alg", "found_m_alg", "value_error", "ok"], rows)
    else:
        text = dump_json({"a": [a.real, a.imag], "k": k, "R": report.R, "ok": ok, "diffs": [d.to_json() for d in diffs]})
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_deform(args, cfg: Config) -> int:
    zeta = load_potential(args.potential)
    if not args.end:
        raise InputError("--end PATH is required")
    xi = load_potential(args.end)
    n_scan = args.n_scan if args.n_scan_given else PATH_N_SCAN
    path = straight_path(zeta, xi, args.samples, n_scan, cfg.tol)
    final = perturb_path(path, args.magnitude, args.seed, args.max_tries, n_scan, cfg.tol)
    payload = {"straight": {"M_D": path.M_D, "M_p": path.M_p}, "deformed": final.to_json(), "seed": args.seed}
    if cfg.fmt == "csv":
        _emit(dump_csv(["t", "M_D", "M_p", "standard", "R"], final.csv_rows()), args.out)
    else:
        _emit(dump_json(payload), args.out)
    if args.csv:
        Path(args.csv).write_text(dump_csv(["t", "M_D", "M_p", "standard", "R"], final.csv_rows()))
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", help="potential JSON file")
    p.add_argument("--R", type=int, default=None, help="radius index of B_R (default: smallest valid)")
    p.add_argument("--n-scan", type=int, default=None, help="outermost counting disk index")
    p.add_argument("--lambda", dest="lam", help="spectral parameter RE,IM")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    for f in fields(Tolerances):
        p.add_argument(f"--tol-{f.name.replace('_', '-')}", dest=f"tol_{f.name}", type=type(f.default), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zsspec", description="Spectra of Zakharov-Shabat operators on the circle")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="periodic and Dirichlet spectrum with multiplicities")
    _common(s)
    s.set_defaults(func=cmd_spectrum)

    g = sub.add_parser("gradcheck", help="finite-difference validation of L2-gradients")
    _common(g)
    g.add_argument("--kind", dest="which", choices=("delta", "chiD", "floquet"), default="delta")
    g.add_argument("--directions", type=int, default=8)
    g.add_argument("--band", type=int, default=3, help="Fourier band of the random directions")
    g.add_argument("--with-gradient", action="store_true", help="include the gradient fields in the JSON")
    g.set_defaults(func=cmd_gradcheck)

    d = sub.add_parser("discriminant", help="Sylvester discriminant of Q_{p,R}")
    _common(d)
    d.add_argument("--kind", dest="which", choices=(PERIODIC, DIRICHLET), default=PERIODIC)
    d.set_defaults(func=cmd_discriminant)

    o = sub.add_parser("oracle-compare", help="numerical spectrum versus the constant-potential closed form")
    _common(o)
    o.add_argument("--a", help="constant amplitude RE,IM (alternative to --potential)")
    o.add_argument("--k", type=int, default=0, help="gauge index")
    o.set_defaults(func=cmd_oracle_compare)

    f = sub.add_parser("deform", help="straight path and random detours between two potentials")
    _common(f)
    f.add_argument("--end", help="potential JSON file of the path end")
    f.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    f.add_argument("--magnitude", type=float, default=0.2)
    f.add_argument("--max-tries", type=int, default=8)
    f.add_argument("--csv", help="also write the per-sample CSV here")
    f.set_defaults(func=cmd_deform)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.n_scan_given = args.n_scan is not None
    if args.n_scan is None:
        args.n_scan = 8
    if args.command != "oracle-compare" and not args.potential:
        parser.error("--potential is required")
    try:
        cfg = Config.from_args(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"zsspec: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GeometricMultiplicityTwo, NotAnEigenvalue) as exc:
        print(f"zsspec: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (LayoutError, NoValidR) as exc:
        print(f"zsspec: layout: {exc}", file=sys.stderr)
        return EXIT_LAYOUT
    except SpectralError as exc:
        print(f"zsspec: numerical: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
