"""Command-line front end: every command emits a CheckReport.

Exit status: 0 all checks pass, 1 some check fails, 2 invalid input,
3 refused by a scale guard.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, asdict
from pathlib import Path

from . import cohomology as coh
from . import suites
from .charsum import jacobi_sum_bruteforce
from .errors import InvalidInput, TooLarge
from .ffield import make_field
from .hermitian import HermitianDatum, classify_hermitian, epsilon_of
from .localmodel import MAX_CANDIDATE_VECTORS
from .report import CheckReport, run_checks

OUTPUT_DIR_ENV = "NEARBYCYCLES_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_TOO_LARGE = 0, 1, 2, 3
MAX_EXTENSION_DEGREE = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int | None = None
    n: int | None = None
    k: int = 1
    m: int | None = None
    form: str | None = None
    suite: str = "all"
    fmt: str = "text"
    output: str | None = None
    jobs: int = 1

    def params(self) -> dict:
        keep = {"jacobi": ("p", "k", "m"), "quadric": ("p", "n", "k", "form"), "localmodel": ("p", "n", "k", "form"),
                "nearby-cycles": ("p", "n", "k", "form"), "verify": ("suite",)}[self.command]
        d = asdict(self)
        return {key: d[key] for key in keep}

    def validate(self):
        if self.command != "verify":
            if self.p is None:
                raise InvalidInput("--p is required")
            make_field(self.p)  # NotPrime / EvenCharacteristic
        if self.command in ("quadric", "localmodel", "nearby-cycles"):
            if self.n is None:
                raise InvalidInput("--n is required")
            if self.n < 2:
                raise InvalidInput("n must be >= 2")
        if self.k < 1:
            raise InvalidInput("k must be >= 1")
        if self.m is not None and self.m < 1:
            raise InvalidInput("m must be >= 1")
        if self.jobs < 1:
            raise InvalidInput("--jobs must be >= 1")
        if self.command in ("localmodel", "nearby-cycles") and self.k > MAX_EXTENSION_DEGREE:
            raise TooLarge(f"k = {self.k} exceeds {MAX_EXTENSION_DEGREE} for enumeration")

    def datum(self) -> HermitianDatum:
        return suites.parse_form(self.p, self.n, self.form)


def cmd_jacobi(cfg: RunConfig) -> CheckReport:
    q = cfg.p**cfg.k
    ms = (cfg.m,) if cfg.m is not None else suites.JACOBI_M
    checks = suites.jacobi_checks((q,), ms, extras=cfg.m is None)
    report = CheckReport("jacobi", cfg.params(), run_checks(checks, cfg.jobs))
    F = suites.field_of_order(q)
    report.data["values"] = {m: jacobi_sum_bruteforce(F, m) for m in ms}
    return report


def cmd_quadric(cfg: RunConfig) -> CheckReport:
    datum = cfg.datum()
    checks = suites.quadric_checks(cfg.p, cfg.n, cfg.k, datum)
    report = CheckReport("quadric", cfg.params(), run_checks(checks, cfg.jobs))
    report.data["count"] = report.checks[0].actual
    return report


def cmd_localmodel(cfg: RunConfig) -> CheckReport:
    datum = cfg.datum()
    checks = suites.localmodel_checks(datum, cfg.k)
    report = CheckReport("localmodel", cfg.params(), run_checks(checks, cfg.jobs))
    amb, pts = suites._fiber(datum.p, cfg.k, datum.diag, datum.delta, datum.delta_slot)
    report.data["points"] = len(pts)
    report.data["classification"] = classify_hermitian(datum)
    if datum.n >= 3:
        st = suites._strata(datum.p, cfg.k, datum.diag, datum.delta, datum.delta_slot)
        report.data["strata"] = {"z1": st.z1_count, "z2": st.z2_count, "q": st.q_count,
                                 "off": st.off_strata_count, "total": st.total}
    return report


def cmd_nearby_cycles(cfg: RunConfig) -> CheckReport:
    datum = cfg.datum()
    n, p, eps = datum.n, datum.p, epsilon_of(datum)
    checks = suites.theorem_checks(n, eps, p)
    if n >= 3:
        checks = suites.spectral_checks(n, eps, p) + checks
    report = CheckReport("nearby-cycles", cfg.params(), run_checks(checks, cfg.jobs))
    stalks = coh.nearby_cycles_stalks(n, eps, p)
    report.data["epsilon"] = eps
    report.data["stalks"] = {d: [w.eigenvalue(p) for w in ws] for d, ws in stalks.items()}
    report.data["trace"] = coh.stalk_trace(stalks, p)
    if n >= 3:
        e1k = coh.build_E1_K(n, eps, p)
        e1 = coh.build_E1_Z1(n, eps, p)
        e2 = coh.compute_E2_Z1(e1).page
        report.data["pages"] = {pg.name: pg.to_json() for pg in (e1k, e1, e2)}
        report.data["pages_text"] = "".join(pg.render_text() for pg in (e1k, e1, e2))
    # the Lefschetz comparison is informational and needs an enumeration
    if _quick_enumeration(n, p**cfg.k):
        report.flags = run_checks(suites.lefschetz_checks(datum, cfg.k))
    return report


def _quick_enumeration(n: int, q: int) -> bool:
    """Instances whose special fiber enumerates in a few seconds."""
    return q ** (2 * n) <= MAX_CANDIDATE_VECTORS and (n <= 3 or (n == 4 and q == 3))


def cmd_verify(cfg: RunConfig) -> CheckReport:
    return CheckReport("verify", cfg.params(), run_checks(suites.suite_checks(cfg.suite), cfg.jobs))


COMMANDS = {
    "jacobi": cmd_jacobi,
    "quadric": cmd_quadric,
    "localmodel": cmd_localmodel,
    "nearby-cycles": cmd_nearby_cycles,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nearbycycles", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    common.add_argument("--output", help=f"report file (default: stdout, or ${OUTPUT_DIR_ENV}/<command>.<format>)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    sub = parser.add_subparsers(dest="command", required=True)

    j = sub.add_parser("jacobi", parents=[common], help="Jacobi sums: oracle, closed form, recursion")
    j.add_argument("--p", type=int, required=True)
    j.add_argument("--k", type=int, default=1, help="field F_{p^k}")
    j.add_argument("--m", type=int, help="single m (default: 1..4)")

    for name, text in (("quadric", "diagonal quadric point counts"),
                       ("localmodel", "special-fiber enumeration and blow-up strata"),
                       ("nearby-cycles", "spectral pages, stalks and traces")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--p", type=int, required=True)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--k", type=int, default=1)
        s.add_argument("--form", default="split", help="split, nonsplit, or comma-separated diagonal residues")

    v = sub.add_parser("verify", parents=[common], help="run acceptance grids")
    v.add_argument("--suite", choices=("all",) + suites.SUITES, default="all")
    return parser


def _destination(cfg: RunConfig) -> Path | None:
    if cfg.output:
        return Path(cfg.output)
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        return Path(outdir) / f"{cfg.command}.{cfg.fmt}"
    return None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        p=getattr(args, "p", None),
        n=getattr(args, "n", None),
        k=getattr(args, "k", 1),
        m=getattr(args, "m", None),
        form=getattr(args, "form", None),
        suite=getattr(args, "suite", "all"),
        fmt=args.fmt,
        output=args.output,
        jobs=args.jobs,
    )
    try:
        cfg.validate()
        report = COMMANDS[cfg.command](cfg)
    except InvalidInput as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    text = report.render(cfg.fmt)
    dest = _destination(cfg)
    if dest is not None:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
        print(f"report written to {dest}", file=sys.stderr)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
