"""Command-line interface: ``qpolar <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import degrees, qmeasures, stokes, unpolarized
from .channel import block_diagonalize
from .errors import InvalidState, OutsideRegion, ParseError, Unsupported
from .states import load_state, state_to_dict
from .su2 import min_overlap_search
from .verify import SUITES, format_results, run_suite

__all__ = ["DegreeReport", "analyze", "build_parser", "main"]

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
DEGREE_SLACK = 1e-12


@dataclass
class DegreeReport:
    """All degrees of one state plus Stokes moments and optimizer diagnostics."""

    degrees: dict[str, float]
    stokes_mean: list[float]
    stokes_variance: list[float]
    mean_photon_number: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, v in self.degrees.items():
            if not -DEGREE_SLACK <= v <= 1 + DEGREE_SLACK:
                raise ValueError(f"degree {name}={v} outside [0, 1]")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        rows = [("quantity", "value")]
        rows += [(k, f"{v:.12g}") for k, v in sorted(self.degrees.items())]
        return _csv(rows)


def analyze(state, pd_normalization: str = "raw") -> DegreeReport:
    bd = block_diagonalize(state)
    mom = stokes.moments(state)
    overlap = min_overlap_search(bd, normalize=pd_normalization == "purity")
    inf, s_star = degrees.chernoff_infimum(bd)
    return DegreeReport(
        degrees={
            "P_S": stokes.degree_stokes(state),
            "P_HSb": degrees.degree_hs(bd),
            "P_Bb": degrees.degree_bures(bd),
            "P_Cb": float(min(max(1.0 - inf, 0.0), 1.0)),
            "P_Q": qmeasures.degree_q(bd),
            "P_d": qmeasures.overlap_to_degree(overlap.overlap),
            "P_p": qmeasures.degree_p(bd),
        },
        stokes_mean=[float(x) for x in mom.vec],
        stokes_variance=[float(x) for x in mom.var],
        mean_photon_number=float(mom.s0),
        diagnostics={
            "pd_normalization": pd_normalization,
            "pd_min_overlap": overlap.overlap,
            "pd_angles": [float(a) for a in overlap.angles],
            "pd_evaluations": overlap.evaluations,
            "chernoff_infimum": inf,
            "chernoff_s": s_star,
        },
    )


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _g(x: float) -> str:
    return f"{x:.12g}"


# -- commands ----------------------------------------------------------------

def cmd_analyze(args) -> str:
    try:
        with open(args.state, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {args.state}: {exc.strerror}") from exc
    report = analyze(load_state(text), args.pd_normalization)
    return report.to_csv() if args.format == "csv" else report.to_json()


def cmd_maxcurve(args) -> str:
    if args.step <= 0 or args.stop < args.start or args.start < 0:
        raise ValueError("need 0 <= start <= stop and step > 0")
    grid = degrees.nbar_grid(args.start, args.stop, args.step)
    names = degrees.MEASURES + qmeasures.Q_MEASURES if args.measure == "all" else (args.measure,)
    points = []
    for m in names:
        if m in degrees.MEASURES:
            points += degrees.max_curve(m, grid)
        else:
            points += [p for p in qmeasures.max_curve_q(grid) if p.measure == m]
    if args.format == "json":
        return json.dumps([asdict(p) for p in points], sort_keys=True, indent=2) + "\n"
    return degrees.curve_to_csv(points)


def _cert_dict(state) -> dict:
    cert = unpolarized.is_stokes_unpolarized(state)
    return {"state": state_to_dict(state), "certified": cert.certified,
            "stokes_mean": [cert.sx, cert.sy, cert.sz], "variances": list(cert.variances)}


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(tok.replace(" ", "")) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParseError(f"cannot parse amplitudes {text!r}: {exc}") from exc


def _gen_states(args) -> tuple[list, list]:
    """Generated states and CSV rows ``(a0, a2, region, var_x, var_y, var_z)``."""
    n = args.manifold
    if n == 2 and args.half is None:
        if args.a is None:
            raise ValueError("two-photon generation needs --a (and optionally --theta)")
        states = [unpolarized.two_photon_family(args.a, args.theta)]
        region = "inside"
    elif n == 3 and args.half is None:
        if args.a0 is None or args.a2 is None:
            raise ValueError("three-photon generation needs --a0 and --a2")
        states = unpolarized.three_photon_solve(args.a0, args.a2, args.theta1)
        region = unpolarized.sail_region(args.a0, args.a2).status
    else:
        if args.half is None:
            raise ValueError(f"manifold {n} needs --half with {n // 2 + 1} amplitudes")
        states = [unpolarized.symmetric_family(n, _parse_complex_list(args.half),
                                               args.sign, args.branch)]
        region = "symmetric"
    rows = []
    for st in states:
        c = st.vector(n)
        cert = unpolarized.is_stokes_unpolarized(st)
        rows.append((_g(abs(c[0])), _g(abs(c[2])) if n >= 2 else "0", region,
                     *(_g(v) for v in cert.variances)))
    return states, rows


def cmd_unpolarized(args) -> str:
    header = ("a0", "a2", "region", "var_x", "var_y", "var_z")
    if args.action == "gen":
        states, rows = _gen_states(args)
        if args.format == "csv":
            return _csv([header, *rows])
        return json.dumps([_cert_dict(s) for s in states], sort_keys=True, indent=2) + "\n"
    if args.action == "sail":
        lines = unpolarized.sail_polylines(args.samples)
        if args.format == "json":
            doc = {k: v.tolist() for k, v in lines.items()}
            doc["vertices"] = [list(map(float, v)) for v in unpolarized.SAIL_VERTICES]
            return json.dumps(doc, sort_keys=True, indent=2) + "\n"
        rows = [("border", "a0", "a2")]
        for name, pts in lines.items():
            rows += [(name, _g(a), _g(b)) for a, b in pts]
        return _csv(rows)
    # variances: sampled three-photon states across the region
    rng = np.random.default_rng(args.seed)
    rows, docs = [header], []
    for _ in range(args.samples):
        a0, a2 = unpolarized.sample_sail_point(rng)
        theta1 = float(rng.uniform(0, 2 * np.pi))
        for st in unpolarized.three_photon_solve(a0, a2, theta1):
            cert = unpolarized.is_stokes_unpolarized(st)
            rows.append((_g(a0), _g(a2), "inside", *(_g(v) for v in cert.variances)))
            docs.append(_cert_dict(st))
    if args.format == "json":
        return json.dumps(docs, sort_keys=True, indent=2) + "\n"
    return _csv(rows)


def cmd_verify(args) -> tuple[str, int]:
    results = run_suite(args.suite, args.seed, args.samples)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    if args.format == "json":
        return json.dumps([asdict(r) for r in results], sort_keys=True, indent=2) + "\n", code
    return format_results(results), code


def cmd_coherent(args) -> str:
    cutoff = args.n if args.cutoff is None else args.cutoff
    if cutoff < args.n:
        raise ValueError("--cutoff must be at least --n")
    st = qmeasures.su2_coherent(qmeasures.CoherentParams(args.n, args.theta, args.phi))
    if args.format == "csv":
        grid = qmeasures.sphere_grid(cutoff)
        q = qmeasures.q_function(st, grid.theta, grid.phi)
        rows = [("theta", "phi", "weight", "q")]
        rows += [tuple(map(_g, r)) for r in zip(grid.theta, grid.phi, grid.weights, q)]
        return _csv(rows)
    doc = {"state": state_to_dict(st), "P_Q": qmeasures.degree_q(st),
           "D_Q": qmeasures.dispersion_q(st)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- parser ------------------------------------------------------------------

def _common(suppress: bool) -> argparse.ArgumentParser:
    """Global flags, accepted before or after the command name."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    p.add_argument("--pd-normalization", choices=("raw", "purity"), default=d("raw"),
                   help="P_d variant (default raw)")
    p.add_argument("--out", default=d(None), help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=d(None),
                   help="output format (command-specific default)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpolar", parents=[_common(False)],
                                     description="Degrees of polarization of two-mode quantum fields.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common(True)]

    p = sub.add_parser("analyze", parents=common, help="all degrees of a state file")
    p.add_argument("state", help="state JSON file")

    p = sub.add_parser("maxcurve", parents=common, help="maximal degree vs mean photon number")
    p.add_argument("--measure", default="all",
                   choices=("all",) + degrees.MEASURES + qmeasures.Q_MEASURES)
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.01)

    p = sub.add_parser("unpolarized", parents=common, help="Stokes-unpolarized families")
    p.add_argument("action", choices=("gen", "sail", "variances"))
    p.add_argument("--manifold", type=int, default=2)
    p.add_argument("--a", type=float, help="two-photon amplitude")
    p.add_argument("--theta", type=float, default=0.0, help="two-photon phase")
    p.add_argument("--a0", type=float)
    p.add_argument("--a2", type=float)
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--half", help="comma-separated c_0..c_{N//2} (Python complex syntax)")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--branch", type=int, choices=(0, 1), default=0)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("verify", parents=common, help="run self-check suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("coherent", parents=common, help="SU(2) coherent state and its Q function")
    p.add_argument("--n", type=int, required=True, help="photon number")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--cutoff", type=int, help="quadrature cutoff (default n)")
    return parser


_DEFAULT_FORMAT = {"analyze": "json", "maxcurve": "csv", "unpolarized gen": "json",
                   "unpolarized sail": "csv", "unpolarized variances": "csv",
                   "verify": "text", "coherent": "json"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        key = f"unpolarized {args.action}" if args.command == "unpolarized" else args.command
        args.format = _DEFAULT_FORMAT[key]
    code = EXIT_OK
    try:
        if args.command == "verify":
            text, code = cmd_verify(args)
        else:
            text = {"analyze": cmd_analyze, "maxcurve": cmd_maxcurve,
                    "unpolarized": cmd_unpolarized, "coherent": cmd_coherent}[args.command](args)
    except (ParseError, InvalidState, OutsideRegion, Unsupported, ValueError) as exc:
        print(f"qpolar: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qpolar: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
