#!/usr/bin/env python3
"""
Billiard Topology - lower bounds on billiard trajectories in convex bodies,
checked against numerically found critical configurations.

Subcommands:
    bounds          lower-bound table for (m, n)
    ring            basis and multiplication table of a cohomology ring
    solve-closed    closed trajectories from a boundary point back to itself
    solve-periodic  n-periodic trajectories
    sphere-oracle   closed-form spectrum on the round sphere
    verify          run an experiment spec and compare observed counts with bounds

Exit codes: 0 pass, 1 solver failure, 2 bound violation, 3 configuration error.
"""

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

import cohomology
import sphere_oracle
from billiard_errors import BadClause, BadInput, BilliardError, ConfigError, Unsupported
from billiard_solver import CriticalOrbit, SolveReport, SolverSettings, solve_closed, solve_periodic
from body_presets import resolve_body
from configuration import Configuration, closed_string, cyclic, format_coordinate
from convex_body import ConvexBody, surface_project

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_BOUND_VIOLATION = 2
EXIT_CONFIG_ERROR = 3

CONFIG_ERRORS = (ConfigError, BadInput, BadClause, Unsupported)


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INFO = "INFO"


VERDICT_MARKERS = {Verdict.PASS: "✅", Verdict.FAIL: "❌", Verdict.INFO: "ℹ️"}


@dataclass
class ExperimentSpec:
    """One body, one trajectory kind, a range of n"""
    body: str
    kind: cohomology.TrajectoryKind
    n_values: List[int]
    settings: SolverSettings = field(default_factory=SolverSettings)
    anchor: Optional[List[float]] = None
    seed: int = 0
    out_dir: Optional[str] = None
    dump_trajectories: bool = False
    name: str = "experiment"

    def __post_init__(self):
        if not self.n_values:
            raise ConfigError("n_values must not be empty")
        if any(int(n) < 1 for n in self.n_values):
            raise ConfigError(f"every n must be positive, got {self.n_values}")

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'body': self.body,
            'kind': self.kind.value,
            'n_values': list(self.n_values),
            'anchor': self.anchor,
            'seed': self.seed,
            'out_dir': self.out_dir,
            'dump_trajectories': self.dump_trajectories,
            'settings': self.settings.to_dict(),
        }

    @staticmethod
    def from_dict(data: dict) -> 'ExperimentSpec':
        try:
            kind = cohomology.TrajectoryKind(data['kind'])
            body = str(data['body'])
            n_values = [int(n) for n in data['n_values']]
        except (KeyError, ValueError, TypeError) as e:
            raise ConfigError(f"bad experiment spec: {e}") from e
        return ExperimentSpec(
            body=body,
            kind=kind,
            n_values=n_values,
            settings=SolverSettings.from_dict(data.get('settings', {})),
            anchor=data.get('anchor'),
            seed=int(data.get('seed', 0)),
            out_dir=data.get('out_dir'),
            dump_trajectories=bool(data.get('dump_trajectories', False)),
            name=data.get('name', "experiment"),
        )


def load_experiment(path: str) -> ExperimentSpec:
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read experiment spec {path}: {e}") from e
    return ExperimentSpec.from_dict(data)


@dataclass
class VerdictRow:
    body: str
    kind: str
    m: int
    n: int
    bound: Optional[int]
    clause: Optional[str]
    observed_isolated_orbits: int
    degenerate_families: int
    distinct_critical_orbits: int
    all_morse: bool
    verdict: Verdict
    note: str = ""

    def to_dict(self) -> dict:
        return {
            'body': self.body,
            'kind': self.kind,
            'm': self.m,
            'n': self.n,
            'bound': self.bound,
            'clause': self.clause,
            'observed_isolated_orbits': self.observed_isolated_orbits,
            'degenerate_families': self.degenerate_families,
            'distinct_critical_orbits': self.distinct_critical_orbits,
            'all_morse': self.all_morse,
            'verdict': self.verdict.value,
            'note': self.note,
        }


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def write_json(path: str, data) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    return path


def write_rows_csv(path: str, rows: Sequence[dict]) -> str:
    """Rows share the keys of the first row, in that order"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', newline='') as f:
        if rows:
            writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return path


def _csv_cell(value):
    if isinstance(value, float):
        return format_coordinate(value)
    if value is None:
        return ""
    return value


def write_report(out_dir: Optional[str], stem: str, fmt: str, data: dict, rows: Sequence[dict]) -> Optional[str]:
    if out_dir is None:
        return None
    if fmt == "csv":
        return write_rows_csv(os.path.join(out_dir, f"{stem}.csv"), rows)
    return write_json(os.path.join(out_dir, f"{stem}.json"), data)


# ---------------------------------------------------------------------------
# Trajectory dumps
# ---------------------------------------------------------------------------

DUMP_ANCHOR_LABEL = "A"


def _dump_header(dim: int) -> List[str]:
    return ["row_type", "index", "label_from", "label_to"] + [f"x{i}" for i in range(dim)]


def emit_trajectory_dump(orbit: Union[CriticalOrbit, Configuration], path: str) -> str:
    """CSV of bounce points and the segment list joining them

    Row types: 'anchor' (closed strings only), 'point', 'segment'. Segment rows
    name their endpoints by point index, or 'A' for the anchor.
    """
    c = orbit.representative if isinstance(orbit, CriticalOrbit) else orbit
    dim = c.body.ambient_dim
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_dump_header(dim))
        if c.is_closed_string:
            writer.writerow(["anchor", "", "", ""] + [format_coordinate(v) for v in c.anchor])
        for i, p in enumerate(c.points):
            writer.writerow(["point", i, "", ""] + [format_coordinate(v) for v in p])
        for s, (a, b) in enumerate(c.edges()):
            label_a = DUMP_ANCHOR_LABEL if a is None else a
            label_b = DUMP_ANCHOR_LABEL if b is None else b
            writer.writerow(["segment", s, label_a, label_b] + [""] * dim)
    return path


def load_trajectory_dump(path: str, body: ConvexBody) -> Configuration:
    """Read back a dump written by emit_trajectory_dump"""
    anchor = None
    points: List[Tuple[int, List[float]]] = []
    try:
        with open(path, 'r', newline='') as f:
            reader = csv.DictReader(f)
            coords = [name for name in (reader.fieldnames or []) if name.startswith("x")]
            for row in reader:
                if row['row_type'] == "anchor":
                    anchor = [float(row[name]) for name in coords]
                elif row['row_type'] == "point":
                    points.append((int(row['index']), [float(row[name]) for name in coords]))
    except (OSError, KeyError, ValueError) as e:
        raise ConfigError(f"cannot read trajectory dump {path}: {e}") from e
    points.sort(key=lambda item: item[0])
    ordered = [p for _, p in points]
    if anchor is not None:
        return closed_string(body, anchor, ordered)
    return cyclic(body, ordered)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def default_anchor(body: ConvexBody) -> np.ndarray:
    """Projection of the first coordinate axis onto the surface"""
    axis = np.zeros(body.ambient_dim)
    axis[0] = 1.0
    return surface_project(body, axis)


def _closed_bound(m: int, n: int, generic: bool) -> Optional[cohomology.BoundReport]:
    if m == 1:
        if n % 2 or not generic:
            return None
        return cohomology.bound_closed(1, n, cohomology.Clause.III)
    return cohomology.best_closed_bound(m, n, generic)


def _periodic_bound(m: int, n: int) -> Optional[cohomology.BoundReport]:
    try:
        return cohomology.bound_periodic(m, n)
    except BadInput:
        return None


def verdict_for(bound: Optional[cohomology.BoundReport], report: SolveReport) -> Tuple[Verdict, str]:
    """Compare a solve with its bound

    Morse-certified results are compared orbit by orbit and may FAIL. With
    degenerate families each family counts as one orbit against the category
    bound: reaching it is a PASS, falling short is INFO, since a family of
    positive dimension already holds infinitely many orbits.
    """
    if bound is None:
        return Verdict.INFO, "no bound applies"
    if not report.orbits:
        return Verdict.INFO, "no critical configurations found"
    if report.all_morse:
        observed = len(report.isolated_orbits)
        if observed >= bound.value:
            return Verdict.PASS, ""
        return Verdict.FAIL, f"observed {observed} < bound {bound.value}"
    families = len(report.families)
    if bound.requires_generic:
        return Verdict.INFO, f"{families} degenerate family(ies); clause {bound.clause.value} needs generic data"
    threshold = bound.category_bound if bound.category_bound is not None else bound.value
    observed = report.distinct_critical_orbits
    counted = f"{len(report.isolated_orbits)} isolated + {families} degenerate family(ies)"
    if observed >= threshold:
        return Verdict.PASS, f"category count: {counted} >= {threshold}"
    return Verdict.INFO, f"category count: {counted} < {threshold}; non-generic data"


def verify_cell(body: ConvexBody, body_ref: str, kind: cohomology.TrajectoryKind, n: int,
                settings: SolverSettings, anchor: Optional[np.ndarray]) -> Tuple[VerdictRow, SolveReport]:
    m = body.dim_m
    if kind == cohomology.TrajectoryKind.CLOSED_FROM_POINT:
        report = solve_closed(body, anchor if anchor is not None else default_anchor(body), n, settings)
        bound = _closed_bound(m, n, generic=report.all_morse)
    else:
        report = solve_periodic(body, n, settings)
        bound = _periodic_bound(m, n)
    verdict, note = verdict_for(bound, report)
    row = VerdictRow(
        body=body_ref,
        kind=kind.value,
        m=m,
        n=n,
        bound=bound.value if bound else None,
        clause=bound.clause.value if bound else None,
        observed_isolated_orbits=len(report.isolated_orbits),
        degenerate_families=len(report.families),
        distinct_critical_orbits=report.distinct_critical_orbits,
        all_morse=report.all_morse,
        verdict=verdict,
        note=note,
    )
    return row, report


def run_verify(spec: ExperimentSpec, fmt: str = "json") -> Tuple[int, List[VerdictRow]]:
    """Solve every n of the spec, compare with the bounds and write the reports

    Returns the exit status: 2 if any Morse-certified run found fewer orbits
    than its bound, 0 otherwise. Degenerate runs never fail.
    """
    body = resolve_body(spec.body)
    settings = SolverSettings.from_dict({**spec.settings.to_dict(), 'seed': spec.seed})
    anchor = np.asarray(spec.anchor, dtype=float) if spec.anchor is not None else None
    if anchor is not None and anchor.shape != (body.ambient_dim,):
        raise ConfigError(f"anchor must have {body.ambient_dim} coordinates")
    tag = "closed" if spec.kind == cohomology.TrajectoryKind.CLOSED_FROM_POINT else "periodic"

    rows: List[VerdictRow] = []
    for n in spec.n_values:
        try:
            row, report = verify_cell(body, spec.body, spec.kind, n, settings, anchor)
        except BilliardError as e:
            raise type(e)(f"{spec.name}, n = {n}: {e}") from e
        rows.append(row)
        if spec.out_dir is not None:
            write_json(os.path.join(spec.out_dir, f"solve_{tag}_n{n}.json"), report.to_dict())
            if spec.dump_trajectories:
                for i, orbit in enumerate(report.orbits):
                    emit_trajectory_dump(orbit, os.path.join(spec.out_dir, f"trajectory_{tag}_n{n}_{i}.csv"))

    if spec.out_dir is not None:
        write_report(spec.out_dir, "verdicts", fmt,
                     {'spec': spec.to_dict(), 'rows': [r.to_dict() for r in rows]},
                     [r.to_dict() for r in rows])
    display_verdicts(rows)
    failed = any(r.verdict == Verdict.FAIL for r in rows)
    return (EXIT_BOUND_VIOLATION if failed else EXIT_PASS), rows


def display_verdicts(rows: Sequence[VerdictRow]):
    print("\n" + "=" * 60)
    print("BOUND VERIFICATION")
    print("=" * 60)
    for r in rows:
        bound = "-" if r.bound is None else f"{r.bound} ({r.clause})"
        print(f"{VERDICT_MARKERS[r.verdict]} {r.verdict.value} {r.body} {r.kind} n={r.n}: "
              f"bound {bound} | isolated orbits {r.observed_isolated_orbits} | "
              f"degenerate families {r.degenerate_families}")
        if r.note:
            print(f"   {r.note}")
    print("=" * 60)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _settings_from_args(args) -> SolverSettings:
    data = {}
    if args.settings:
        try:
            with open(args.settings, 'r') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read solver settings {args.settings}: {e}") from e
    settings = SolverSettings.from_dict(data)
    if args.starts is not None:
        settings.starts = args.starts
    if args.workers is not None:
        settings.workers = args.workers
    if args.seed is not None:
        settings.seed = args.seed
    return settings


def cmd_bounds(args) -> int:
    if args.kind == "periodic":
        reports = [cohomology.bound_periodic(args.m, args.n)]
    else:
        reports = cohomology.applicable_closed_bounds(args.m, args.n)
        if not reports:
            raise BadClause(f"no closed-string clause applies to m = {args.m}, n = {args.n}")
    cohomology.display_bounds(reports)
    rows = [r.to_dict() for r in reports]
    write_report(args.out, f"bounds_m{args.m}_n{args.n}", args.format, {'bounds': rows}, rows)
    return EXIT_PASS


def cmd_ring(args) -> int:
    space = cohomology.SpaceKind(args.space)
    if args.coeffs is None:
        domain = cohomology.CoefficientDomain.Q if space == cohomology.SpaceKind.CYCLIC else cohomology.CoefficientDomain.Z
    else:
        domain = cohomology.CoefficientDomain(args.coeffs)
    if space == cohomology.SpaceKind.CLOSED_STRING:
        ring = cohomology.closed_string_ring(args.m, args.n, domain)
    elif space == cohomology.SpaceKind.QUOTIENT:
        if domain != cohomology.CoefficientDomain.Z:
            raise Unsupported("the quotient ring is tabulated with integral coefficients")
        ring = cohomology.quotient_ring(args.m, args.n)
    else:
        ring = cohomology.cyclic_ring(args.m, args.n, domain)
    cohomology.display_ring(ring)
    dump = cohomology.ring_dump(ring)
    rows = [{'left': p['left'], 'right': p['right'],
             'result': " + ".join(f"{c}*{name}" for name, c in p['result'].items())}
            for p in dump['products']]
    write_report(args.out, f"ring_{space.value}_m{args.m}_n{args.n}", args.format, dump, rows)
    return EXIT_PASS


def _finish_solve(args, body_ref: str, report: SolveReport, stem: str) -> int:
    report.display_summary()
    data = report.to_dict()
    data['body_ref'] = body_ref
    write_report(args.out, stem, args.format, data, report.summary_rows())
    if args.out is not None and args.dump:
        for i, orbit in enumerate(report.orbits):
            emit_trajectory_dump(orbit, os.path.join(args.out, f"{stem}_{i}.csv"))
    return EXIT_PASS


def cmd_solve_closed(args) -> int:
    body = resolve_body(args.body)
    if args.anchor:
        try:
            anchor = np.array([float(v) for v in args.anchor.split(",")])
        except ValueError as e:
            raise ConfigError(f"bad anchor {args.anchor!r}: {e}") from e
    else:
        anchor = default_anchor(body)
    report = solve_closed(body, anchor, args.n, _settings_from_args(args))
    return _finish_solve(args, args.body, report, f"solve_closed_n{args.n}")


def cmd_solve_periodic(args) -> int:
    body = resolve_body(args.body)
    report = solve_periodic(body, args.n, _settings_from_args(args))
    return _finish_solve(args, args.body, report, f"solve_periodic_n{args.n}")


def cmd_sphere_oracle(args) -> int:
    if args.periodic:
        spectrum = sphere_oracle.periodic_spectrum(args.n, args.level)
        full = sphere_oracle.full_hessian_periodic(args.n, args.level, args.m) if args.m >= 2 else None
    else:
        k = sphere_oracle.closed_k_from_level(args.level, args.n)
        spectrum = sphere_oracle.q_form_spectrum(k, args.n)
        full = sphere_oracle.full_hessian_closed(k, args.n, args.m) if args.m >= 2 else None

    data = {'spectrum': spectrum.to_dict(), 'full_hessian': full.to_dict() if full else None}
    if not args.periodic and args.m >= 2:
        data['negative_bundle_rank'] = sphere_oracle.negative_bundle_rank(args.level, args.m, args.n)
        data['stiefel_whitney'] = sphere_oracle.sw_class_negative_bundle(args.level, args.m)
        data['orientable'] = sphere_oracle.negative_bundle_orientable(args.level, args.m)

    print("\n" + "=" * 60)
    label = "periodic" if args.periodic else "closed-string"
    print(f"ROUND SPHERE S^{args.m}: {label}, n = {args.n}, level {args.level} (k = {spectrum.k})")
    print("=" * 60)
    print(f"Angle: {spectrum.angle:.12f} | critical value: {spectrum.critical_value:.12f}")
    print(f"Form eigenvalues: {', '.join(format(v, '.6f') for v in spectrum.eigenvalues)}")
    print(f"Form index {spectrum.index}, nullity {spectrum.nullity}")
    if full is not None:
        print(f"Full Hessian: index {full.index}, nullity {full.nullity}")
    if 'negative_bundle_rank' in data:
        marker = "✅ orientable" if data['orientable'] else "❌ non-orientable"
        print(f"Negative bundle rank {data['negative_bundle_rank']} | w = {data['stiefel_whitney']} | {marker}")
    print("=" * 60)

    rows = [{'s': s + 1, 'eigenvalue': float(v)} for s, v in enumerate(spectrum.eigenvalues)]
    write_report(args.out, f"oracle_{label}_m{args.m}_n{args.n}_p{args.level}", args.format, data, rows)
    return EXIT_PASS


def cmd_verify(args) -> int:
    spec = load_experiment(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    if args.out is not None:
        spec.out_dir = args.out
    status, _ = run_verify(spec, args.format)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Override the random seed")
    common.add_argument("--out", default=None, help="Directory for report files")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report file format")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings only")

    parser = argparse.ArgumentParser(description="Lower bounds on billiard trajectories in convex bodies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="Lower-bound table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["closed", "periodic"], default="closed")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("ring", parents=[common], help="Cohomology ring dump")
    p.add_argument("--space", choices=[s.value for s in cohomology.SpaceKind], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coeffs", choices=[d.value for d in cohomology.CoefficientDomain], default=None,
                   help="Coefficients; Z by default, Q for the cyclic ring")
    p.set_defaults(handler=cmd_ring)

    for name, handler, help_text in (("solve-closed", cmd_solve_closed, "Closed trajectories through a point"),
                                     ("solve-periodic", cmd_solve_periodic, "Periodic trajectories")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--body", required=True, help="Preset name or body JSON file")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--starts", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--settings", default=None, help="Solver settings JSON file")
        p.add_argument("--dump", action="store_true", help="Write one trajectory CSV per orbit")
        if name == "solve-closed":
            p.add_argument("--anchor", default=None, help="Comma-separated point on the surface")
        p.set_defaults(handler=handler)

    p = sub.add_parser("sphere-oracle", parents=[common], help="Closed-form data on the round sphere")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--closed", action="store_true", default=True)
    kind.add_argument("--periodic", action="store_true")
    p.set_defaults(handler=cmd_sphere_oracle)

    p = sub.add_parser("verify", parents=[common], help="Run an experiment spec")
    p.add_argument("spec", help="Experiment spec JSON file")
    p.set_defaults(handler=cmd_verify)
    return parser


def configure_logging(verbose: bool, quiet: bool):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return args.handler(args)
    except CONFIG_ERRORS as e:
        print(f"\n❌ Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except BilliardError as e:
        print(f"\n❌ {type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
