"""Command-line entry point: example sweeps, single-point reports, validity audits.

Exit codes: 0 success, 1 usage error, 2 validation or audit failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import PERM_MAX, lb1, thm2_bounds
from .catalog import ExampleSpec, example_set, example_state, random_instance
from .errors import InvalidGrid, InvalidParameter, OutOfSupportedRange, UncertaintyError, UnknownExample
from .optimizer import GridSpec, compare_report

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3
VALIDITY_TOL = 1e-9

DEFAULT_RANGES = {1: (0.0, 2 * math.pi, 201), 2: (0.0, 1.0, 101), 3: (0.0, math.pi, 101)}
# fixed-parameter spot checks added to every audit trial
AUDIT_ALPHAS = (0.0, 0.5, 2.0, 5.0)
AUDIT_WEIGHTS = ((2.0, 1.0), (1.0, 2.0))


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _manifest_path(output: Path) -> Path:
    return output.with_suffix(".manifest.json")


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


@dataclass
class SweepResult:
    header: list[str]
    rows: list[list[float]]
    violations: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


def sweep_header(example_id: int, alpha_fixed: Optional[float], permutations: bool) -> list[str]:
    cols = ["theta"]
    if example_id == 3:
        cols.append("phi")
    cols += ["sum", "song", "zhang", "lb1_opt", "lb1_alpha", "lb2_opt", "lb2_t"]
    if alpha_fixed is not None:
        cols.append("lb1_fixed")
    if permutations:
        cols.append("lb1_pi_opt")
    return cols


def run_sweep(
    example_id: int,
    theta_min: float,
    theta_max: float,
    steps: int,
    grid: GridSpec,
    output_path: Optional[Path] = None,
    phi: float = math.pi / 2,
    alpha_fixed: Optional[float] = None,
    permutations: bool = False,
) -> SweepResult:
    """Evaluate every bound along a line of example states.

    Writes the CSV and a sidecar ``.manifest.json`` when ``output_path`` is
    given. Rows come out in parameter order.
    """
    if example_id not in DEFAULT_RANGES:
        raise UnknownExample(f"no example with id {example_id!r}")
    if steps < 2:
        raise InvalidParameter(f"steps must be at least 2, got {steps}")
    obs = example_set(example_id)
    header = sweep_header(example_id, alpha_fixed, permutations)
    result = SweepResult(header, [])
    for theta in np.linspace(theta_min, theta_max, steps):
        spec = ExampleSpec(example_id, float(theta), phi)
        rho = example_state(spec)
        report = compare_report(rho, obs, grid, include_permutations=permutations)
        total, song, zhang, best1, best2 = report[:5]
        row = [spec.theta] + ([spec.phi] if example_id == 3 else [])
        row += [total.value, song.value, zhang.value, best1.value, best1.alpha, best2.value, best2.alpha]
        bounds = [song.value, zhang.value, best1.value, best2.value]
        if alpha_fixed is not None:
            fixed = lb1(rho, obs, alpha_fixed).value
            row.append(fixed)
            bounds.append(fixed)
        if permutations:
            row.append(report[5].value)
            bounds.append(report[5].value)
        if max(bounds) > total.value + VALIDITY_TOL:
            result.violations += 1
            log.error("bound exceeds variance sum at theta=%s", fmt(spec.theta))
        result.rows.append(row)

    if output_path is not None:
        output_path = Path(output_path)
        _write_text(output_path, result.to_csv())
        manifest = {
            "example_id": example_id,
            "theta_min": float(theta_min),
            "theta_max": float(theta_max),
            "steps": steps,
            "phi": float(phi) if example_id == 3 else None,
            "alpha_fixed": alpha_fixed,
            "permutations": permutations,
            "grid_scale": grid.scale,
            "grid_min_exponent": grid.min_exponent,
            "grid_max_exponent": grid.max_exponent,
            "grid_points_per_octave": grid.points_per_octave,
            "grid_refine": grid.refine,
            "rows": len(result.rows),
            "violations": result.violations,
            "tool_version": __version__,
        }
        _write_text(_manifest_path(output_path), json.dumps(manifest, indent=2) + "\n")
    return result


@dataclass
class AuditReport:
    trials: int
    violations: int
    worst_margin: float
    seed: int
    dims: list[int] = field(default_factory=list)
    n_obs: list[int] = field(default_factory=list)
    worst_family: str = ""
    worst_trial: int = -1
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for one audit trial."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFF_FFFF_FFFF_FFFF, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def audit_trial(rho, obs, grid: GridSpec) -> list[tuple[str, float]]:
    """``(family, sum - bound)`` for every bound evaluated on one instance."""
    report = compare_report(rho, obs, grid, include_permutations=len(obs) <= PERM_MAX)
    total = report[0].value
    margins = [(ev.family.value, total - ev.value) for ev in report[1:]]
    for a in AUDIT_ALPHAS:
        margins.append((f"LB1@{a:g}", total - lb1(rho, obs, a).value))
    for a, b in AUDIT_WEIGHTS:
        for ev in thm2_bounds(rho, obs, a, b):
            if ev is not None:
                margins.append((f"{ev.family.value}@{a:g},{b:g}", total - ev.value))
    return margins


def run_audit(
    dims: Sequence[int],
    n_obs: Sequence[int],
    trials: int,
    seed: int,
    output_path: Optional[Path] = None,
    grid: Optional[GridSpec] = None,
) -> AuditReport:
    """Check every bound against the variance sum on seeded random instances.

    Trial ``k`` uses the ``k``-th ``(dim, n_obs)`` combination cyclically and
    its own seed derived from ``(seed, k)``.
    """
    if trials < 1:
        raise InvalidParameter(f"trials must be at least 1, got {trials}")
    if not dims or not n_obs:
        raise InvalidParameter("dims and n_obs must each list at least one value")
    grid = grid or GridSpec()
    combos = list(product(dims, n_obs))
    report = AuditReport(trials, 0, math.inf, seed, list(dims), list(n_obs))
    for k in range(trials):
        dim, n = combos[k % len(combos)]
        rho, obs = random_instance(dim, n, trial_seed(seed, k))
        margins = audit_trial(rho, obs, grid)
        if any(m < -VALIDITY_TOL for _, m in margins):
            report.violations += 1
        family, margin = min(margins, key=lambda fm: fm[1])
        if margin < report.worst_margin:
            report.worst_margin, report.worst_family, report.worst_trial = margin, family, k
    if output_path is not None:
        _write_text(Path(output_path), report.to_json())
    return report


def single_point(spec: ExampleSpec, grid: GridSpec, alpha: Optional[float], permutations: bool) -> dict:
    rho = example_state(spec)
    obs = example_set(spec.id)
    out = {"example_id": spec.id, "theta": spec.theta}
    if spec.id == 3:
        out["phi"] = spec.phi
    for ev in compare_report(rho, obs, grid, include_permutations=permutations):
        key = ev.family.value.lower()
        out[key] = ev.value
        if ev.alpha is not None:
            out[f"{key}_alpha"] = ev.alpha
        if ev.beta is not None:
            out[f"{key}_beta"] = ev.beta
        if ev.branch is not None:
            out[f"{key}_x"], out[f"{key}_y"] = ev.branch.x, ev.branch.y
        if ev.member is not None:
            out[f"{key}_member"] = ev.member.value
        if ev.permutation is not None:
            out[f"{key}_permutation"] = " ".join(str(i) for i in ev.permutation)
    if alpha is not None:
        out["lb1_fixed"] = lb1(rho, obs, alpha).value
        out["lb1_fixed_alpha"] = alpha
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-min-exp", type=int, default=-6, help="smallest power of two on the parameter grid")
    p.add_argument("--grid-max-exp", type=int, default=6, help="largest power of two on the parameter grid")
    p.add_argument("--grid-density", type=int, default=20, help="grid points per octave")
    p.add_argument("--refine", action="store_true", help="golden-section refinement around the grid maximum")


def _grid(args) -> GridSpec:
    return GridSpec(args.grid_min_exp, args.grid_max_exp, args.grid_density, args.refine)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="varbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="evaluate all bounds along an example state family, write CSV")
    sw.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    sw.add_argument("--theta-min", type=float)
    sw.add_argument("--theta-max", type=float)
    sw.add_argument("--steps", type=int)
    sw.add_argument("--phi", type=float, default=math.pi / 2, help="fixed phi for example 3")
    sw.add_argument("--alpha", type=float, help="also report LB1 at this fixed alpha")
    sw.add_argument("--permutations", action="store_true", help="add the permutation-maximized LB1")
    sw.add_argument("--output", type=Path, required=True)
    _add_grid_flags(sw)

    bd = sub.add_parser("bounds", help="single-point comparison report as JSON on stdout")
    bd.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    bd.add_argument("--theta", type=float, required=True)
    bd.add_argument("--phi", type=float, default=math.pi / 2)
    bd.add_argument("--alpha", type=float)
    bd.add_argument("--permutations", action="store_true")
    _add_grid_flags(bd)

    au = sub.add_parser("audit", help="Monte-Carlo validity audit on random instances, write JSON")
    au.add_argument("--dims", type=_int_list, default=[2, 3, 4])
    au.add_argument("--nobs", type=_int_list, default=[2, 3, 4])
    au.add_argument("--trials", type=int, default=1000)
    au.add_argument("--seed", type=int, default=0)
    au.add_argument("--output", type=Path, required=True)
    _add_grid_flags(au)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        grid = _grid(args)
        if args.command == "sweep":
            lo, hi, steps = DEFAULT_RANGES[args.example]
            result = run_sweep(
                args.example,
                lo if args.theta_min is None else args.theta_min,
                hi if args.theta_max is None else args.theta_max,
                steps if args.steps is None else args.steps,
                grid,
                args.output,
                phi=args.phi,
                alpha_fixed=args.alpha,
                permutations=args.permutations,
            )
            log.info("wrote %d rows to %s", len(result.rows), args.output)
            return EXIT_VALIDATION if result.violations else EXIT_OK
        if args.command == "bounds":
            spec = ExampleSpec(args.example, args.theta, args.phi)
            print(json.dumps(single_point(spec, grid, args.alpha, args.permutations), indent=2))
            return EXIT_OK
        report = run_audit(args.dims, args.nobs, args.trials, args.seed, args.output, grid)
        log.info("%d/%d trials violated a bound", report.violations, report.trials)
        return EXIT_VALIDATION if report.violations else EXIT_OK
    except (InvalidParameter, InvalidGrid, UnknownExample, OutOfSupportedRange) as exc:
        print(f"varbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"varbound: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except UncertaintyError as exc:
        print(f"varbound: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
