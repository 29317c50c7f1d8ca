"""Command-line front end.

Subcommands: indices, solve, double, plane-curve, sweep, incidence, verify.
Configurations and reports are JSON documents with [re, im] complex pairs;
tabular outputs are CSV with schemas documented in the README.  Outputs are
deterministic: identical inputs give byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(non-convergence), 4 internal inconsistency (invariant violation).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import doubling, serial
from .boundary import as_gloop, is_fredholm_regular, partial_indices
from .config import DEFAULT_TOLS, NewtonConfig
from .dbar import DiskSolution, LinearBVP, solve_bvp
from .errors import (ConfigError, ConvergenceError, DiskModuliError,
                     GridResolutionError, TotallyRealViolation,
                     TruncationError)
from .grassmann import GrassmannGrid
from .moduli import PerturbationSpec
from .spectral import DiskGrid
from .sweep import incidence_family, sweep_moduli, verify_unperturbed

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    """Parsed invocation: subcommand plus file paths and overrides."""

    command: str
    input: str | None = None
    output: str | None = None
    out_dir: str | None = None
    chart: str | None = None
    point: str | None = None
    truncation: int | None = None
    rank_tol: float | None = None
    tol: float | None = None
    d_min: int = 1
    d_max: int = 12
    csv: str | None = None


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _tols(config: RunConfig):
    tols = DEFAULT_TOLS
    if config.rank_tol is not None:
        if config.rank_tol <= 0:
            raise ConfigError("rank tolerance override must be positive")
        tols = tols.replaced(rank_tol=config.rank_tol)
    if config.tol is not None:
        if config.tol <= 0:
            raise ConfigError("tolerance override must be positive")
        tols = tols.replaced(residual_tol=config.tol)
    return tols


def _cmd_indices(config: RunConfig) -> int:
    doc = serial.load_json(config.input)
    condition = serial.condition_from_doc(doc)
    k = config.truncation or 64
    report = partial_indices(condition, k=k, tols=_tols(config))
    if report.maslov != sum(report.indices):
        raise DiskModuliError("internal inconsistency: Maslov index "
                              f"{report.maslov} != sum of indices")
    out = serial.report_to_doc(report)
    if config.output:
        serial.dump_json(out, config.output)
    if config.csv:
        _write_text(config.csv, serial.scan_csv(report))
    print(f"indices {list(report.indices)}  maslov {report.maslov}  "
          f"h0 {report.h0}  h1 {report.h1}  "
          f"{'regular' if report.regular else 'NOT regular'}")
    return EXIT_OK


def _cmd_solve(config: RunConfig) -> int:
    doc = serial.load_json(config.input)
    condition = serial.condition_from_doc(doc["condition"])
    k = config.truncation or int(doc.get("truncation", 24))
    g = as_gloop(condition)
    two_m = 2 * (2 * k + max(g.order, g.dim) + 4)
    grid = DiskGrid.for_truncation(k, two_m)
    rhs = serial.rhs_from_doc(doc.get("rhs", {"kind": "zero"}), grid, g.dim)
    problem = LinearBVP(condition=g, rhs=rhs, truncation=k, tols=_tols(config))
    result = solve_bvp(problem)
    if isinstance(result, DiskSolution):
        out = {
            "status": "solved",
            "truncation": k,
            "collocation": two_m,
            "interior_residual": result.interior_residual,
            "boundary_residual": result.boundary_residual,
            "lstsq_residual": result.lstsq_residual,
            "kernel_projection_norm": float(
                np.linalg.norm(result.kernel_projection)),
            "coefficients": [[serial._c2pair(z) for z in np.atleast_1d(row)]
                             for row in result.holomorphic.coeffs],
        }
        print(f"solved: boundary residual {result.boundary_residual:.3e}, "
              f"interior residual {result.interior_residual:.3e}")
    else:
        out = {
            "status": "obstructed",
            "truncation": k,
            "certificate_dimension": result.dimension,
            "pairings": [float(p) for p in result.pairings],
            "lstsq_residual": result.lstsq_residual,
        }
        print(f"obstructed: certificate dimension {result.dimension}, "
              f"residual {result.lstsq_residual:.3e}")
    if config.output:
        serial.dump_json(out, config.output)
    return EXIT_OK


def _cmd_double(config: RunConfig) -> int:
    doc = serial.load_json(config.input)
    if "coeffs" in doc:
        report = partial_indices(serial.condition_from_doc(doc),
                                 k=config.truncation or 64,
                                 tols=_tols(config))
    else:
        raise ConfigError("double expects a loop document")
    dd = doubling.double_disk_bundle(report)
    out = {"genus": dd.genus, "splitting": list(dd.splitting),
           "degree": dd.degree, "h0": dd.h0, "h1": dd.h1,
           "h0_invariant_real_dim": dd.h0_rho, "h1_invariant_real_dim": dd.h1_rho}
    if config.output:
        serial.dump_json(out, config.output)
    print(f"double: degree {dd.degree}, splitting {list(dd.splitting)}, "
          f"h0 {dd.h0}, h1 {dd.h1}")
    return EXIT_OK


def _cmd_plane_curve(config: RunConfig) -> int:
    if config.d_min < 1 or config.d_max < config.d_min:
        raise ConfigError("need 1 <= d_min <= d_max")
    entries = []
    for d in range(config.d_min, config.d_max + 1):
        two = doubling.plane_curve_double(doubling.PlaneCurveSpec(d, "two"))
        one = doubling.plane_curve_double(doubling.PlaneCurveSpec(d, "one"))
        entries.append((d, two, one))
    _write_text(config.output, serial.plane_curve_csv(entries))
    return EXIT_OK


def _newton_cfg(config: RunConfig) -> NewtonConfig:
    cfg = NewtonConfig()
    if config.tol is not None:
        cfg = NewtonConfig(tol=config.tol)
    return cfg


def _cmd_sweep(config: RunConfig) -> int:
    doc = serial.load_json(config.input)
    pert = serial.perturbation_from_doc(doc)
    grid = GrassmannGrid.build(pert.m, doc.get("grid", [16, 8]))
    truncation = config.truncation or int(doc.get("truncation", 10))
    chart = sweep_moduli(pert, grid, truncation=truncation,
                         cfg=_newton_cfg(config),
                         eps_schedule=int(doc.get("eps_steps", 2)),
                         seed_node=int(doc.get("seed_node", 0)),
                         measure_tangent=bool(doc.get("measure_tangent", False)))
    serial.save_chart(chart, config.out_dir)
    print(f"sweep: {len(chart.records)} nodes, "
          f"{len(chart.failed)} failed, chart written to {config.out_dir}")
    if chart.partial:
        print(f"failed nodes: {list(chart.failed)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_incidence(config: RunConfig) -> int:
    chart = serial.load_chart(config.chart)
    doc = serial.load_json(config.point)
    x = np.array(doc["x"], dtype=float)
    if x.shape != (chart.m + 2,):
        raise ConfigError(f"point needs {chart.m + 2} real components")
    family = incidence_family(x, chart, cfg=_newton_cfg(config))
    _write_text(config.output, serial.incidence_csv(family))
    print(f"incidence family: {len(family.members)} members")
    return EXIT_OK


def _cmd_verify(config: RunConfig) -> int:
    chart = serial.load_chart(config.chart)
    diag = verify_unperturbed(chart)
    out = {
        "max_halfline_distance": diag.max_halfline_distance,
        "max_quadric_residual": diag.max_quadric_residual,
        "injective": diag.injective,
        "min_center_separation": diag.min_center_separation,
        "nodes": [{"index": i, "halfline_distance": d, "quadric_residual": q}
                  for (i, d, q) in diag.per_node],
    }
    if config.output:
        serial.dump_json(out, config.output)
    print(f"verify: half-line distance {diag.max_halfline_distance:.3e}, "
          f"quadric residual {diag.max_quadric_residual:.3e}, "
          f"incidence map {'injective' if diag.injective else 'NOT injective'}")
    ok = (diag.max_halfline_distance <= 1e-10
          and diag.max_quadric_residual <= 1e-10 and diag.injective)
    return EXIT_OK if ok else EXIT_INTERNAL


_COMMANDS = {
    "indices": _cmd_indices,
    "solve": _cmd_solve,
    "double": _cmd_double,
    "plane-curve": _cmd_plane_curve,
    "sweep": _cmd_sweep,
    "incidence": _cmd_incidence,
    "verify": _cmd_verify,
}


def run(config: RunConfig) -> int:
    """Dispatch a parsed configuration; exit status per the module docstring."""
    try:
        if config.command not in _COMMANDS:
            raise ConfigError(f"unknown command {config.command!r}")
        for path in (config.input, config.point):
            if path is not None and not os.path.exists(path):
                raise ConfigError(f"input file not found: {path}")
        return _COMMANDS[config.command](config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, TruncationError, GridResolutionError,
            TotallyRealViolation) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DiskModuliError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="diskmoduli",
        description="Fredholm data of holomorphic disks with totally real "
                    "boundary, linear dbar solves, and moduli sweeps")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="JSON input document")
        sp.add_argument("--out", dest="output", help="output file (default stdout)")
        sp.add_argument("--truncation", type=int, help="truncation order override")
        sp.add_argument("--rank-tol", dest="rank_tol", type=float,
                        help="SVD rank cutoff override")
        sp.add_argument("--tol", type=float, help="residual tolerance override")

    sp = sub.add_parser("indices", help="partial indices of a boundary condition")
    common(sp)
    sp.add_argument("--csv", help="also write the scan table as CSV")

    sp = sub.add_parser("solve", help="solve a linear dbar boundary problem")
    common(sp)

    sp = sub.add_parser("double", help="doubled-bundle invariants of a condition")
    common(sp)

    sp = sub.add_parser("plane-curve", help="real plane curve dimension table")
    common(sp, needs_input=False)
    sp.add_argument("--dmin", dest="d_min", type=int, default=1)
    sp.add_argument("--dmax", dest="d_max", type=int, default=12)

    sp = sub.add_parser("sweep", help="sweep a moduli chart over the Grassmannian")
    common(sp)
    sp.add_argument("--out-dir", dest="out_dir", required=True,
                    help="directory for the chart records")

    sp = sub.add_parser("incidence", help="disks through a submanifold point")
    common(sp, needs_input=False)
    sp.add_argument("--chart", required=True, help="chart directory")
    sp.add_argument("--point", required=True, help="JSON point document")

    sp = sub.add_parser("verify", help="check an amplitude-zero chart")
    common(sp, needs_input=False)
    sp.add_argument("--chart", required=True, help="chart directory")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    fields = {f: getattr(args, f) for f in RunConfig.__dataclass_fields__
              if hasattr(args, f)}
    return run(RunConfig(**fields))


if __name__ == "__main__":
    sys.exit(main())
