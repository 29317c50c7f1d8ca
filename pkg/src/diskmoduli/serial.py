"""Structured-text (JSON) and CSV serialization.

All documents use two-element [re, im] arrays for complex numbers, sorted
keys, and fixed float formatting, so identical inputs produce byte-identical
files.  Loop literals, index reports, BVP problems and solutions, moduli
charts and incidence families all round-trip through here; the CSV schemas
are documented in the README.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict

import numpy as np

from .boundary import BoundaryFrame, GLoop, PartialIndexReport
from .errors import ConfigError
from .grassmann import GrassmannGrid
from .moduli import DiskMap, PerturbationSpec
from .spectral import DiskGrid, FourierLoop, RHSForm
from .sweep import IncidenceFamily, ModuliChart, NodeRecord

__all__ = [
    "loop_to_doc", "loop_from_doc", "condition_from_doc",
    "report_to_doc", "perturbation_to_doc", "perturbation_from_doc",
    "rhs_from_doc", "save_chart", "load_chart", "chart_summary_csv",
    "incidence_csv", "scan_csv", "plane_curve_csv", "emit_plot_data",
    "dump_json", "load_json",
]


# ---------------------------------------------------------------------------
# primitives


def _c2pair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _pair2c(p) -> complex:
    return complex(p[0], p[1])


def _matrix_to_doc(m: np.ndarray) -> list:
    m = np.atleast_2d(m)
    return [[_c2pair(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def _matrix_from_doc(doc) -> np.ndarray:
    return np.array([[_pair2c(p) for p in row] for row in doc], dtype=complex)


def dump_json(doc, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_json(path: str):
    if not os.path.exists(path):
        raise ConfigError(f"input file not found: {path}")
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# loops and boundary conditions


def loop_to_doc(loop: FourierLoop, kind: str = "loop") -> dict:
    entries = []
    kk = loop.order
    for k in range(-kk, kk + 1):
        val = loop.coeffs[k + kk]
        if not np.any(np.abs(val) > 0):
            continue
        entries.append({"k": k, "value": _matrix_to_doc(np.atleast_2d(val))})
    n = loop.dim
    return {"kind": kind, "n": n, "coeffs": entries, "format": 1}


def loop_from_doc(doc: dict) -> FourierLoop:
    try:
        n = int(doc["n"])
        entries = doc["coeffs"]
        if not entries:
            raise ConfigError("loop document has no coefficients")
        kmax = max(abs(int(e["k"])) for e in entries)
        coeffs = np.zeros((2 * kmax + 1, n, n), dtype=complex)
        for e in entries:
            coeffs[int(e["k"]) + kmax] = _matrix_from_doc(e["value"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"malformed loop document: {exc}") from exc
    if n == 1:
        return FourierLoop(coeffs[:, 0, 0])
    return FourierLoop(coeffs)


def condition_from_doc(doc: dict):
    """A GLoop or BoundaryFrame from a loop document (its ``kind`` decides)."""
    kind = doc.get("kind", "gloop")
    loop = loop_from_doc(doc)
    if kind == "frame":
        return BoundaryFrame(loop)
    if kind in ("gloop", "loop"):
        return GLoop(loop)
    raise ConfigError(f"unknown condition kind {kind!r}")


def report_to_doc(report: PartialIndexReport) -> dict:
    return {
        "indices": list(report.indices),
        "maslov": report.maslov,
        "regular": report.regular,
        "h0": report.h0,
        "h1": report.h1,
        "scan": [{"m": m, "dim": nm, "source": src}
                 for (m, nm, src) in report.scan],
        "truncation": report.truncation,
        "scan_truncation": report.scan_truncation,
        "rank_tol": report.rank_tol,
    }


# ---------------------------------------------------------------------------
# right-hand sides


def rhs_from_doc(doc: dict, grid: DiskGrid, dim: int) -> RHSForm:
    """Density documents: zero, polynomial in (z, zbar), or raw samples."""
    kind = doc.get("kind", "zero")
    if kind == "zero":
        return RHSForm.zero(grid, dim=dim)
    if kind == "polynomial":
        terms = [(int(t["a"]), int(t["b"]),
                  np.array([_pair2c(p) for p in t["coeff"]]))
                 for t in doc["terms"]]
        for _, _, c in terms:
            if c.shape != (dim,):
                raise ConfigError(f"polynomial term needs {dim} components")

        def fn(z):
            z = np.asarray(z, dtype=complex)
            out = np.zeros(z.shape + (dim,), dtype=complex)
            for a, b, c in terms:
                out += (z ** a * np.conj(z) ** b)[..., None] * c
            return out if dim > 1 else out[..., 0]

        return RHSForm.from_function(grid, fn)
    if kind == "polar-samples":
        values = np.array([[_pair2c(p) for p in row] for row in doc["values"]],
                          dtype=complex)
        if dim > 1:
            values = values.reshape(grid.n_radial, grid.n_angular, dim)
        return RHSForm(grid, values)
    raise ConfigError(f"unknown rhs kind {kind!r}")


# ---------------------------------------------------------------------------
# perturbations and charts


def perturbation_to_doc(pert: PerturbationSpec) -> dict:
    doc = {"m": pert.m, "epsilon": pert.epsilon, "cubic": [
        {"component": int(c), "monomial": [int(j) for j in mono],
         "coeff": float(v)} for c, mono, v in pert.cubic]}
    if pert.linear is not None:
        doc["linear"] = [[float(x) for x in row] for row in pert.linear]
    return doc


def perturbation_from_doc(doc: dict) -> PerturbationSpec:
    try:
        cubic = tuple((int(t["component"]), tuple(int(j) for j in t["monomial"]),
                       float(t["coeff"])) for t in doc.get("cubic", []))
        linear = np.array(doc["linear"], dtype=float) if "linear" in doc else None
        return PerturbationSpec(m=int(doc["m"]), epsilon=float(doc["epsilon"]),
                                linear=linear, cubic=cubic)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed perturbation document: {exc}") from exc


def _diskmap_to_doc(disk: DiskMap) -> dict:
    return {"coeffs": [[_c2pair(z) for z in row] for row in disk.coeffs],
            "chart": disk.chart,
            "gauge": [float(g) for g in disk.gauge]}


def _diskmap_from_doc(doc: dict) -> DiskMap:
    coeffs = np.array([[_pair2c(p) for p in row] for row in doc["coeffs"]],
                      dtype=complex)
    return DiskMap(coeffs=coeffs, chart=int(doc["chart"]),
                   gauge=tuple(doc["gauge"]))


def save_chart(chart: ModuliChart, directory: str) -> None:
    """Chart as a directory: meta.json, node_*.json, summary.csv."""
    os.makedirs(directory, exist_ok=True)
    meta = {
        "m": chart.m,
        "epsilon": chart.epsilon,
        "truncation": chart.truncation,
        "grid_shape": list(chart.grid.shape),
        "perturbation": perturbation_to_doc(chart.perturbation),
        "partial": chart.partial,
        "failed": list(chart.failed),
        "format": 1,
    }
    dump_json(meta, os.path.join(directory, "meta.json"))
    for rec in chart.records:
        doc = {
            "index": rec.index,
            "label": list(rec.label),
            "u": [float(x) for x in rec.u],
            "v": [float(x) for x in rec.v],
            "converged": rec.converged,
            "residual": float(rec.residual) if np.isfinite(rec.residual) else None,
            "iterations": rec.iterations,
            "tangent_dim": rec.tangent_dim,
            "disk": _diskmap_to_doc(rec.disk) if rec.disk is not None else None,
        }
        name = "node_" + "_".join(str(i) for i in rec.label) + ".json"
        dump_json(doc, os.path.join(directory, name))
    with open(os.path.join(directory, "summary.csv"), "w", newline="") as fh:
        fh.write(chart_summary_csv(chart))


def load_chart(directory: str) -> ModuliChart:
    meta = load_json(os.path.join(directory, "meta.json"))
    pert = perturbation_from_doc(meta["perturbation"])
    grid = GrassmannGrid.build(int(meta["m"]), meta["grid_shape"])
    records = []
    for idx, label in enumerate(grid.labels):
        name = "node_" + "_".join(str(i) for i in label) + ".json"
        doc = load_json(os.path.join(directory, name))
        disk = _diskmap_from_doc(doc["disk"]) if doc["disk"] is not None else None
        residual = doc["residual"] if doc["residual"] is not None else np.inf
        records.append(NodeRecord(
            index=idx, label=tuple(doc["label"]),
            u=np.array(doc["u"]), v=np.array(doc["v"]), disk=disk,
            residual=float(residual), iterations=int(doc["iterations"]),
            tangent_dim=int(doc["tangent_dim"]), converged=bool(doc["converged"])))
    return ModuliChart(m=int(meta["m"]), epsilon=float(meta["epsilon"]),
                       truncation=int(meta["truncation"]), grid=grid,
                       perturbation=pert, records=tuple(records),
                       partial=bool(meta["partial"]),
                       failed=tuple(meta["failed"]))


# ---------------------------------------------------------------------------
# CSV emission


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


def chart_summary_csv(chart: ModuliChart) -> str:
    """Columns: node label, residual, iterations, tangent dim, quadric point."""
    n = chart.m + 2
    header = (["node_" + str(i) for i in range(len(chart.grid.shape))]
              + ["converged", "residual", "iterations", "tangent_dim"]
              + [f"q{i}_re" for i in range(n)] + [f"q{i}_im" for i in range(n)])
    rows = []
    for rec in chart.records:
        qp = rec.quadric_point
        q_re = [_fmt(qp[i].real) for i in range(n)] if qp is not None else [""] * n
        q_im = [_fmt(qp[i].imag) for i in range(n)] if qp is not None else [""] * n
        rows.append(list(rec.label)
                    + [int(rec.converged),
                       _fmt(rec.residual) if np.isfinite(rec.residual) else "inf",
                       rec.iterations, rec.tangent_dim] + q_re + q_im)
    return _csv_text(header, rows)


def incidence_csv(family: IncidenceFamily) -> str:
    """Polyline of the family in moduli coordinates, one member per row."""
    n = family.point.shape[0]
    ncoord = len(family.order_coordinates[0]) if family.members else 1 + n
    header = (["order"] + [f"node_{i}" for i in
                           range(len(family.members[0].label) if family.members else 1)]
              + ["theta", "incidence_residual"]
              + [f"coord_{i}" for i in range(ncoord)])
    rows = []
    for i, (mem, coord) in enumerate(zip(family.members,
                                         family.order_coordinates)):
        rows.append([i] + list(mem.label)
                    + [_fmt(mem.theta), _fmt(mem.incidence_residual)]
                    + [_fmt(c) for c in coord])
    return _csv_text(header, rows)


def scan_csv(report: PartialIndexReport) -> str:
    """Scan table with second differences: columns m, dim, source, mult."""
    table = {m: nm for m, nm, _ in report.scan}
    rows = []
    for m, nm, src in sorted(report.scan):
        mult = ""
        if m + 1 in table and m + 2 in table:
            mult = table[m] - 2 * table[m + 1] + table[m + 2]
        rows.append([m, nm, src, mult])
    return _csv_text(["m", "kernel_dim", "source", "count_index_eq_m"], rows)


def plane_curve_csv(entries) -> str:
    """Degree table from (d, two-component report, connected report) rows."""
    header = ["d", "two_component_dim", "connected_dim", "h1_two", "h1_conn",
              "deg_K_minus_N_two", "deg_K_minus_N_conn"]
    rows = []
    for d, rt, ro in entries:
        rows.append([d, rt.moduli_dim, ro.moduli_dim, rt.h1, ro.h1,
                     rt.deg_canonical_minus_normal,
                     ro.deg_canonical_minus_normal])
    return _csv_text(header, rows)


def emit_plot_data(result, kind: str) -> str:
    """Plot-ready CSV for a result object.

    ``kind`` is one of scan (an index report), chart (a moduli chart) or
    incidence (an incidence family); an empty chart yields a header-only
    document.
    """
    if kind == "scan":
        return scan_csv(result)
    if kind == "chart":
        return chart_summary_csv(result)
    if kind == "incidence":
        return incidence_csv(result)
    raise ConfigError(f"unknown plot kind {kind!r}")
