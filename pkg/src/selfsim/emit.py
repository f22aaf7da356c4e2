"""Text renderings of results: statistics tables, DOT graphs, SVG drawings
and plain-text reports.  All output is deterministic."""
from __future__ import annotations

import csv
import io

import numpy as np

from .approximator import DepthModel, Realization
from .bimodule import Bimodule
from .nondegen import SystemReport

STATS_HEADER = ("depth", "cells", "point_classes", "touch_edges", "components")


def stats_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=STATS_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in STATS_HEADER})
    return buf.getvalue()


def _cell_name(label: str) -> str:
    return label if label else "()"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def touching_dot(M: Bimodule, model: DepthModel, name: str | None = None) -> str:
    """Undirected DOT graph of the top cells and their touching edges."""
    obj = M.base.objects[model.root]
    title = name or f"{M.name or 'system'}_{obj}_depth{model.depth}"
    lines = [f"graph {_dot_quote(title)} {{", "  node [shape=box];"]
    for i, cell in enumerate(model.cells):
        lines.append(f"  n{i} [label={_dot_quote(_cell_name(cell.label(M)))}];")
    for u, v in model.edges:
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def realization_svg(real: Realization, size: int = 480, margin: int = 16) -> str:
    """Cells as polygons (or segments, or dots) plus one dot per glued class."""
    shapes = [pts for _, pts in real.cells] + [p for p in real.points if p is not None]
    allpts = np.vstack([np.asarray(p, dtype=float).reshape(-1, 2) for p in shapes]) if shapes else np.zeros((1, 2))
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    scale = (size - 2 * margin) / span

    def xy(p):
        return _fmt(margin + (p[0] - lo[0]) * scale), _fmt(size - margin - (p[1] - lo[1]) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    out.append('<g fill="#8fb3d9" stroke="#1f3b5c" stroke-width="1">')
    for label, pts in real.cells:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        title = f"<title>{_cell_name(label)}</title>"
        if len(pts) >= 3:
            coords = " ".join(",".join(xy(p)) for p in pts)
            out.append(f'<polygon points="{coords}">{title}</polygon>')
        elif len(pts) == 2:
            (x1, y1), (x2, y2) = xy(pts[0]), xy(pts[1])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke-width="3">{title}</line>')
        else:
            x, y = xy(pts[0])
            out.append(f'<circle cx="{x}" cy="{y}" r="3">{title}</circle>')
    out.append("</g>")
    out.append('<g fill="#c0392b">')
    for k, p in enumerate(real.points):
        if p is None:
            continue
        for q in np.asarray(p, dtype=float).reshape(-1, 2):
            x, y = xy(q)
            out.append(f'<circle cx="{x}" cy="{y}" r="1.5"><title>class {k}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def validation_report(M: Bimodule, report: SystemReport) -> str:
    cat = M.base
    lines = [f"system: {M.name or '(unnamed)'}",
             f"objects: {cat.n_objects}  arrows: {cat.n_arrows}"]
    if report.diagnostics:
        lines.append("bimodule laws: FAILED")
        lines.extend(f"  {d}" for d in report.diagnostics)
    else:
        lines.append("bimodule laws: ok")
    for a, fin in enumerate(report.finiteness):
        status = "ok" if fin.finite else "FAILED"
        lines.append(f"finiteness at {cat.objects[a]}: {status} ({fin.count} elements)")
    for b, res in enumerate(report.slices):
        lines.append(f"slice M({cat.objects[b]},-): {res.describe(M.covariant_slice(b))}")
    lines.append("valid" if report.valid else "invalid")
    return "\n".join(lines) + "\n"


def nondegeneracy_report(M: Bimodule, report: SystemReport) -> str:
    cat = M.base
    lines = []
    for b, res in enumerate(report.slices):
        X = M.covariant_slice(b)
        lines.append(f"{cat.objects[b]}: {res.describe(X)}")
        if not res.nondegenerate:
            comp = ", ".join(f"({cat.objects[a]},{X.label(a, x)})" for a, x in res.component)
            lines.append(f"  component: {comp}")
    return "\n".join(lines) + "\n"
