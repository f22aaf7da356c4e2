"""Finite-depth models of the universal solution.

A point of the space at object ``a`` is an infinite string of digits
``m_1 m_2 ...`` with ``m_i`` in ``m(a_i, a_{i-1})`` and ``a_0 = a``; a depth-n
*cell* is a length-n prefix.  A *pointed cell* pairs a cell with an arrow
``f: b -> a_n`` into its innermost object, naming one of its marked faces.
Two moves glue pointed cells:

R1 (interchange at positions ``i, i+1``)
    ``(.., m_i, lam(g)(m'), ..; f) ~ (.., rho(g)(m_i), m', ..; f)``
R2 (last digit)
    ``(.., m_n; g.f') ~ (.., rho(g)(m_n); f')``

Cells touch when some glued class contains pointed cells of both.  Cells
whose digits are all non-faces (not ``rho(f)(m')`` for a non-identity
``f``) are the *top* cells; they tile the space at each depth.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernel
from .bimodule import Bimodule
from .errors import RealizationError, ResourceLimitError
from .fincat import Diagnostic

DEFAULT_MAX_CELLS = 2_000_000
REALIZATION_TOL = 1e-9


class Cell(NamedTuple):
    """Digit string rooted at ``root``; each digit is ``(object, element)``
    with ``element`` in ``m(object, previous object)``."""

    root: int
    digits: tuple[tuple[int, int], ...]

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def innermost(self) -> int:
        return self.digits[-1][0] if self.digits else self.root

    def truncate(self) -> "Cell":
        return Cell(self.root, self.digits[:-1])

    def label(self, M: Bimodule) -> str:
        out, prev = [], self.root
        for b, m in self.digits:
            out.append(M.label(b, prev, m))
            prev = b
        return ",".join(out)


def _digits_into(M: Bimodule, a: int, top_only: bool) -> tuple[tuple[int, int], ...]:
    out = []
    for b in range(M.base.n_objects):
        for m in range(M.sizes[b][a]):
            if top_only and M.is_degenerate_digit(b, a, m):
                continue
            out.append((b, m))
    return tuple(out)


def cell_count(M: Bimodule, a: int, n: int, top_only: bool = False) -> int:
    """``c_n(a) = sum_b |m(b, a)| c_{n-1}(b)``, ``c_0 = 1`` (top cells: non-face digits only)."""
    k = M.base.n_objects
    counts = [1] * k
    for _ in range(n):
        counts = [sum(counts[b] for b, _ in _digits_into(M, x, top_only)) for x in range(k)]
    return counts[a]


def enumerate_cells(M: Bimodule, a: int, n: int, top_only: bool = False,
                    max_cells: int = DEFAULT_MAX_CELLS) -> list[Cell]:
    """All depth-n cells at root ``a`` in lexicographic digit order."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    total = cell_count(M, a, n, top_only)
    if total > max_cells:
        raise ResourceLimitError(f"{total} cells at depth {n} exceed limit {max_cells}")
    into = [_digits_into(M, x, top_only) for x in range(M.base.n_objects)]
    chains = [()]
    inner = [a]
    for _ in range(n):
        new_chains, new_inner = [], []
        for ch, x in zip(chains, inner):
            for d in into[x]:
                new_chains.append(ch + (d,))
                new_inner.append(d[0])
        chains, inner = new_chains, new_inner
    return [Cell(a, ch) for ch in chains]


def is_top_cell(M: Bimodule, cell: Cell) -> bool:
    prev = cell.root
    for b, m in cell.digits:
        if M.is_degenerate_digit(b, prev, m):
            return False
        prev = b
    return True


# -- gluing ------------------------------------------------------------

class _MoveTables:
    """Per-system lookup tables for R1 and R2."""

    def __init__(self, M: Bimodule):
        cat = M.base
        n = cat.n_objects
        # factor[f]: (g, f2) with g non-identity into target(f) and g.f2 == f
        self.factor = []
        for f, (s, t) in enumerate(cat.arrows):
            fs = []
            for g in cat.arrows_into[t]:
                if cat.is_identity(g):
                    continue
                for f2 in cat.hom(s, cat.source(g)):
                    if cat.compose(g, f2) == f:
                        fs.append((g, f2))
            self.factor.append(tuple(fs))
        # lam_pre[b][a][m]: (g, c, m2) with g: c -> a non-identity, lam(g)(m2) == m
        self.lam_pre = [[[[] for _ in range(M.sizes[b][a])] for a in range(n)] for b in range(n)]
        for g in cat.non_identity_arrows:
            c, a = cat.arrows[g]
            for b in range(n):
                for m2, m in enumerate(M.lam[g][b]):
                    self.lam_pre[b][a][m].append((g, c, m2))


@lru_cache(maxsize=8)
def _tables(M: Bimodule) -> _MoveTables:
    return _MoveTables(M)


@dataclass(frozen=True)
class PointedClasses:
    """Partition of the depth-n pointed cells at one root.

    Pointed cell ``p`` is ``(cells[pointed_cell[p]], pointed_arrow[p])``;
    ``labels[p]`` is its class, numbered by least member.
    """

    root: int
    depth: int
    cells: tuple[Cell, ...]
    pointed_cell: np.ndarray = field(repr=False)
    pointed_arrow: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    n_classes: int
    class_source: tuple[int, ...]

    @property
    def n_pointed(self) -> int:
        return len(self.labels)

    def members(self) -> list[list[int]]:
        groups = [[] for _ in range(self.n_classes)]
        for p, lab in enumerate(self.labels.tolist()):
            groups[lab].append(p)
        return groups


def pointed_moves(M: Bimodule, cells: Sequence[Cell]):
    """Pointed cells and every R1/R2 move instance between them.

    Returns ``(pointed_cell, pointed_arrow, left, right)`` as int arrays;
    ``(left[k], right[k])`` are the two sides of move ``k``.
    """
    cat = M.base
    tab = _tables(M)
    index = {c.digits: i for i, c in enumerate(cells)}
    first = []
    p_cell, p_arrow = [], []
    for i, c in enumerate(cells):
        first.append(len(p_cell))
        into = cat.arrows_into[c.innermost]
        p_cell.extend([i] * len(into))
        p_arrow.extend(into)
    pos_into = [{f: k for k, f in enumerate(into)} for into in cat.arrows_into]

    def pid(i, f):
        return first[i] + pos_into[cells[i].innermost][f]

    left, right = [], []
    for i, c in enumerate(cells):
        digits = c.digits
        n = len(digits)
        inner = c.innermost
        if n == 0:
            continue
        # R2
        prev = digits[-2][0] if n >= 2 else c.root
        b_n, m_n = digits[-1]
        for f in cat.arrows_into[inner]:
            for g, f2 in tab.factor[f]:
                src = cat.source(g)
                partner = digits[:-1] + ((src, M.rho[g][prev][m_n]),)
                j = index.get(partner)
                if j is None:
                    raise AssertionError(f"R2 partner missing: {partner}")
                left.append(pid(i, f))
                right.append(pid(j, f2))
        # R1
        for k in range(n - 1):
            a_k, m_k = digits[k]
            prev_k = digits[k - 1][0] if k > 0 else c.root
            b1, m1 = digits[k + 1]
            for g, src, m2 in tab.lam_pre[b1][a_k][m1]:
                partner = digits[:k] + ((src, M.rho[g][prev_k][m_k]), (b1, m2)) + digits[k + 2:]
                j = index.get(partner)
                if j is None:
                    raise AssertionError(f"R1 partner missing: {partner}")
                for f in cat.arrows_into[inner]:
                    left.append(pid(i, f))
                    right.append(pid(j, f))
    as_arr = lambda v: np.asarray(v, dtype=np.int64)
    return as_arr(p_cell), as_arr(p_arrow), as_arr(left), as_arr(right)


def pointed_classes(M: Bimodule, a: int, n: int, cells: Sequence[Cell] | None = None,
                    max_cells: int = DEFAULT_MAX_CELLS) -> PointedClasses:
    """Disjoint-set closure of the R1/R2 moves over all depth-n pointed cells."""
    if cells is None:
        cells = enumerate_cells(M, a, n, max_cells=max_cells)
    p_cell, p_arrow, left, right = pointed_moves(M, cells)
    labels = _kernel.partition(len(p_cell), left, right)
    k = int(labels.max()) + 1 if len(labels) else 0
    source = [0] * k
    for p, lab in enumerate(labels.tolist()):
        source[lab] = M.base.source(int(p_arrow[p]))
    return PointedClasses(a, n, tuple(cells), p_cell, p_arrow, labels, k, tuple(source))


@lru_cache(maxsize=64)
def _cached_classes(M: Bimodule, a: int, n: int) -> PointedClasses:
    return pointed_classes(M, a, n)


# -- touching graphs and depth models ------------------------------------

def _touching(PC: PointedClasses, owner_of_cell: np.ndarray):
    owner = owner_of_cell[PC.pointed_cell] if len(PC.pointed_cell) else PC.pointed_cell
    us, vs = _kernel.touching_pairs(owner, PC.labels, PC.n_classes)
    return list(zip(us.tolist(), vs.tolist()))


@dataclass(frozen=True)
class DepthModel:
    """Depth-n stand-in for the space at one root.

    ``top`` indexes the top cells inside ``classes.cells``; ``edges`` and
    ``truncation`` refer to positions in ``top`` (truncation into the
    previous depth's ``top``).
    """

    root: int
    depth: int
    classes: PointedClasses
    top: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    truncation: tuple[int, ...] | None
    components: int
    face_classes: int

    @property
    def cells(self) -> list[Cell]:
        return [self.classes.cells[i] for i in self.top]

    @property
    def n_cells(self) -> int:
        return len(self.top)

    def classes_with_source(self, b: int) -> int:
        return sum(1 for s in self.classes.class_source if s == b)

    def stats(self) -> dict:
        return {
            "depth": self.depth,
            "cells": self.n_cells,
            "point_classes": self.face_classes,
            "touch_edges": len(self.edges),
            "components": self.components,
        }


def touching_graph(M: Bimodule, a: int, n: int) -> tuple[list[Cell], list[tuple[int, int]]]:
    """Top cells at depth n and the edges between those that share a glued class."""
    model = depth_model(M, a, n)
    return model.cells, list(model.edges)


def depth_model(M: Bimodule, a: int, n: int, previous: DepthModel | None = None,
                max_cells: int = DEFAULT_MAX_CELLS) -> DepthModel:
    PC = _cached_classes(M, a, n) if max_cells == DEFAULT_MAX_CELLS else pointed_classes(M, a, n, max_cells=max_cells)
    top = [i for i, c in enumerate(PC.cells) if is_top_cell(M, c)]
    owner = np.full(len(PC.cells), -1, dtype=np.int64)
    owner[top] = np.arange(len(top))
    edges = _touching(PC, owner)
    if edges:
        e = np.array(edges, dtype=np.int64)
        comps = int(_kernel.partition(len(top), e[:, 0], e[:, 1]).max()) + 1
    else:
        comps = len(top)
    face = set()
    cat = M.base
    for p in range(PC.n_pointed):
        c = int(PC.pointed_cell[p])
        if owner[c] >= 0 and not cat.is_identity(int(PC.pointed_arrow[p])):
            face.add(int(PC.labels[p]))
    trunc = None
    if n > 0:
        if previous is None:
            previous = depth_model(M, a, n - 1, max_cells=max_cells)
        prev_index = {PC_cell.digits: k for k, PC_cell in enumerate(previous.cells)}
        trunc = tuple(prev_index[PC.cells[i].digits[:-1]] for i in top)
    return DepthModel(a, n, PC, tuple(top), tuple(edges), trunc, comps, len(face))


@dataclass(frozen=True)
class Approximation:
    models: tuple[DepthModel, ...]
    truncation_ok: bool
    compatibility_ok: bool

    def rows(self) -> list[dict]:
        return [m.stats() for m in self.models]


def approximate_space(M: Bimodule, a: int, n_max: int,
                      max_cells: int = DEFAULT_MAX_CELLS) -> Approximation:
    """Depth models ``0..n_max`` with truncation and touching-compatibility checks.

    On a resource-guard abort the ``ResourceLimitError`` carries the models
    built so far in ``partial``.
    """
    models = []
    prev = None
    trunc_ok = compat_ok = True
    for n in range(n_max + 1):
        try:
            model = depth_model(M, a, n, prev, max_cells=max_cells)
        except ResourceLimitError as exc:
            raise ResourceLimitError(str(exc), partial=tuple(models)) from None
        if n > 0:
            tr = model.truncation
            reachable = set(tr)
            trunc_ok &= len(tr) == model.n_cells and reachable <= set(range(prev.n_cells))
            prev_edges = set(prev.edges)
            for u, v in model.edges:
                tu, tv = tr[u], tr[v]
                if tu != tv and (min(tu, tv), max(tu, tv)) not in prev_edges:
                    compat_ok = False
        models.append(model)
        prev = model
    return Approximation(tuple(models), trunc_ok, compat_ok)


def is_discretely_separated(M: Bimodule, a: int, n: int) -> bool:
    """No two top cells touch at any depth up to ``n``."""
    return all(not depth_model(M, a, d).edges for d in range(n + 1))


# -- streams ------------------------------------------------------------------

@dataclass(frozen=True)
class StreamGenerator:
    """Eventually periodic digit stream: ``prefix`` then ``cycle`` forever."""

    prefix: tuple[tuple[int, int], ...]
    cycle: tuple[tuple[int, int], ...]

    def digits(self, n: int) -> tuple[tuple[int, int], ...]:
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.cycle[: n - len(out)])
        return tuple(out)


def validate_stream(M: Bimodule, a: int, s: StreamGenerator) -> list[Diagnostic]:
    diags = []
    if not s.cycle:
        return [Diagnostic("stream-cycle", "cycle must be nonempty")]
    cur = a
    for k, (b, m) in enumerate(s.prefix + s.cycle):
        if not (0 <= b < M.base.n_objects and 0 <= m < M.sizes[b][cur]):
            diags.append(Diagnostic("stream-digit", f"digit {k} is not in m(-,{M.base.objects[cur]})", (k,)))
            return diags
        cur = b
    start = s.prefix[-1][0] if s.prefix else a
    if cur != start:
        diags.append(Diagnostic("stream-cycle", "cycle does not return to its starting object", ()))
    return diags


def parse_stream(M: Bimodule, a: int, text: str) -> StreamGenerator:
    """Parse ``prefix:cycle`` with comma-separated digit labels."""
    if text.count(":") != 1:
        raise ValueError(f"stream {text!r} must have the form prefix:cycle")
    pre, cyc = text.split(":")
    labels = [x.strip() for x in pre.split(",") if x.strip()], [x.strip() for x in cyc.split(",") if x.strip()]
    cur = a
    parts = []
    for group in labels:
        digits = []
        for lab in group:
            hits = [(b, M.element_index(b, cur, lab)) for b in range(M.base.n_objects)
                    if lab in (M.labels[b][cur] if M.labels else ())]
            if len(hits) != 1:
                what = "unknown" if not hits else "ambiguous"
                raise ValueError(f"{what} digit {lab!r} at object {M.base.objects[cur]}")
            digits.append(hits[0])
            cur = hits[0][0]
        parts.append(tuple(digits))
    s = StreamGenerator(parts[0], parts[1])
    diags = validate_stream(M, a, s)
    if diags:
        raise ValueError(f"stream {text!r}: {diags[0].message}")
    return s


class StreamVerdict(NamedTuple):
    distinct: bool
    depth: int | None

    def __str__(self):
        return f"Distinct({self.depth})" if self.distinct else "Undistinguished"


def _linked(PC: PointedClasses, i: int, j: int, chain_bound: int) -> bool:
    if i == j:
        return True
    # adjacency over all cells, built once per partition
    groups = PC.__dict__.get("_cell_adj")
    if groups is None:
        owner = np.arange(len(PC.cells), dtype=np.int64)
        adj = [[] for _ in PC.cells]
        for u, v in _touching(PC, owner):
            adj[u].append(v)
            adj[v].append(u)
        PC.__dict__["_cell_adj"] = groups = adj
    seen = {i: 0}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        if seen[u] == chain_bound:
            continue
        for v in groups[u]:
            if v not in seen:
                if v == j:
                    return True
                seen[v] = seen[u] + 1
                queue.append(v)
    return False


def stream_equal_up_to(M: Bimodule, a: int, x: StreamGenerator, y: StreamGenerator,
                       n: int, chain_bound: int = 1) -> StreamVerdict:
    """``Distinct(d)`` for the first depth ``d <= n`` whose cells of ``x`` and
    ``y`` are not joined by a chain of at most ``chain_bound`` touchings."""
    for s in (x, y):
        diags = validate_stream(M, a, s)
        if diags:
            raise ValueError(diags[0].message)
    if chain_bound < 0:
        raise ValueError("chain_bound must be non-negative")
    for d in range(1, n + 1):
        dx, dy = x.digits(d), y.digits(d)
        if dx == dy:
            continue
        PC = _cached_classes(M, a, d)
        index = PC.__dict__.get("_index")
        if index is None:
            index = PC.__dict__["_index"] = {c.digits: i for i, c in enumerate(PC.cells)}
        if not _linked(PC, index[dx], index[dy], chain_bound):
            return StreamVerdict(True, d)
    return StreamVerdict(False, None)


# -- geometric realization ------------------------------------------------

@dataclass(frozen=True)
class Affine:
    """``p -> matrix @ p + offset`` in the plane."""

    matrix: tuple[tuple[float, float], tuple[float, float]]
    offset: tuple[float, float]

    @classmethod
    def identity(cls) -> "Affine":
        return cls(((1.0, 0.0), (0.0, 1.0)), (0.0, 0.0))

    @classmethod
    def constant(cls, point) -> "Affine":
        return cls(((0.0, 0.0), (0.0, 0.0)), (float(point[0]), float(point[1])))

    @classmethod
    def scale(cls, factor: float, offset=(0.0, 0.0)) -> "Affine":
        return cls(((factor, 0.0), (0.0, factor)), (float(offset[0]), float(offset[1])))

    @classmethod
    def from_points(cls, src, dst) -> "Affine":
        """Affine map sending the listed source points onto the destination points."""
        src = np.asarray(src, dtype=float)
        dst = np.asarray(dst, dtype=float)
        if len(src) == 1:
            return cls.constant(dst[0])
        X = np.hstack([src, np.ones((len(src), 1))])
        sol, *_ = np.linalg.lstsq(X, dst, rcond=None)
        A = sol[:2].T
        t = sol[2]
        return cls(tuple(tuple(float(v) for v in row) for row in A), (float(t[0]), float(t[1])))

    def as_arrays(self):
        return np.asarray(self.matrix, dtype=float), np.asarray(self.offset, dtype=float)

    def apply(self, points) -> np.ndarray:
        A, t = self.as_arrays()
        return np.asarray(points, dtype=float) @ A.T + t


@dataclass(frozen=True)
class RealizationHints:
    """Base shapes per object, embeddings per non-identity arrow, and one
    contraction per m-element, keyed by ids."""

    base: dict
    arrows: dict
    elements: dict


@dataclass(frozen=True)
class Realization:
    root: int
    depth: int
    cells: tuple[tuple[str, np.ndarray], ...]
    points: tuple[np.ndarray, ...]


def geometric_realization(M: Bimodule, a: int, n: int, hints: RealizationHints | None,
                          tol: float = REALIZATION_TOL) -> Realization:
    """Map depth-n top cells through composite contractions of their digits.

    Every glued class must land on one point set; violations raise
    ``RealizationError``.
    """
    if hints is None:
        raise RealizationError("no realization hints for this system")
    cat = M.base
    PC = _cached_classes(M, a, n)

    def chain_map(cell):
        A, t = np.eye(2), np.zeros(2)
        prev = cell.root
        for b, m in cell.digits:
            aff = hints.elements.get((b, prev, m))
            if aff is None:
                raise RealizationError(f"no hint for element {M.label(b, prev, m)} of m({cat.objects[b]},{cat.objects[prev]})")
            B, s = aff.as_arrays()
            A, t = A @ B, A @ s + t
            prev = b
        return A, t

    def base_points(obj):
        pts = hints.base.get(obj)
        if pts is None:
            raise RealizationError(f"no base shape for object {cat.objects[obj]}")
        return np.asarray(pts, dtype=float).reshape(-1, 2)

    maps = [chain_map(c) for c in PC.cells]
    images = [None] * PC.n_classes
    for p in range(PC.n_pointed):
        f = int(PC.pointed_arrow[p])
        src = cat.source(f)
        pts = base_points(src)
        if not cat.is_identity(f):
            aff = hints.arrows.get(f)
            if aff is None:
                raise RealizationError(f"no hint for arrow {cat.arrow_labels[f]}")
            pts = aff.apply(pts)
        A, t = maps[int(PC.pointed_cell[p])]
        img = pts @ A.T + t
        lab = int(PC.labels[p])
        if images[lab] is None:
            images[lab] = img
        elif images[lab].shape != img.shape or np.max(np.abs(images[lab] - img), initial=0.0) > tol:
            raise RealizationError(
                f"inconsistent hints: glued class {lab} lands at different coordinates "
                f"(cell {PC.cells[int(PC.pointed_cell[p])].label(M)} via {cat.arrow_labels[f]})")
    cells = []
    for c, (A, t) in zip(PC.cells, maps):
        if is_top_cell(M, c):
            cells.append((c.label(M), base_points(c.innermost) @ A.T + t))
    return Realization(a, n, tuple(cells), tuple(images))
