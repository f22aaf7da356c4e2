"""Built-in self-similarity systems and the product combinator.

Each constructor returns a validated :class:`~selfsim.bimodule.Bimodule`;
``hints(name)`` gives planar realization data where a picture makes sense.
"""
from __future__ import annotations

import math

from .approximator import Affine, RealizationHints
from .bimodule import Bimodule, validate_bimodule
from .fincat import FinCategory


def singleton_system() -> Bimodule:
    """One object, identity only, ``m = {*}``; its solution is the point."""
    cat = FinCategory.build(["pt"])
    return Bimodule.build(cat, {("pt", "pt"): ["*"]}, name="singleton")


def freyd_system() -> Bimodule:
    """The interval as two halves glued end to end.

    ``inf`` and ``sup`` are the two endpoint arrows ``0 -> 1``.
    """
    cat = FinCategory.build(["0", "1"], [("inf", "0", "1"), ("sup", "0", "1")])
    return Bimodule.build(
        cat,
        {("0", "0"): ["*"], ("0", "1"): ["0", "1/2", "1"], ("1", "1"): ["L", "R"]},
        rho={("inf", "1"): {"L": "0", "R": "1/2"},
             ("sup", "1"): {"L": "1/2", "R": "1"}},
        lam={("inf", "0"): {"*": "0"}, ("sup", "0"): {"*": "1"}},
        name="freyd",
    )


def cantor_system() -> Bimodule:
    """Two disjoint copies of itself over the one-object discrete category."""
    cat = FinCategory.discrete(["C"])
    return Bimodule.build(cat, {("C", "C"): ["L", "R"]}, name="cantor")


def sierpinski_system() -> Bimodule:
    """Three half-size copies meeting pairwise at edge midpoints.

    ``m(p, g)`` holds the three outer corners ``v0..v2`` and the three glue
    points ``e01, e02, e12``; corner ``j`` of copy ``Tk`` is ``vk`` when
    ``j == k`` and the midpoint ``e{jk}`` otherwise.
    """
    cat = FinCategory.build(["p", "g"], [(f"c{j}", "p", "g") for j in range(3)])
    mids = {frozenset((0, 1)): "e01", frozenset((0, 2)): "e02", frozenset((1, 2)): "e12"}
    rho = {}
    for j in range(3):
        rho[(f"c{j}", "g")] = {f"T{k}": (f"v{k}" if j == k else mids[frozenset((j, k))]) for k in range(3)}
    lam = {(f"c{j}", "p"): {"*": f"v{j}"} for j in range(3)}
    return Bimodule.build(
        cat,
        {("p", "p"): ["*"], ("p", "g"): ["v0", "v1", "v2", "e01", "e02", "e12"],
         ("g", "g"): ["T0", "T1", "T2"]},
        rho=rho, lam=lam, name="sierpinski",
    )


# Barycentric subdivision of the triangle.  Small triangles and segments list
# their vertices in this global order, so every shared edge gets one
# orientation and each boundary half-edge runs in the direction of its edge.
_SUBDIVISION_ORDER = ["V0", "M01", "M02", "V1", "M12", "V2", "B"]
_EDGES = [(0, 1), (0, 2), (1, 2)]


def _sorted_vertices(vs):
    return tuple(sorted(vs, key=_SUBDIVISION_ORDER.index))


def _subdivision():
    triangles = []
    for i, j in _EDGES:
        for v in (i, j):
            triangles.append(_sorted_vertices((f"V{v}", f"M{i}{j}", "B")))
    triangles.sort(key=lambda t: [_SUBDIVISION_ORDER.index(v) for v in t])
    segments = set()
    for t in triangles:
        for k, l in _EDGES:
            segments.add((t[k], t[l]))
    segments = sorted(segments, key=lambda s: [_SUBDIVISION_ORDER.index(v) for v in s])
    return triangles, segments


def simplex_system(dim: int) -> Bimodule:
    """Barycentric self-similarity of the standard ``dim``-simplex, ``dim <= 2``."""
    if dim < 0 or dim > 2:
        raise ValueError("simplex_system supports dimensions 0, 1 and 2 only")
    if dim == 0:
        return _renamed(singleton_system(), "simplex0")
    if dim == 1:
        cat = FinCategory.build(["pt", "seg"], [("d0", "pt", "seg"), ("d1", "pt", "seg")])
        return Bimodule.build(
            cat,
            {("pt", "pt"): ["*"], ("pt", "seg"): ["V0", "M01", "V1"], ("seg", "seg"): ["V0-M01", "M01-V1"]},
            rho={("d0", "seg"): {"V0-M01": "V0", "M01-V1": "M01"},
                 ("d1", "seg"): {"V0-M01": "M01", "M01-V1": "V1"}},
            lam={("d0", "pt"): {"*": "V0"}, ("d1", "pt"): {"*": "V1"}},
            name="simplex1",
        )
    arrows = [("d0", "pt", "seg"), ("d1", "pt", "seg")]
    arrows += [(f"e{i}{j}", "seg", "tri") for i, j in _EDGES]
    arrows += [(f"v{k}", "pt", "tri") for k in range(3)]
    compose = {}
    for i, j in _EDGES:
        compose[(f"e{i}{j}", "d0")] = f"v{i}"
        compose[(f"e{i}{j}", "d1")] = f"v{j}"
    cat = FinCategory.build(["pt", "seg", "tri"], arrows, compose)
    triangles, segments = _subdivision()
    tri_label = ["-".join(t) for t in triangles]
    seg_label = {s: "-".join(s) for s in segments}
    elements = {
        ("pt", "pt"): ["*"],
        ("pt", "seg"): ["0", "1/2", "1"],
        ("seg", "seg"): ["L", "R"],
        ("pt", "tri"): list(_SUBDIVISION_ORDER),
        ("seg", "tri"): [seg_label[s] for s in segments],
        ("tri", "tri"): tri_label,
    }
    rho = {
        ("d0", "seg"): {"L": "0", "R": "1/2"},
        ("d1", "seg"): {"L": "1/2", "R": "1"},
        ("d0", "tri"): {seg_label[s]: s[0] for s in segments},
        ("d1", "tri"): {seg_label[s]: s[1] for s in segments},
    }
    for k in range(3):
        rho[(f"v{k}", "tri")] = {lab: t[k] for lab, t in zip(tri_label, triangles)}
    for i, j in _EDGES:
        rho[(f"e{i}{j}", "tri")] = {lab: seg_label[(t[i], t[j])] for lab, t in zip(tri_label, triangles)}
    lam = {("d0", "pt"): {"*": "0"}, ("d1", "pt"): {"*": "1"}}
    for k in range(3):
        lam[(f"v{k}", "pt")] = {"*": f"V{k}"}
    for i, j in _EDGES:
        lam[(f"e{i}{j}", "pt")] = {"0": f"V{i}", "1/2": f"M{i}{j}", "1": f"V{j}"}
        lam[(f"e{i}{j}", "seg")] = {"L": seg_label[(f"V{i}", f"M{i}{j}")], "R": seg_label[(f"M{i}{j}", f"V{j}")]}
    return Bimodule.build(cat, elements, rho, lam, name="simplex2")


def julia_system() -> Bimodule:
    """The four-space system of the Julia set of ``z -> (2z / (1 + z^2))^2``.

    Objects ``0..3`` index the point and the spaces ``I1, I2, I3``.  Arrows
    ``a1..a4: 0 -> 2`` and ``b1..b4: 0 -> 3`` are the marked points of
    ``I2`` and ``I3``; ``I1`` has none.  ``m(0, a)`` lists every distinct
    point of the glued picture for ``a`` (boundary points ``b*``/``c*`` and
    glue points), which is how ``|m(0, 2)| = 8`` arises.  Readings of the
    figures:

    * ``I1``: copies ``top`` and ``bot`` of ``I2`` glued point-by-point at
      their four marked points ``q1..q4``.
    * ``I2``: copies ``left``, ``right`` of ``I2`` and ``mid`` of ``I3``.
      Boundary ``b1 = left.1``, ``b2 = mid.1``, ``b3 = mid.4``,
      ``b4 = right.1``; glue ``g1 = left.2 = mid.2``,
      ``g2 = right.2 = mid.3``, ``g3 = left.3 = right.3``,
      ``g4 = left.4 = right.4``.
    * ``I3``: copies ``left``, ``right`` of ``I3``.  Boundary
      ``c1 = left.2``, ``c2 = left.3``, ``c3 = right.3``, ``c4 = right.2``;
      glue ``h1 = left.1 = right.1``, ``h4 = left.4 = right.4``.
    """
    arrows = [(f"a{i}", "0", "2") for i in range(1, 5)] + [(f"b{i}", "0", "3") for i in range(1, 5)]
    cat = FinCategory.build(["0", "1", "2", "3"], arrows)
    elements = {
        ("0", "0"): ["*"],
        ("0", "1"): ["q1", "q2", "q3", "q4"],
        ("2", "1"): ["top", "bot"],
        ("0", "2"): ["b1", "b2", "b3", "b4", "g1", "g2", "g3", "g4"],
        ("2", "2"): ["left", "right"],
        ("3", "2"): ["mid"],
        ("0", "3"): ["c1", "c2", "c3", "c4", "h1", "h4"],
        ("3", "3"): ["left", "right"],
    }
    rho = {}
    for i in range(1, 5):
        rho[(f"a{i}", "1")] = {"top": f"q{i}", "bot": f"q{i}"}
    left2 = {1: "b1", 2: "g1", 3: "g3", 4: "g4"}
    right2 = {1: "b4", 2: "g2", 3: "g3", 4: "g4"}
    mid = {1: "b2", 2: "g1", 3: "g2", 4: "b3"}
    left3 = {1: "h1", 2: "c1", 3: "c2", 4: "h4"}
    right3 = {1: "h1", 2: "c4", 3: "c3", 4: "h4"}
    for i in range(1, 5):
        rho[(f"a{i}", "2")] = {"left": left2[i], "right": right2[i]}
        rho[(f"b{i}", "2")] = {"mid": mid[i]}
        rho[(f"b{i}", "3")] = {"left": left3[i], "right": right3[i]}
    lam = {}
    for i in range(1, 5):
        lam[(f"a{i}", "0")] = {"*": f"b{i}"}
        lam[(f"b{i}", "0")] = {"*": f"c{i}"}
    return Bimodule.build(cat, elements, rho, lam, name="julia")


def product_system(M1: Bimodule, M2: Bimodule) -> Bimodule:
    """Pointwise product: ``m((b1,b2),(a1,a2)) = m1(b1,a1) x m2(b2,a2)``.

    Object ``(i, j)`` gets id ``i * n2 + j``, arrow ``(f, g)`` id
    ``f * |arrows2| + g`` and element ``(x, y)`` index ``x * |m2| + y``.
    """
    c1, c2 = M1.base, M2.base
    cat = c1.product(c2)
    n1, n2 = c1.n_objects, c2.n_objects
    na2 = c2.n_arrows

    def obj(i, j):
        return i * n2 + j

    pairs = [(i, j) for i in range(n1) for j in range(n2)]
    sizes = tuple(tuple(M1.sizes[b1][a1] * M2.sizes[b2][a2] for (a1, a2) in pairs) for (b1, b2) in pairs)
    labels = tuple(
        tuple(tuple(f"({M1.label(b1, a1, x)},{M2.label(b2, a2, y)})"
                    for x in range(M1.sizes[b1][a1]) for y in range(M2.sizes[b2][a2]))
              for (a1, a2) in pairs)
        for (b1, b2) in pairs)

    def pair_map(t1, t2, size2):
        return tuple(x * size2 + y for x in t1 for y in t2)

    rho = [None] * cat.n_arrows
    lam = [None] * cat.n_arrows
    for f1, (s1, _) in enumerate(c1.arrows):
        for f2, (s2, _) in enumerate(c2.arrows):
            fid = f1 * na2 + f2
            rho[fid] = tuple(pair_map(M1.rho[f1][a1], M2.rho[f2][a2], M2.sizes[s2][a2]) for (a1, a2) in pairs)
            lam[fid] = tuple(pair_map(M1.lam[f1][b1], M2.lam[f2][b2], M2.sizes[b2][c2.target(f2)]) for (b1, b2) in pairs)
    name = f"{M1.name or 'M1'}x{M2.name or 'M2'}"
    return Bimodule(cat, sizes, tuple(rho), tuple(lam), labels, name=name)


def is_bimodule_isomorphism(M1: Bimodule, M2: Bimodule, objects, arrows, elements) -> bool:
    """Check explicit maps are an isomorphism of systems.

    ``objects[b]`` and ``arrows[f]`` relabel the base; ``elements[(b, a)][m]``
    is the image of ``m`` in ``m2(objects[b], objects[a])``.
    """
    c1, c2 = M1.base, M2.base
    if c1.n_objects != c2.n_objects or c1.n_arrows != c2.n_arrows:
        return False
    if sorted(objects) != list(range(c2.n_objects)) or sorted(arrows) != list(range(c2.n_arrows)):
        return False
    for f, (s, t) in enumerate(c1.arrows):
        if c2.arrows[arrows[f]] != (objects[s], objects[t]):
            return False
    for (g, f), h in c1.compose_table.items():
        if c2.compose_table.get((arrows[g], arrows[f])) != arrows[h]:
            return False
    n = c1.n_objects
    for b in range(n):
        for a in range(n):
            e = elements.get((b, a), ())
            if sorted(e) != list(range(M2.sizes[objects[b]][objects[a]])) or len(e) != M1.sizes[b][a]:
                return False
    for f, (s, t) in enumerate(c1.arrows):
        for a in range(n):
            for m in range(M1.sizes[t][a]):
                if elements[(s, a)][M1.rho[f][a][m]] != M2.rho[arrows[f]][objects[a]][elements[(t, a)][m]]:
                    return False
            for m in range(M1.sizes[a][s]):
                if elements[(a, t)][M1.lam[f][a][m]] != M2.lam[arrows[f]][objects[a]][elements[(a, s)][m]]:
                    return False
    return True


def same_up_to_relabeling(M1: Bimodule, M2: Bimodule) -> bool:
    """Isomorphic via the maps that match objects, arrows and elements by label
    (identities are matched by their objects)."""
    c1, c2 = M1.base, M2.base
    if c1.n_objects != c2.n_objects or c1.n_arrows != c2.n_arrows:
        return False
    try:
        objects = [c2.object_index(o) for o in c1.objects]
        ids1 = set(c1.identities)
        arrows = [c2.identities[objects[c1.source(f)]] if f in ids1 else c2.arrow_index(c1.arrow_labels[f])
                  for f in range(c1.n_arrows)]
        elements = {(b, a): [M2.element_index(objects[b], objects[a], M1.label(b, a, m))
                             for m in range(M1.sizes[b][a])]
                    for b in range(c1.n_objects) for a in range(c1.n_objects)}
    except KeyError:
        return False
    return is_bimodule_isomorphism(M1, M2, objects, arrows, elements)


# -- realization hints --------------------------------------------------

_TRIANGLE = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2))


def _mid(p, q):
    return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def hints(name: str, M: Bimodule | None = None) -> RealizationHints | None:
    """Planar realization hints for a gallery system, or ``None``."""
    M = M if M is not None else GALLERY[name]()
    cat = M.base
    ob, ar = cat.object_index, cat.arrow_index

    def el(b, a, lab):
        bi, ai = ob(b), ob(a)
        return (bi, ai, M.element_index(bi, ai, lab))

    if name in ("freyd", "simplex1"):
        p, s = ("0", "1") if name == "freyd" else ("pt", "seg")
        lo, hi = ("inf", "sup") if name == "freyd" else ("d0", "d1")
        pts = ["0", "1/2", "1"] if name == "freyd" else ["V0", "M01", "V1"]
        halves = ["L", "R"] if name == "freyd" else ["V0-M01", "M01-V1"]
        elements = {el(p, p, "*"): Affine.identity()}
        for lab, x in zip(pts, (0.0, 0.5, 1.0)):
            elements[el(p, s, lab)] = Affine.constant((x, 0.0))
        elements[el(s, s, halves[0])] = Affine.scale(0.5)
        elements[el(s, s, halves[1])] = Affine.scale(0.5, (0.5, 0.0))
        return RealizationHints(
            base={ob(p): ((0.0, 0.0),), ob(s): ((0.0, 0.0), (1.0, 0.0))},
            arrows={ar(lo): Affine.constant((0.0, 0.0)), ar(hi): Affine.constant((1.0, 0.0))},
            elements=elements,
        )
    if name == "cantor":
        return RealizationHints(
            base={0: ((0.0, 0.0), (1.0, 0.0))},
            arrows={},
            elements={el("C", "C", "L"): Affine.scale(1 / 3),
                      el("C", "C", "R"): Affine.scale(1 / 3, (2 / 3, 0.0))},
        )
    if name == "sierpinski":
        V = _TRIANGLE
        elements = {el("p", "p", "*"): Affine.identity()}
        for k in range(3):
            elements[el("p", "g", f"v{k}")] = Affine.constant(V[k])
            elements[el("g", "g", f"T{k}")] = Affine.scale(0.5, (V[k][0] / 2, V[k][1] / 2))
        for i, j in _EDGES:
            elements[el("p", "g", f"e{i}{j}")] = Affine.constant(_mid(V[i], V[j]))
        return RealizationHints(
            base={ob("p"): ((0.0, 0.0),), ob("g"): V},
            arrows={ar(f"c{k}"): Affine.constant(V[k]) for k in range(3)},
            elements=elements,
        )
    if name == "simplex2":
        V = _TRIANGLE
        coords = {f"V{k}": V[k] for k in range(3)}
        for i, j in _EDGES:
            coords[f"M{i}{j}"] = _mid(V[i], V[j])
        coords["B"] = (sum(v[0] for v in V) / 3, sum(v[1] for v in V) / 3)
        seg = ((0.0, 0.0), (1.0, 0.0))
        elements = {el("pt", "pt", "*"): Affine.identity(),
                    el("seg", "seg", "L"): Affine.scale(0.5),
                    el("seg", "seg", "R"): Affine.scale(0.5, (0.5, 0.0))}
        for lab, x in zip(("0", "1/2", "1"), (0.0, 0.5, 1.0)):
            elements[el("pt", "seg", lab)] = Affine.constant((x, 0.0))
        tri, pt, sg = ob("tri"), ob("pt"), ob("seg")
        for m, lab in enumerate(M.labels[pt][tri]):
            elements[(pt, tri, m)] = Affine.constant(coords[lab])
        for m, lab in enumerate(M.labels[sg][tri]):
            q = [coords[v] for v in lab.split("-")]
            elements[(sg, tri, m)] = Affine.from_points(seg, q)
        for m, lab in enumerate(M.labels[tri][tri]):
            q = [coords[v] for v in lab.split("-")]
            elements[(tri, tri, m)] = Affine.from_points(V, q)
        arrows_h = {ar("d0"): Affine.constant((0.0, 0.0)), ar("d1"): Affine.constant((1.0, 0.0))}
        for k in range(3):
            arrows_h[ar(f"v{k}")] = Affine.constant(V[k])
        for i, j in _EDGES:
            arrows_h[ar(f"e{i}{j}")] = Affine.from_points(seg, (V[i], V[j]))
        return RealizationHints(base={pt: ((0.0, 0.0),), sg: seg, tri: V}, arrows=arrows_h, elements=elements)
    return None


def _renamed(M: Bimodule, name: str) -> Bimodule:
    return Bimodule(M.base, M.sizes, M.rho, M.lam, M.labels, name=name)


GALLERY = {
    "singleton": singleton_system,
    "freyd": freyd_system,
    "cantor": cantor_system,
    "sierpinski": sierpinski_system,
    "julia": julia_system,
    "simplex1": lambda: simplex_system(1),
    "simplex2": lambda: simplex_system(2),
    "square": lambda: _renamed(product_system(freyd_system(), freyd_system()), "square"),
}


def load(name: str) -> tuple[Bimodule, RealizationHints | None]:
    """Gallery system by name with its hints."""
    try:
        M = GALLERY[name]()
    except KeyError:
        raise KeyError(f"unknown gallery system {name!r}; choose from {sorted(GALLERY)}") from None
    assert not validate_bimodule(M), name
    return M, hints(name, M)
