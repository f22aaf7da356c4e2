"""Finite categories, set-valued functors and their categories of elements.

Objects, arrows and carrier elements are dense integer ids; string labels
ride alongside for parsing and display.  Everything is immutable once built.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernel


@dataclass(frozen=True)
class Diagnostic:
    """One failed law, with the ids that witness the failure."""

    code: str
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class FinCategory:
    """A finite category given by explicit tables.

    ``arrows[f] = (source, target)``; ``compose_table[(g, f)]`` is ``g . f``
    (apply ``f`` first) for every composable pair.
    """

    objects: tuple[str, ...]
    arrows: tuple[tuple[int, int], ...]
    arrow_labels: tuple[str, ...]
    identities: tuple[int, ...]
    compose_table: Mapping[tuple[int, int], int] = field(repr=False)

    def __hash__(self):
        return hash((self.objects, self.arrows, self.arrow_labels, self.identities))

    # -- construction -------------------------------------------------
    @classmethod
    def build(cls, objects: Sequence[str], arrows=(), compose=None) -> "FinCategory":
        """Build from labels.

        ``arrows`` is an iterable of ``(name, source, target)`` for the
        non-identity arrows; ``compose`` maps ``(g_name, f_name)`` to the
        name of ``g . f`` and must cover every composable non-identity pair.
        Identities are added as ``id_<object>``.
        """
        objects = tuple(str(o) for o in objects)
        if len(set(objects)) != len(objects):
            raise ValueError("duplicate object labels")
        oid = {o: i for i, o in enumerate(objects)}
        labels = [f"id_{o}" for o in objects]
        ends = [(i, i) for i in range(len(objects))]
        for name, s, t in arrows:
            name = str(name)
            if name in labels:
                raise ValueError(f"duplicate arrow label {name!r}")
            try:
                ends.append((oid[str(s)], oid[str(t)]))
            except KeyError as exc:
                raise ValueError(f"arrow {name!r} references unknown object {exc.args[0]!r}") from None
            labels.append(name)
        aid = {a: i for i, a in enumerate(labels)}
        n_obj = len(objects)
        table = {}
        for f, (s, t) in enumerate(ends):
            table[(f, s)] = f          # f . id_s
            table[(t, f)] = f          # id_t . f
        for (g, f), h in (compose or {}).items():
            try:
                gi, fi, hi = aid[str(g)], aid[str(f)], aid[str(h)]
            except KeyError as exc:
                raise ValueError(f"composition references unknown arrow {exc.args[0]!r}") from None
            if ends[fi][1] != ends[gi][0]:
                raise ValueError(f"{g} . {f} is not composable")
            table[(gi, fi)] = hi
        for f, (_, t) in enumerate(ends):
            for g, (s2, _) in enumerate(ends):
                if s2 == t and (g, f) not in table:
                    raise ValueError(f"missing composite {labels[g]} . {labels[f]}")
        return cls(objects, tuple(ends), tuple(labels), tuple(range(n_obj)), table)

    @classmethod
    def discrete(cls, objects: Sequence[str]) -> "FinCategory":
        return cls.build(objects)

    @classmethod
    def free(cls, objects: Sequence[str], edges: Iterable[tuple[str, str, str]]) -> "FinCategory":
        """Free category on an acyclic graph; arrows are nonempty paths.

        Path arrows are labelled by their edge names joined with ``.``
        (outermost first, so ``g.f`` means ``f`` then ``g``).
        """
        objects = tuple(str(o) for o in objects)
        oid = {o: i for i, o in enumerate(objects)}
        edges = [(str(n), oid[str(s)], oid[str(t)]) for n, s, t in edges]
        paths = [((n,), s, t) for n, s, t in edges]
        frontier = list(paths)
        while frontier:
            grown = []
            for p, s, t in frontier:
                for n, s2, t2 in edges:
                    if s2 == t:
                        grown.append(((n,) + p, s, t2))
            if len(paths) + len(grown) > 10_000:
                raise ValueError("graph is not acyclic or path count too large")
            paths.extend(grown)
            frontier = grown
        name = {p: ".".join(p) for p, _, _ in paths}
        arrows = [(name[p], objects[s], objects[t]) for p, s, t in paths]
        compose = {}
        for pf, sf, tf in paths:
            for pg, sg, tg in paths:
                if sg == tf:
                    compose[(name[pg], name[pf])] = name[pg + pf]
        return cls.build(objects, arrows, compose)

    # -- queries ------------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def source(self, f: int) -> int:
        return self.arrows[f][0]

    def target(self, f: int) -> int:
        return self.arrows[f][1]

    def is_identity(self, f: int) -> bool:
        s, t = self.arrows[f]
        return s == t and self.identities[s] == f

    def compose(self, g: int, f: int) -> int:
        """``g . f``; raises ``ValueError`` if not composable."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise ValueError(f"arrows {self.arrow_labels[g]} . {self.arrow_labels[f]} not composable") from None

    @cached_property
    def _hom(self) -> dict:
        hom = {}
        for f, (s, t) in enumerate(self.arrows):
            hom.setdefault((s, t), []).append(f)
        return {k: tuple(v) for k, v in hom.items()}

    def hom(self, source: int, target: int) -> tuple[int, ...]:
        return self._hom.get((source, target), ())

    @cached_property
    def arrows_into(self) -> tuple[tuple[int, ...], ...]:
        into = [[] for _ in self.objects]
        for f, (_, t) in enumerate(self.arrows):
            into[t].append(f)
        return tuple(tuple(x) for x in into)

    @cached_property
    def arrows_out_of(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in self.objects]
        for f, (s, _) in enumerate(self.arrows):
            out[s].append(f)
        return tuple(tuple(x) for x in out)

    @cached_property
    def non_identity_arrows(self) -> tuple[int, ...]:
        return tuple(f for f in range(self.n_arrows) if not self.is_identity(f))

    def is_discrete(self) -> bool:
        return not self.non_identity_arrows

    def object_index(self, label: str) -> int:
        try:
            return self.objects.index(str(label))
        except ValueError:
            raise KeyError(f"unknown object {label!r}") from None

    def arrow_index(self, label: str) -> int:
        try:
            return self.arrow_labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown arrow {label!r}") from None

    # -- derived categories ------------------------------------------
    def opposite(self) -> "FinCategory":
        arrows = tuple((t, s) for s, t in self.arrows)
        table = {(f, g): h for (g, f), h in self.compose_table.items()}
        return FinCategory(self.objects, arrows, self.arrow_labels, self.identities, table)

    def product(self, other: "FinCategory") -> "FinCategory":
        """Pointwise product; object ``(i, j)`` has id ``i * |other| + j``."""
        n2 = other.n_objects
        objects = tuple(f"({a},{b})" for a in self.objects for b in other.objects)
        arrows = []
        labels = []
        na2 = other.n_arrows
        for f, (s1, t1) in enumerate(self.arrows):
            for g, (s2, t2) in enumerate(other.arrows):
                arrows.append((s1 * n2 + s2, t1 * n2 + t2))
                labels.append(f"({self.arrow_labels[f]},{other.arrow_labels[g]})")
        table = {}
        for (g1, f1), h1 in self.compose_table.items():
            for (g2, f2), h2 in other.compose_table.items():
                table[(g1 * na2 + g2, f1 * na2 + f2)] = h1 * na2 + h2
        identities = tuple(self.identities[i] * na2 + other.identities[j]
                           for i in range(self.n_objects) for j in range(n2))
        return FinCategory(objects, tuple(arrows), tuple(labels), identities, table)


def validate_category(cat: FinCategory) -> list[Diagnostic]:
    """Check totality, typing, unit and associativity laws of ``cat``."""
    diags = []
    n_obj, n_arr = cat.n_objects, cat.n_arrows
    if len(cat.identities) != n_obj:
        diags.append(Diagnostic("identity-missing", "identity table does not cover every object"))
        return diags
    for a, i in enumerate(cat.identities):
        if not (0 <= i < n_arr) or cat.arrows[i] != (a, a):
            diags.append(Diagnostic("identity-type", f"identity of {cat.objects[a]} is not an endo-arrow", (a, i)))
    if diags:
        return diags
    table = cat.compose_table
    for f, (s, t) in enumerate(cat.arrows):
        for g in cat.arrows_out_of[t]:
            h = table.get((g, f))
            if h is None:
                diags.append(Diagnostic("compose-missing", f"no composite for {cat.arrow_labels[g]} . {cat.arrow_labels[f]}", (g, f)))
            elif not (0 <= h < n_arr) or cat.arrows[h] != (s, cat.target(g)):
                diags.append(Diagnostic("compose-type", f"{cat.arrow_labels[g]} . {cat.arrow_labels[f]} lands outside hom({cat.objects[s]},{cat.objects[cat.target(g)]})", (g, f, h)))
    for (g, f) in table:
        if not (0 <= f < n_arr and 0 <= g < n_arr) or cat.target(f) != cat.source(g):
            diags.append(Diagnostic("compose-extra", "composite declared for a non-composable pair", (g, f)))
    if diags:
        return diags
    for f, (s, t) in enumerate(cat.arrows):
        if table[(f, cat.identities[s])] != f:
            diags.append(Diagnostic("unit-right", f"{cat.arrow_labels[f]} . id != {cat.arrow_labels[f]}", (f,)))
        if table[(cat.identities[t], f)] != f:
            diags.append(Diagnostic("unit-left", f"id . {cat.arrow_labels[f]} != {cat.arrow_labels[f]}", (f,)))
    for f in range(n_arr):
        for g in cat.arrows_out_of[cat.target(f)]:
            gf = table[(g, f)]
            for h in cat.arrows_out_of[cat.target(g)]:
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    diags.append(Diagnostic("associativity", f"(h.g).f != h.(g.f) for h={cat.arrow_labels[h]}, g={cat.arrow_labels[g]}, f={cat.arrow_labels[f]}", (h, g, f)))
    return diags


@dataclass(frozen=True)
class CoPresheaf:
    """A functor ``cat -> FinSet``; carrier of object ``a`` is ``range(sizes[a])``.

    ``actions[f][x]`` is the image of ``x`` under the function assigned to ``f``.
    """

    cat: FinCategory
    sizes: tuple[int, ...]
    actions: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[str, ...], ...] | None = field(default=None, compare=False)

    def __hash__(self):
        return hash((self.sizes, self.actions))

    @classmethod
    def build(cls, cat: FinCategory, carriers: Mapping, actions: Mapping | None = None) -> "CoPresheaf":
        """Build from labels, filling identities and composites.

        ``carriers`` maps object label to a list of element labels (or an
        int size); ``actions`` maps arrow label to ``{x_label: y_label}``.
        Missing non-identity actions are derived from composites where
        possible; any still missing raise ``ValueError``.
        """
        sizes, labels = [], []
        for o in cat.objects:
            c = carriers.get(o, 0)
            if isinstance(c, int):
                labs = tuple(str(i) for i in range(c))
            else:
                labs = tuple(str(x) for x in c)
            if len(set(labs)) != len(labs):
                raise ValueError(f"duplicate element labels in carrier of {o}")
            sizes.append(len(labs))
            labels.append(labs)
        idx = [{x: i for i, x in enumerate(labs)} for labs in labels]
        acts: list = [None] * cat.n_arrows
        for a, i in enumerate(cat.identities):
            acts[i] = tuple(range(sizes[a]))
        for name, table in (actions or {}).items():
            f = cat.arrow_index(name)
            s, t = cat.arrows[f]
            try:
                acts[f] = tuple(idx[t][str(table[x])] for x in labels[s])
            except KeyError as exc:
                raise ValueError(f"action of {name} incomplete or invalid at {exc.args[0]!r}") from None
        return cls(cat, tuple(sizes), _close_actions(cat, acts), tuple(labels))

    def carrier(self, a: int) -> range:
        return range(self.sizes[a])

    def act(self, f: int, x: int) -> int:
        return self.actions[f][x]

    def label(self, a: int, x: int) -> str:
        return self.labels[a][x] if self.labels else str(x)

    def relabel(self, perms: Sequence[Sequence[int]]) -> "CoPresheaf":
        """Isomorphic copy with element ``x`` of object ``a`` renamed ``perms[a][x]``."""
        acts = []
        for f, (s, t) in enumerate(self.cat.arrows):
            new = [0] * self.sizes[s]
            for x, y in enumerate(self.actions[f]):
                new[perms[s][x]] = perms[t][y]
            acts.append(tuple(new))
        return CoPresheaf(self.cat, self.sizes, tuple(acts))


def _close_actions(cat: FinCategory, acts: list) -> tuple:
    changed = True
    while changed and any(a is None for a in acts):
        changed = False
        for (g, f), h in cat.compose_table.items():
            if acts[h] is None and acts[g] is not None and acts[f] is not None:
                acts[h] = tuple(acts[g][y] for y in acts[f])
                changed = True
    missing = [cat.arrow_labels[f] for f, a in enumerate(acts) if a is None]
    if missing:
        raise ValueError(f"missing actions for arrows {missing}")
    return tuple(acts)


def constant_functor(cat: FinCategory, size: int = 1) -> CoPresheaf:
    return CoPresheaf(cat, (size,) * cat.n_objects, tuple(tuple(range(size)) for _ in cat.arrows))


def representable(cat: FinCategory, c: int) -> CoPresheaf:
    """``cat(c, -)``: elements of object ``a`` are the arrows ``c -> a``."""
    homs = [cat.hom(c, a) for a in range(cat.n_objects)]
    pos = [{f: i for i, f in enumerate(h)} for h in homs]
    acts = []
    for g, (s, t) in enumerate(cat.arrows):
        acts.append(tuple(pos[t][cat.compose(g, f)] for f in homs[s]))
    labels = tuple(tuple(cat.arrow_labels[f] for f in h) for h in homs)
    return CoPresheaf(cat, tuple(len(h) for h in homs), tuple(acts), labels)


def coproduct(*functors: CoPresheaf) -> CoPresheaf:
    """Disjoint union; summand ``k`` occupies a contiguous block per object."""
    cat = functors[0].cat
    sizes = [0] * cat.n_objects
    offsets = []
    for X in functors:
        offsets.append(tuple(sizes))
        sizes = [s + n for s, n in zip(sizes, X.sizes)]
    acts = []
    for f, (s, t) in enumerate(cat.arrows):
        acts.append(tuple(off[t] + y for X, off in zip(functors, offsets) for y in X.actions[f]))
    return CoPresheaf(cat, tuple(sizes), tuple(acts))


def validate_functor(cat: FinCategory, X: CoPresheaf) -> list[Diagnostic]:
    """Structural checks then the functor laws."""
    diags = []
    if len(X.sizes) != cat.n_objects:
        return [Diagnostic("structure", "carrier table does not match object count")]
    if len(X.actions) != cat.n_arrows:
        return [Diagnostic("structure", "action table does not match arrow count")]
    for f, (s, t) in enumerate(cat.arrows):
        act = X.actions[f]
        if act is None or len(act) != X.sizes[s]:
            diags.append(Diagnostic("structure", f"action of {cat.arrow_labels[f]} is not total on carrier({cat.objects[s]})", (f,)))
        elif any(not (0 <= y < X.sizes[t]) for y in act):
            diags.append(Diagnostic("structure", f"action of {cat.arrow_labels[f]} leaves carrier({cat.objects[t]})", (f,)))
    if diags:
        return diags
    for a, i in enumerate(cat.identities):
        if X.actions[i] != tuple(range(X.sizes[a])):
            diags.append(Diagnostic("identity", f"identity on {cat.objects[a]} acts non-trivially", (i,)))
    for (g, f), h in cat.compose_table.items():
        for x in range(X.sizes[cat.source(f)]):
            if X.actions[h][x] != X.actions[g][X.actions[f][x]]:
                diags.append(Diagnostic("composition", f"X({cat.arrow_labels[g]}.{cat.arrow_labels[f]}) != X({cat.arrow_labels[g]}) X({cat.arrow_labels[f]})", (g, f, x)))
                break
    return diags


@dataclass(frozen=True)
class NatTransformation:
    """``components[a][x]`` is the image in ``target`` of ``x`` in ``source``."""

    source: CoPresheaf
    target: CoPresheaf
    components: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, X: CoPresheaf) -> "NatTransformation":
        return cls(X, X, tuple(tuple(range(n)) for n in X.sizes))

    def then(self, other: "NatTransformation") -> "NatTransformation":
        """``other . self``."""
        comps = tuple(tuple(other.components[a][y] for y in comp)
                      for a, comp in enumerate(self.components))
        return NatTransformation(self.source, other.target, comps)


def validate_nat(alpha: NatTransformation) -> list[Diagnostic]:
    X, Y = alpha.source, alpha.target
    cat = X.cat
    diags = []
    if len(alpha.components) != cat.n_objects:
        return [Diagnostic("structure", "component table does not match object count")]
    for a, comp in enumerate(alpha.components):
        if len(comp) != X.sizes[a] or any(not (0 <= y < Y.sizes[a]) for y in comp):
            diags.append(Diagnostic("structure", f"component at {cat.objects[a]} is not a function", (a,)))
    if diags:
        return diags
    for f, (s, t) in enumerate(cat.arrows):
        for x in range(X.sizes[s]):
            if alpha.components[t][X.actions[f][x]] != Y.actions[f][alpha.components[s][x]]:
                diags.append(Diagnostic("naturality", f"square for {cat.arrow_labels[f]} fails", (f, x)))
                break
    return diags


@dataclass(frozen=True)
class ElementsCategory:
    """Category of elements with projections back to the base."""

    category: FinCategory
    base_object: tuple[int, ...]
    base_element: tuple[int, ...]
    base_arrow: tuple[int, ...]

    def element(self, e: int) -> tuple[int, int]:
        return self.base_object[e], self.base_element[e]


def category_of_elements(cat: FinCategory, X: CoPresheaf) -> ElementsCategory:
    obj_id = {}
    base_obj, base_el = [], []
    for a in range(cat.n_objects):
        for x in range(X.sizes[a]):
            obj_id[(a, x)] = len(base_obj)
            base_obj.append(a)
            base_el.append(x)
    arrow_id = {}
    ends, labels, base_arrow = [], [], []
    for f, (s, t) in enumerate(cat.arrows):
        for x in range(X.sizes[s]):
            arrow_id[(f, x)] = len(ends)
            ends.append((obj_id[(s, x)], obj_id[(t, X.actions[f][x])]))
            labels.append(f"{cat.arrow_labels[f]}@{X.label(s, x)}")
            base_arrow.append(f)
    table = {}
    for (g, f), h in cat.compose_table.items():
        for x in range(X.sizes[cat.source(f)]):
            table[(arrow_id[(g, X.actions[f][x])], arrow_id[(f, x)])] = arrow_id[(h, x)]
    identities = tuple(arrow_id[(cat.identities[a], x)] for a, x in zip(base_obj, base_el))
    objects = tuple(f"({cat.objects[a]},{X.label(a, x)})" for a, x in zip(base_obj, base_el))
    el = FinCategory(objects, tuple(ends), tuple(labels), identities, table)
    return ElementsCategory(el, tuple(base_obj), tuple(base_el), tuple(base_arrow))


def connected_components(cat: FinCategory) -> list[list[int]]:
    """Object partition under the zig-zag relation, ordered by least member."""
    n = cat.n_objects
    if n == 0:
        return []
    ends = np.array(cat.arrows, dtype=np.int64).reshape(-1, 2)
    labels = _kernel.partition(n, ends[:, 0], ends[:, 1])
    comps = [[] for _ in range(int(labels.max()) + 1)]
    for i, lab in enumerate(labels.tolist()):
        comps[lab].append(i)
    return comps


def cofiltered_failure(cat: FinCategory, objects: Sequence[int] | None = None):
    """First violated cofilteredness condition on the full subcategory ``objects``.

    Returns ``None`` when cofiltered, else ``(kind, witness)`` with kind one
    of ``"empty"``, ``"pair"`` (two objects with no common source) or
    ``"parallel"`` (two arrows ``u, v: e -> e'`` with no ``w`` such that
    ``u.w = v.w``).  ``objects`` should be a union of components.
    """
    objs = list(range(cat.n_objects)) if objects is None else list(objects)
    if not objs:
        return ("empty", ())
    reach = {e: {cat.target(f) for f in cat.arrows_out_of[e]} for e in objs}
    for x, y in itertools.combinations(objs, 2):
        if not any(x in r and y in r for r in reach.values()):
            return ("pair", (x, y))
    for e in objs:
        out = cat.arrows_out_of[e]
        for u, v in itertools.combinations(out, 2):
            if cat.target(u) != cat.target(v):
                continue
            if not any(cat.compose(u, w) == cat.compose(v, w) for w in cat.arrows_into[e]):
                return ("parallel", (u, v))
    return None


def is_cofiltered(cat: FinCategory) -> bool:
    return cofiltered_failure(cat) is None
