"""Bimodules ``M: A^op x A -> FinSet``, the tensor product ``M (x) X``, and
the gluing endofunctor ``G = M (x) -`` on set-valued functors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from . import _kernel
from .errors import ResourceLimitError
from .fincat import CoPresheaf, Diagnostic, FinCategory, NatTransformation

DEFAULT_MAX_ATOMS = 2_000_000


@dataclass(frozen=True)
class Bimodule:
    """Gluing data over a finite base category.

    ``sizes[b][a] = |m(b, a)|``, the copies of space ``b`` used to build
    space ``a``.  For an arrow ``f: b' -> b``, ``rho[f][a]`` maps
    ``m(b, a) -> m(b', a)`` (which marked point of the copy is meant); for
    ``g: a -> a'``, ``lam[g][b]`` maps ``m(b, a) -> m(b, a')``.
    """

    base: FinCategory
    sizes: tuple[tuple[int, ...], ...]
    rho: tuple[tuple[tuple[int, ...], ...], ...]
    lam: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple[tuple[tuple[str, ...], ...], ...] | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __hash__(self):
        return hash((self.sizes, self.rho, self.lam))

    @classmethod
    def build(cls, base: FinCategory, elements: Mapping, rho: Mapping | None = None,
              lam: Mapping | None = None, name: str = "") -> "Bimodule":
        """Build from labels.

        ``elements[(b, a)]`` lists the labels of ``m(b, a)`` (absent pairs
        are empty).  ``rho[(f, a)]`` and ``lam[(g, b)]`` are label dicts.
        Identity actions are implicit and actions of composites are derived
        when not given.
        """
        n = base.n_objects
        labels = [[() for _ in range(n)] for _ in range(n)]
        for (b, a), labs in elements.items():
            bi, ai = base.object_index(b), base.object_index(a)
            labs = tuple(str(x) for x in labs)
            if len(set(labs)) != len(labs):
                raise ValueError(f"duplicate element labels in m({b},{a})")
            labels[bi][ai] = labs
        index = [[{x: i for i, x in enumerate(labels[b][a])} for a in range(n)] for b in range(n)]
        sizes = tuple(tuple(len(labels[b][a]) for a in range(n)) for b in range(n))

        rho_t: list = [[None] * n for _ in range(base.n_arrows)]
        lam_t: list = [[None] * n for _ in range(base.n_arrows)]
        for c, i in enumerate(base.identities):
            for a in range(n):
                rho_t[i][a] = tuple(range(sizes[c][a]))
                lam_t[i][a] = tuple(range(sizes[a][c]))
        for f, (s, t) in enumerate(base.arrows):
            for a in range(n):
                if sizes[t][a] == 0:
                    rho_t[f][a] = ()
                if sizes[a][s] == 0:
                    lam_t[f][a] = ()
        for (f_lab, a_lab), table in (rho or {}).items():
            f, a = base.arrow_index(f_lab), base.object_index(a_lab)
            s, t = base.arrows[f]
            rho_t[f][a] = _lookup_table(table, labels[t][a], index[s][a], f"rho({f_lab}) on m({base.objects[t]},{a_lab})")
        for (g_lab, b_lab), table in (lam or {}).items():
            g, b = base.arrow_index(g_lab), base.object_index(b_lab)
            s, t = base.arrows[g]
            lam_t[g][b] = _lookup_table(table, labels[b][s], index[b][t], f"lam({g_lab}) on m({b_lab},{base.objects[s]})")
        _close_bimodule(base, rho_t, lam_t)
        for f in range(base.n_arrows):
            for a in range(n):
                if rho_t[f][a] is None:
                    raise ValueError(f"missing rho({base.arrow_labels[f]}) on m({base.objects[base.target(f)]},{base.objects[a]})")
                if lam_t[f][a] is None:
                    raise ValueError(f"missing lam({base.arrow_labels[f]}) on m({base.objects[a]},{base.objects[base.source(f)]})")
        return cls(base, sizes,
                   tuple(tuple(r) for r in rho_t), tuple(tuple(r) for r in lam_t),
                   tuple(tuple(tuple(x) for x in row) for row in labels), name)

    def m(self, b: int, a: int) -> int:
        return self.sizes[b][a]

    def label(self, b: int, a: int, m: int) -> str:
        return self.labels[b][a][m] if self.labels else str(m)

    def element_index(self, b: int, a: int, label: str) -> int:
        labs = self.labels[b][a] if self.labels else tuple(str(i) for i in range(self.sizes[b][a]))
        try:
            return labs.index(str(label))
        except ValueError:
            raise KeyError(f"no element {label!r} in m({self.base.objects[b]},{self.base.objects[a]})") from None

    def covariant_slice(self, b: int) -> CoPresheaf:
        """The functor ``M(b, -)``: ``a -> m(b, a)`` acted on by ``lam``."""
        cat = self.base
        acts = tuple(self.lam[g][b] for g in range(cat.n_arrows))
        labels = tuple(self.labels[b][a] for a in range(cat.n_objects)) if self.labels else None
        return CoPresheaf(cat, tuple(self.sizes[b]), acts, labels)

    def is_degenerate_digit(self, b: int, a: int, m: int) -> bool:
        """True when ``m`` is a face ``rho(f)(m')`` of a copy along a non-identity ``f``."""
        return m in self._face_digits[b][a]

    @property
    def _face_digits(self):
        cache = self.__dict__.get("_faces")
        if cache is None:
            cat = self.base
            n = cat.n_objects
            cache = [[set() for _ in range(n)] for _ in range(n)]
            for f in cat.non_identity_arrows:
                s = cat.source(f)
                for a in range(n):
                    cache[s][a].update(self.rho[f][a])
            self.__dict__["_faces"] = cache
        return cache


def _lookup_table(table, src_labels, dst_index, what):
    try:
        return tuple(dst_index[str(table[x])] for x in src_labels)
    except KeyError as exc:
        raise ValueError(f"{what} incomplete or invalid at {exc.args[0]!r}") from None


def _close_bimodule(base, rho_t, lam_t):
    n = base.n_objects
    changed = True
    while changed:
        changed = False
        for (g, f), h in base.compose_table.items():
            for a in range(n):
                # rho(g.f) = rho(f) rho(g)
                if rho_t[h][a] is None and rho_t[g][a] is not None and rho_t[f][a] is not None:
                    rho_t[h][a] = tuple(rho_t[f][a][y] for y in rho_t[g][a])
                    changed = True
                # lam(g.f) = lam(g) lam(f)
                if lam_t[h][a] is None and lam_t[g][a] is not None and lam_t[f][a] is not None:
                    lam_t[h][a] = tuple(lam_t[g][a][y] for y in lam_t[f][a])
                    changed = True


def hom_bimodule(cat: FinCategory) -> Bimodule:
    """``m(b, a) = cat(b, a)`` with composition as both actions."""
    n = cat.n_objects
    homs = [[cat.hom(b, a) for a in range(n)] for b in range(n)]
    pos = [[{f: i for i, f in enumerate(homs[b][a])} for a in range(n)] for b in range(n)]
    rho, lam = [], []
    for f, (s, t) in enumerate(cat.arrows):
        rho.append(tuple(tuple(pos[s][a][cat.compose(h, f)] for h in homs[t][a]) for a in range(n)))
        lam.append(tuple(tuple(pos[b][t][cat.compose(f, h)] for h in homs[b][s]) for b in range(n)))
    sizes = tuple(tuple(len(homs[b][a]) for a in range(n)) for b in range(n))
    labels = tuple(tuple(tuple(cat.arrow_labels[h] for h in homs[b][a]) for a in range(n)) for b in range(n))
    return Bimodule(cat, sizes, tuple(rho), tuple(lam), labels, name="hom")


def validate_bimodule(M: Bimodule) -> list[Diagnostic]:
    cat = M.base
    n = cat.n_objects
    diags = []
    if len(M.sizes) != n or any(len(r) != n for r in M.sizes):
        return [Diagnostic("structure", "m-set table does not match object count")]
    for f, (s, t) in enumerate(cat.arrows):
        for a in range(n):
            r = M.rho[f][a]
            if len(r) != M.sizes[t][a] or any(not (0 <= y < M.sizes[s][a]) for y in r):
                diags.append(Diagnostic("structure", f"rho({cat.arrow_labels[f]}) is not a function m({cat.objects[t]},{cat.objects[a]}) -> m({cat.objects[s]},{cat.objects[a]})", (f, a)))
            lm = M.lam[f][a]
            if len(lm) != M.sizes[a][s] or any(not (0 <= y < M.sizes[a][t]) for y in lm):
                diags.append(Diagnostic("structure", f"lam({cat.arrow_labels[f]}) is not a function m({cat.objects[a]},{cat.objects[s]}) -> m({cat.objects[a]},{cat.objects[t]})", (f, a)))
    if diags:
        return diags
    for c, i in enumerate(cat.identities):
        for a in range(n):
            if M.rho[i][a] != tuple(range(M.sizes[c][a])):
                diags.append(Diagnostic("rho-identity", f"rho(id_{cat.objects[c]}) is not the identity on m({cat.objects[c]},{cat.objects[a]})", (i, a)))
            if M.lam[i][a] != tuple(range(M.sizes[a][c])):
                diags.append(Diagnostic("lam-identity", f"lam(id_{cat.objects[c]}) is not the identity on m({cat.objects[a]},{cat.objects[c]})", (i, a)))
    for (g, f), h in cat.compose_table.items():
        for a in range(n):
            # g.f contravariantly: rho(g.f) = rho(f) . rho(g)
            if M.rho[h][a] != tuple(M.rho[f][a][y] for y in M.rho[g][a]):
                diags.append(Diagnostic("rho-composition", f"rho({cat.arrow_labels[g]}.{cat.arrow_labels[f]}) != rho({cat.arrow_labels[f]}) rho({cat.arrow_labels[g]}) on m(-,{cat.objects[a]})", (g, f, a)))
            if M.lam[h][a] != tuple(M.lam[g][a][y] for y in M.lam[f][a]):
                diags.append(Diagnostic("lam-composition", f"lam({cat.arrow_labels[g]}.{cat.arrow_labels[f]}) != lam({cat.arrow_labels[g]}) lam({cat.arrow_labels[f]}) on m({cat.objects[a]},-)", (g, f, a)))
    for f, (b2, b) in enumerate(cat.arrows):
        for g, (a, a2) in enumerate(cat.arrows):
            for m in range(M.sizes[b][a]):
                left = M.rho[f][a2][M.lam[g][b][m]]
                right = M.lam[g][b2][M.rho[f][a][m]]
                if left != right:
                    diags.append(Diagnostic("bifunctoriality", f"rho({cat.arrow_labels[f]}) and lam({cat.arrow_labels[g]}) do not commute", (f, g, m)))
                    break
    return diags


class Finiteness(NamedTuple):
    finite: bool
    count: int


def finiteness_check(M: Bimodule, a: int) -> Finiteness:
    """Size of the category of elements of ``M(-, a)``: sum of ``|hom(c,b)| |m(b,a)|``."""
    cat = M.base
    count = sum(len(cat.hom(c, b)) * M.sizes[b][a]
                for b in range(cat.n_objects) for c in range(cat.n_objects))
    return Finiteness(True, count)


@dataclass(frozen=True)
class TensorResult:
    """``M (x) X`` together with its quotient maps.

    Atoms of object ``a`` are the triples ``(b, m, x)`` with ``m`` in
    ``m(b, a)`` and ``x`` in ``X(b)``, ordered by ``b``, then ``m``, then
    ``x``.  ``quotient[a][i]`` is the class of atom ``i``; classes are
    numbered by least atom and ``representatives[a][k]`` is that atom.
    """

    carrier: CoPresheaf
    offsets: tuple[tuple[int, ...], ...]
    x_sizes: tuple[int, ...]
    m_sizes: tuple[tuple[int, ...], ...]
    quotient: tuple[np.ndarray, ...] = field(compare=False)
    representatives: tuple[tuple[int, ...], ...]
    merges: tuple[int, ...]

    def atom_index(self, a: int, b: int, m: int, x: int) -> int:
        return self.offsets[a][b] + m * self.x_sizes[b] + x

    def atom(self, a: int, i: int) -> tuple[int, int, int]:
        """Atom index ``i`` of object ``a`` back to ``(b, m, x)``."""
        offs, ms = self.offsets[a], self.m_sizes[a]
        for b in range(len(offs) - 1, -1, -1):
            if offs[b] <= i and ms[b] * self.x_sizes[b] > 0:
                m, x = divmod(i - offs[b], self.x_sizes[b])
                return b, m, x
        raise IndexError(i)

    def n_atoms(self, a: int) -> int:
        return len(self.quotient[a])

    def class_of(self, a: int, b: int, m: int, x: int) -> int:
        return int(self.quotient[a][self.atom_index(a, b, m, x)])


def tensor_relation(M: Bimodule, X: CoPresheaf, a: int, offsets=None):
    """Generating pairs of the tensor relation at object ``a`` as two arrays.

    For ``f: b -> b'``, ``m`` in ``m(b', a)`` and ``x`` in ``X(b)`` the pair is
    ``(rho(f)(m), x) ~ (m, X(f)(x))``.
    """
    cat = M.base
    if offsets is None:
        offsets = _offsets(M, X, a)[0]
    left, right = [], []
    for f in cat.non_identity_arrows:
        b, b2 = cat.arrows[f]
        nm, nx = M.sizes[b2][a], X.sizes[b]
        if nm == 0 or nx == 0:
            continue
        ms = np.arange(nm, dtype=np.int64)
        xs = np.arange(nx, dtype=np.int64)
        rho = np.asarray(M.rho[f][a], dtype=np.int64)
        xf = np.asarray(X.actions[f], dtype=np.int64)
        left.append((offsets[b] + rho[:, None] * X.sizes[b] + xs[None, :]).ravel())
        right.append((offsets[b2] + ms[:, None] * X.sizes[b2] + xf[None, :]).ravel())
    if not left:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(left), np.concatenate(right)


def _offsets(M, X, a):
    offs, total = [], 0
    for b in range(M.base.n_objects):
        offs.append(total)
        total += M.sizes[b][a] * X.sizes[b]
    return tuple(offs), total


def tensor(M: Bimodule, X: CoPresheaf, max_atoms: int = DEFAULT_MAX_ATOMS) -> TensorResult:
    """Compute ``M (x) X`` by disjoint-set closure of the tensor relation."""
    cat = M.base
    n = cat.n_objects
    offsets, quotient, reps, sizes, merges = [], [], [], [], []
    for a in range(n):
        offs, total = _offsets(M, X, a)
        if total > max_atoms:
            raise ResourceLimitError(f"tensor at {cat.objects[a]} needs {total} atoms (limit {max_atoms})")
        left, right = tensor_relation(M, X, a, offs)
        labels = _kernel.partition(total, left, right)
        k = int(labels.max()) + 1 if total else 0
        # classes are numbered by first appearance, so this is the least atom
        rep = np.unique(labels, return_index=True)[1] if total else ()
        offsets.append(offs)
        quotient.append(labels)
        reps.append(tuple(int(r) for r in rep))
        sizes.append(k)
        merges.append(total - k)
    x_sizes = tuple(X.sizes)
    # induced arrow actions via lam
    acts = []
    for g, (s, t) in enumerate(cat.arrows):
        act = []
        for r in reps[s]:
            b, m, x = _decode(offsets[s], x_sizes, M, s, r)
            act.append(int(quotient[t][offsets[t][b] + M.lam[g][b][m] * x_sizes[b] + x]))
        acts.append(tuple(act))
    carrier = CoPresheaf(cat, tuple(sizes), tuple(acts))
    m_sizes = tuple(tuple(M.sizes[b][a] for b in range(n)) for a in range(n))
    return TensorResult(carrier, tuple(offsets), x_sizes, m_sizes, tuple(quotient), tuple(reps), tuple(merges))


def _decode(offs, x_sizes, M, a, i):
    for b in range(len(offs) - 1, -1, -1):
        if offs[b] <= i and M.sizes[b][a] * x_sizes[b] > 0:
            m, x = divmod(i - offs[b], x_sizes[b])
            return b, m, x
    raise IndexError(i)


def tensor_map(M: Bimodule, alpha: NatTransformation, source: TensorResult | None = None,
               target: TensorResult | None = None) -> NatTransformation:
    """``M (x) alpha``: sends the class of ``(b, m, x)`` to that of ``(b, m, alpha_b(x))``."""
    TX = source if source is not None else tensor(M, alpha.source)
    TY = target if target is not None else tensor(M, alpha.target)
    comps = []
    for a in range(M.base.n_objects):
        comp = []
        for r in TX.representatives[a]:
            b, m, x = TX.atom(a, r)
            comp.append(TY.class_of(a, b, m, alpha.components[b][x]))
        comps.append(tuple(comp))
    return NatTransformation(TX.carrier, TY.carrier, tuple(comps))


def iterate_G(M: Bimodule, X: CoPresheaf, n: int, max_atoms: int = DEFAULT_MAX_ATOMS) -> CoPresheaf:
    """``G^n(X)`` where ``G = M (x) -``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for _ in range(n):
        X = tensor(M, X, max_atoms=max_atoms).carrier
    return X
