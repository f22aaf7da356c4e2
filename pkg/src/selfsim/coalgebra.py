"""G-coalgebras for ``G = M (x) -``, their maps, Lambek checks, and a
bounded search for terminal coalgebras among small finite ones."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .bimodule import Bimodule, TensorResult, tensor, tensor_map
from .errors import ResourceLimitError
from .fincat import (CoPresheaf, Diagnostic, FinCategory, NatTransformation,
                     _close_actions, validate_functor, validate_nat)
from .nondegen import is_nondegenerate

DEFAULT_MAX_COALGEBRAS = 200_000


@dataclass(frozen=True)
class Coalgebra:
    """A functor ``X`` with ``structure[a][x]`` the class of ``(M (x) X)(a)``
    that ``x`` is sent to (classes numbered as in :func:`tensor`)."""

    carrier: CoPresheaf
    structure: tuple[tuple[int, ...], ...]

    def structure_map(self, M: Bimodule, T: TensorResult | None = None) -> NatTransformation:
        T = T if T is not None else tensor(M, self.carrier)
        return NatTransformation(self.carrier, T.carrier, self.structure)


def validate_coalgebra(M: Bimodule, c: Coalgebra) -> list[Diagnostic]:
    X = c.carrier
    if X.cat != M.base:
        return [Diagnostic("shape", "carrier is over a different base category")]
    diags = validate_functor(M.base, X)
    if diags:
        return diags
    if len(c.structure) != M.base.n_objects:
        return [Diagnostic("shape", "structure map does not cover every object")]
    T = tensor(M, X)
    return validate_nat(NatTransformation(X, T.carrier, c.structure))


def _square_holds(M, c1, c2, T1, T2, comps) -> bool:
    for a, xi in enumerate(c1.structure):
        reps = T1.representatives[a]
        for x, k in enumerate(xi):
            b, m, x2 = T1.atom(a, reps[k])
            if T2.class_of(a, b, m, comps[b][x2]) != c2.structure[a][comps[a][x]]:
                return False
    return True


def is_coalgebra_map(M: Bimodule, source: Coalgebra, target: Coalgebra, h: NatTransformation) -> bool:
    """``(M (x) h) . xi_source == xi_target . h`` componentwise (and ``h`` natural)."""
    if h.source.sizes != source.carrier.sizes or h.target.sizes != target.carrier.sizes:
        return False
    if validate_nat(NatTransformation(source.carrier, target.carrier, h.components)):
        return False
    T1, T2 = tensor(M, source.carrier), tensor(M, target.carrier)
    Mh = tensor_map(M, NatTransformation(source.carrier, target.carrier, h.components), T1, T2)
    for a in range(M.base.n_objects):
        for x in source.carrier.carrier(a):
            if Mh.components[a][source.structure[a][x]] != target.structure[a][h.components[a][x]]:
                return False
    return True


class LambekReport(NamedTuple):
    iso: bool
    witness: tuple | None = None

    def __str__(self):
        if self.iso:
            return "iso"
        return f"not_iso{self.witness}"


def check_lambek(M: Bimodule, c: Coalgebra) -> LambekReport:
    """Is every component of the structure map a bijection?

    Witnesses are ``(object, "collision", x1, x2)`` or ``(object, "missed", class)``.
    """
    T = tensor(M, c.carrier)
    for a, xi in enumerate(c.structure):
        seen = {}
        for x, k in enumerate(xi):
            if k in seen:
                return LambekReport(False, (a, "collision", seen[k], x))
            seen[k] = x
        for k in range(T.carrier.sizes[a]):
            if k not in seen:
                return LambekReport(False, (a, "missed", k))
    return LambekReport(True)


# -- enumeration ---------------------------------------------------------

def natural_maps(X: CoPresheaf, Y: CoPresheaf) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All natural transformations ``X -> Y`` as component tables."""
    cat = X.cat
    n = cat.n_objects
    order = [(a, x) for a in range(n) for x in range(X.sizes[a])]
    out_arrows = [[g for g in cat.arrows_out_of[a] if not cat.is_identity(g)] for a in range(n)]
    assign = {}

    def place(a, x, y, trail):
        stack = [(a, x, y)]
        while stack:
            a, x, y = stack.pop()
            cur = assign.get((a, x))
            if cur is not None:
                if cur != y:
                    return False
                continue
            assign[(a, x)] = y
            trail.append((a, x))
            for g in out_arrows[a]:
                stack.append((cat.target(g), X.actions[g][x], Y.actions[g][y]))
        return True

    def rec(i):
        while i < len(order) and order[i] in assign:
            i += 1
        if i == len(order):
            yield tuple(tuple(assign[(a, x)] for x in range(X.sizes[a])) for a in range(n))
            return
        a, x = order[i]
        for y in range(Y.sizes[a]):
            trail = []
            if place(a, x, y, trail):
                yield from rec(i + 1)
            for key in trail:
                del assign[key]

    yield from rec(0)


def coalgebra_maps(M: Bimodule, source: Coalgebra, target: Coalgebra, limit: int | None = None,
                   tensors: tuple[TensorResult, TensorResult] | None = None) -> list:
    """Coalgebra maps ``source -> target`` (at most ``limit`` of them)."""
    T1, T2 = tensors if tensors is not None else (tensor(M, source.carrier), tensor(M, target.carrier))
    found = []
    for comps in natural_maps(source.carrier, target.carrier):
        if _square_holds(M, source, target, T1, T2, comps):
            found.append(comps)
            if limit is not None and len(found) >= limit:
                break
    return found


def _generators(cat: FinCategory) -> list[int]:
    composite = set()
    for (g, f), h in cat.compose_table.items():
        if not cat.is_identity(g) and not cat.is_identity(f):
            composite.add(h)
    return [f for f in cat.non_identity_arrows if f not in composite]


def _perm_product(sizes):
    return itertools.product(*(itertools.permutations(range(k)) for k in sizes))


def canonical_form(X: CoPresheaf) -> tuple:
    """Least relabelled action table over all carrier permutations."""
    return min(X.relabel(p).actions for p in _perm_product(X.sizes))


def enumerate_copresheaves(cat: FinCategory, size_bound: int, nondegenerate_only: bool = True,
                           max_count: int = DEFAULT_MAX_COALGEBRAS) -> list[CoPresheaf]:
    """Functors with every carrier of size ``<= size_bound``, one per iso class."""
    gens = _generators(cat)
    found = {}
    for sizes in itertools.product(range(size_bound + 1), repeat=cat.n_objects):
        if math.prod(math.factorial(k) for k in sizes) > 100_000:
            raise ResourceLimitError("carrier permutation group too large for canonical forms")
        tables = [itertools.product(range(sizes[cat.target(g)]), repeat=sizes[cat.source(g)]) for g in gens]
        for choice in itertools.product(*tables):
            acts: list = [None] * cat.n_arrows
            for a, i in enumerate(cat.identities):
                acts[i] = tuple(range(sizes[a]))
            for g, t in zip(gens, choice):
                acts[g] = tuple(t)
            try:
                closed = _close_actions(cat, acts)
            except ValueError:
                continue
            X = CoPresheaf(cat, sizes, closed)
            if validate_functor(cat, X):
                continue
            if nondegenerate_only and not is_nondegenerate(X):
                continue
            key = (sizes, canonical_form(X))
            if key not in found:
                found[key] = CoPresheaf(cat, sizes, key[1])
                if len(found) > max_count:
                    raise ResourceLimitError(f"more than {max_count} functors within the size bound")
    return [found[k] for k in sorted(found)]


def _automorphisms(X: CoPresheaf) -> list:
    return [p for p in _perm_product(X.sizes) if X.relabel(p).actions == X.actions]


def enumerate_coalgebras(M: Bimodule, size_bound: int,
                         max_coalgebras: int = DEFAULT_MAX_COALGEBRAS) -> list[Coalgebra]:
    """Coalgebras on nondegenerate carriers within the bound, one per iso class."""
    out = []
    for X in enumerate_copresheaves(M.base, size_bound, max_count=max_coalgebras):
        T = tensor(M, X)
        twists = []
        for p in _automorphisms(X):
            sigma = NatTransformation(X, X, tuple(tuple(c) for c in p))
            twists.append((p, tensor_map(M, sigma, T, T).components))
        seen = set()
        for xi in natural_maps(X, T.carrier):
            forms = []
            for p, Mp in twists:
                new = []
                for a, comp in enumerate(xi):
                    row = [0] * len(comp)
                    for x, k in enumerate(comp):
                        row[p[a][x]] = Mp[a][k]
                    new.append(tuple(row))
                forms.append(tuple(new))
            key = min(forms)
            if key in seen:
                continue
            seen.add(key)
            out.append(Coalgebra(X, key))
            if len(out) > max_coalgebras:
                raise ResourceLimitError(f"more than {max_coalgebras} coalgebras within the size bound")
    return out


@dataclass(frozen=True)
class TerminalCertificate:
    """Evidence for a terminality verdict relative to the enumerated universe.

    ``map_counts[i]`` is the number of coalgebra maps from universe member
    ``i`` into the candidate (capped at 2).
    """

    size_bound: int
    universe_size: int
    candidate_index: int | None
    map_counts: tuple[int, ...]


def finite_terminal_search(M: Bimodule, size_bound: int,
                           max_coalgebras: int = DEFAULT_MAX_COALGEBRAS):
    """Look for a coalgebra receiving exactly one map from every enumerated one.

    Returns ``(candidate or None, certificate)``.
    """
    universe = enumerate_coalgebras(M, size_bound, max_coalgebras)
    tens = [tensor(M, c.carrier) for c in universe]
    order = sorted(range(len(universe)), key=lambda i: (sum(universe[i].carrier.sizes), i))
    for t in order:
        target = universe[t]
        counts = [0] * len(universe)
        ok = True
        # self-maps first: a terminal object has only the identity
        for i in [t] + [i for i in order if i != t]:
            k = len(coalgebra_maps(M, universe[i], target, limit=2, tensors=(tens[i], tens[t])))
            counts[i] = k
            if k != 1:
                ok = False
                break
        if ok:
            return target, TerminalCertificate(size_bound, len(universe), t, tuple(counts))
    return None, TerminalCertificate(size_bound, len(universe), None, ())


def empty_coalgebra(M: Bimodule) -> Coalgebra:
    """All carriers empty; the initial coalgebra."""
    n = M.base.n_objects
    X = CoPresheaf(M.base, (0,) * n, tuple(() for _ in range(M.base.n_arrows)))
    return Coalgebra(X, tuple(() for _ in range(n)))


def dyadic_coalgebra(k: int, M: Bimodule | None = None) -> Coalgebra:
    """Dyadic rationals ``j / 2^k`` in ``[0, 1]`` over the interval system.

    ``x`` goes to ``L`` applied to ``2x`` when ``x <= 1/2`` and to ``R``
    applied to ``2x - 1`` otherwise; doubling stays inside the truncation
    but the halves of the finest points are missed, so the structure map is
    injective and not surjective.
    """
    from .gallery import freyd_system

    M = M if M is not None else freyd_system()
    cat = M.base
    o0, o1 = cat.object_index("0"), cat.object_index("1")
    N = 2 ** k
    X = CoPresheaf.build(cat, {"0": ["*"], "1": [f"{j}/{N}" for j in range(N + 1)]},
                         {"inf": {"*": f"0/{N}"}, "sup": {"*": f"{N}/{N}"}})
    T = tensor(M, X)
    L, R = M.element_index(o1, o1, "L"), M.element_index(o1, o1, "R")
    star = M.element_index(o0, o0, "*")
    xi = [None, None]
    xi[o0] = (T.class_of(o0, o0, star, 0),)
    xi[o1] = tuple(T.class_of(o1, o1, L, 2 * j) if 2 * j <= N else T.class_of(o1, o1, R, 2 * j - N)
                   for j in range(N + 1))
    return Coalgebra(X, tuple(xi))
