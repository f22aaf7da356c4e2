"""Nondegeneracy of set-valued functors and validity of whole systems.

A functor ``X: A -> Set`` is treated as nondegenerate when every connected
component of its category of elements is cofiltered (``X`` is a coproduct
of flat functors).
"""
from __future__ import annotations

from dataclasses import dataclass

from .bimodule import Bimodule, Finiteness, finiteness_check, validate_bimodule
from .fincat import CoPresheaf, category_of_elements, cofiltered_failure, connected_components


@dataclass(frozen=True)
class NondegeneracyResult:
    """Verdict plus, on failure, the offending component and witness.

    ``component`` lists ``(object, element)`` pairs.  For ``kind == "pair"``
    the witness is two elements with no common source; for ``"parallel"``
    it is ``(u, v, element)``: base arrows that agree on ``element`` but are
    not equalized by any arrow into it.
    """

    nondegenerate: bool
    component: tuple[tuple[int, int], ...] = ()
    kind: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.nondegenerate

    def describe(self, X: CoPresheaf) -> str:
        if self.nondegenerate:
            return "nondegenerate"
        cat = X.cat

        def el(p):
            return f"({cat.objects[p[0]]},{X.label(*p)})"

        if self.kind == "pair":
            a, b = self.witness
            return f"degenerate: {el(a)} and {el(b)} have no common source"
        u, v, x = self.witness
        return (f"degenerate: {cat.arrow_labels[u]} and {cat.arrow_labels[v]} agree on {el(x)} "
                f"but no arrow into it equalizes them")


def is_nondegenerate(X: CoPresheaf) -> NondegeneracyResult:
    el = category_of_elements(X.cat, X)
    cat = el.category
    for comp in connected_components(cat):
        failure = cofiltered_failure(cat, comp)
        if failure is None:
            continue
        kind, wit = failure
        members = tuple(el.element(e) for e in comp)
        if kind == "pair":
            witness = (el.element(wit[0]), el.element(wit[1]))
        else:
            u, v = wit
            witness = (el.base_arrow[u], el.base_arrow[v], el.element(cat.source(u)))
        return NondegeneracyResult(False, members, kind, witness)
    return NondegeneracyResult(True)


@dataclass(frozen=True)
class SystemReport:
    """Per-object finiteness counts and per-object slice verdicts."""

    valid: bool
    finiteness: tuple[Finiteness, ...]
    slices: tuple[NondegeneracyResult, ...]
    diagnostics: tuple = ()

    def __bool__(self):
        return self.valid


def is_valid_system(M: Bimodule) -> SystemReport:
    """Finiteness at every object and nondegeneracy of every ``M(b, -)``."""
    diags = tuple(validate_bimodule(M))
    n = M.base.n_objects
    fin = tuple(finiteness_check(M, a) for a in range(n))
    slices = tuple(is_nondegenerate(M.covariant_slice(b)) for b in range(n))
    valid = not diags and all(f.finite for f in fin) and all(slices)
    return SystemReport(valid, fin, slices, diags)
