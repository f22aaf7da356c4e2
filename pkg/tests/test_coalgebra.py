"""Coalgebras, their maps, Lambek checks and the bounded terminal search."""
import itertools

import pytest

from selfsim import gallery
from selfsim.bimodule import hom_bimodule, tensor
from selfsim.coalgebra import (Coalgebra, check_lambek, coalgebra_maps, dyadic_coalgebra,
                               empty_coalgebra, enumerate_coalgebras, finite_terminal_search,
                               is_coalgebra_map, natural_maps, validate_coalgebra)
from selfsim.errors import ResourceLimitError
from selfsim.fincat import (CoPresheaf, FinCategory, NatTransformation, constant_functor,
                            validate_nat)


def brute_natural_maps(X, Y):
    spaces = [itertools.product(range(Y.sizes[a]), repeat=X.sizes[a]) for a in range(X.cat.n_objects)]
    return {comps for comps in itertools.product(*spaces)
            if not validate_nat(NatTransformation(X, Y, comps))}


def test_natural_maps_match_brute_force():
    M = gallery.freyd_system()
    universe = enumerate_coalgebras(M, 2)
    carriers = {c.carrier.actions: c.carrier for c in universe}.values()
    for X, Y in itertools.product(carriers, repeat=2):
        assert set(natural_maps(X, Y)) == brute_natural_maps(X, Y)


def test_coalgebra_maps_match_brute_force():
    M = gallery.freyd_system()
    universe = enumerate_coalgebras(M, 2)[:25]
    for c1, c2 in itertools.product(universe, repeat=2):
        fast = set(coalgebra_maps(M, c1, c2))
        slow = {h for h in brute_natural_maps(c1.carrier, c2.carrier)
                if is_coalgebra_map(M, c1, c2, NatTransformation(c1.carrier, c2.carrier, h))}
        assert fast == slow


def test_identity_and_composition():
    M = gallery.freyd_system()
    universe = enumerate_coalgebras(M, 2)
    for c in universe:
        assert is_coalgebra_map(M, c, c, NatTransformation.identity(c.carrier))
    composed = 0
    for c1, c2, c3 in itertools.product(universe[:12], repeat=3):
        for h in coalgebra_maps(M, c1, c2, limit=2):
            for k in coalgebra_maps(M, c2, c3, limit=2):
                hk = NatTransformation(c1.carrier, c2.carrier, h).then(NatTransformation(c2.carrier, c3.carrier, k))
                assert is_coalgebra_map(M, c1, c3, hk)
                composed += 1
    assert composed > 0


def test_empty_coalgebra():
    M = gallery.freyd_system()
    e = empty_coalgebra(M)
    assert validate_coalgebra(M, e) == []
    assert check_lambek(M, e).iso
    for c in enumerate_coalgebras(M, 1):
        assert len(coalgebra_maps(M, e, c)) == 1


def test_singleton_coalgebra_valid_and_iso():
    M = gallery.singleton_system()
    c = Coalgebra(constant_functor(M.base), ((0,),))
    assert validate_coalgebra(M, c) == []
    assert str(check_lambek(M, c)) == "iso"


def test_non_natural_structure_reported():
    M = gallery.freyd_system()
    c = dyadic_coalgebra(1, M)
    one = M.base.object_index("1")
    xi = list(c.structure)
    xi[one] = tuple(reversed(xi[one]))
    diags = validate_coalgebra(M, Coalgebra(c.carrier, tuple(xi)))
    assert diags and diags[0].witness


def test_shape_mismatch_reported():
    M = gallery.freyd_system()
    c = dyadic_coalgebra(1, M)
    assert validate_coalgebra(M, Coalgebra(c.carrier, c.structure[:1]))[0].code == "shape"


def test_dyadic_coalgebra_fails_lambek_at_the_boundary():
    M = gallery.freyd_system()
    for k in range(4):
        c = dyadic_coalgebra(k, M)
        assert validate_coalgebra(M, c) == []
        report = check_lambek(M, c)
        assert not report.iso
        obj, kind, cls = report.witness
        assert obj == M.base.object_index("1") and kind == "missed"
        T = tensor(M, c.carrier)
        assert T.carrier.sizes[obj] == 2 ** (k + 1) + 1


def test_terminal_search_singleton():
    M = gallery.singleton_system()
    cand, cert = finite_terminal_search(M, 3)
    assert cand is not None and cand.carrier.sizes == (1,)
    assert check_lambek(M, cand).iso
    assert cert.universe_size == 12 and set(cert.map_counts) == {1}


def test_terminal_search_cantor_and_freyd_find_nothing():
    cand, cert = finite_terminal_search(gallery.cantor_system(), 3)
    assert cand is None and cert.universe_size > 0
    cand, _ = finite_terminal_search(gallery.freyd_system(), 3)
    assert cand is None


def test_terminal_search_identity_functor():
    # over the hom bimodule G is the identity, so the point with its identity is terminal
    cat = FinCategory.discrete(["a"])
    M = hom_bimodule(cat)
    cand, _ = finite_terminal_search(M, 3)
    assert cand.carrier.sizes == (1,)
    assert check_lambek(M, cand).iso


def test_terminal_search_guard():
    with pytest.raises(ResourceLimitError):
        finite_terminal_search(gallery.freyd_system(), 4, max_coalgebras=10)
