"""Built-in systems and their stated counts."""
import pytest

from selfsim import gallery
from selfsim.approximator import cell_count, depth_model
from selfsim.gallery import is_bimodule_isomorphism, product_system
from selfsim.nondegen import is_valid_system


def identity_maps(M):
    n = M.base.n_objects
    return (list(range(n)), list(range(M.base.n_arrows)),
            {(b, a): list(range(M.sizes[b][a])) for b in range(n) for a in range(n)})


def by_labels(M1, M2, objects, arrows, elements):
    """Explicit maps from label renamings (identities follow their objects)."""
    c1, c2 = M1.base, M2.base
    obj = [c2.object_index(objects[o]) for o in c1.objects]
    arr = []
    for f in range(c1.n_arrows):
        if f in c1.identities:
            arr.append(c2.identities[obj[c1.source(f)]])
        else:
            arr.append(c2.arrow_index(arrows[c1.arrow_labels[f]]))
    els = {(b, a): [M2.element_index(obj[b], obj[a], elements.get(M1.label(b, a, m), M1.label(b, a, m)))
                    for m in range(M1.sizes[b][a])]
           for b in range(c1.n_objects) for a in range(c1.n_objects)}
    return obj, arr, els


def swap_maps(M1, M2):
    c1, c2 = M1.base, M2.base
    n1, n2, na1, na2 = c1.n_objects, c2.n_objects, c1.n_arrows, c2.n_arrows
    objects = [j * n1 + i for i in range(n1) for j in range(n2)]
    arrows = [g * na1 + f for f in range(na1) for g in range(na2)]
    elements = {}
    for b1 in range(n1):
        for b2 in range(n2):
            for a1 in range(n1):
                for a2 in range(n2):
                    s1, s2 = M1.sizes[b1][a1], M2.sizes[b2][a2]
                    elements[(b1 * n2 + b2, a1 * n2 + a2)] = [y * s1 + x for x in range(s1) for y in range(s2)]
    return objects, arrows, elements


def test_all_valid():
    for name, make in gallery.GALLERY.items():
        assert is_valid_system(make()).valid, name


def test_julia_counts():
    M = gallery.julia_system()
    o = M.base.object_index
    assert [M.sizes[o(b)][o("2")] for b in "0123"] == [8, 0, 2, 1]
    assert M.base.n_objects == 4
    assert len(M.base.hom(o("0"), o("2"))) == 4 and len(M.base.hom(o("0"), o("3"))) == 4


def test_simplex1_is_the_interval():
    S, F = gallery.simplex_system(1), gallery.freyd_system()
    maps = by_labels(S, F, {"pt": "0", "seg": "1"}, {"d0": "inf", "d1": "sup"},
                     {"V0": "0", "M01": "1/2", "V1": "1", "V0-M01": "L", "M01-V1": "R"})
    assert is_bimodule_isomorphism(S, F, *maps)


def test_isomorphism_check_rejects_wrong_maps():
    S, F = gallery.simplex_system(1), gallery.freyd_system()
    maps = by_labels(S, F, {"pt": "0", "seg": "1"}, {"d0": "sup", "d1": "inf"},
                     {"V0": "0", "M01": "1/2", "V1": "1", "V0-M01": "L", "M01-V1": "R"})
    assert not is_bimodule_isomorphism(S, F, *maps)


def test_simplex2_depth_one():
    M = gallery.simplex_system(2)
    tri = M.base.object_index("tri")
    assert cell_count(M, tri, 1, top_only=True) == 6
    with pytest.raises(ValueError):
        gallery.simplex_system(3)


def test_square_cells():
    M = gallery.GALLERY["square"]()
    top = M.base.object_index("(1,1)")
    for n in range(4):
        assert depth_model(M, top, n).n_cells == 4 ** n


def test_product_unit_symmetry_associativity():
    one, F, C = gallery.singleton_system(), gallery.freyd_system(), gallery.cantor_system()
    assert is_bimodule_isomorphism(product_system(F, one), F, *identity_maps(F))
    assert is_bimodule_isomorphism(product_system(one, F), F, *identity_maps(F))
    for A, B in ((F, C), (C, F), (F, F), (gallery.sierpinski_system(), C)):
        assert is_bimodule_isomorphism(product_system(A, B), product_system(B, A), *swap_maps(A, B))
    for A, B, D in ((F, C, one), (C, F, C), (F, one, F)):
        left = product_system(product_system(A, B), D)
        right = product_system(A, product_system(B, D))
        assert is_bimodule_isomorphism(left, right, *identity_maps(left))


def test_product_of_cantors():
    M = product_system(gallery.cantor_system(), gallery.cantor_system())
    assert M.base.is_discrete and M.sizes == ((4,),)
    assert is_valid_system(M).valid


def test_load_unknown():
    with pytest.raises(KeyError):
        gallery.load("mandelbrot")
