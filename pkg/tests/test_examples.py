"""Small worked examples, one per documented behaviour."""
import numpy as np

from selfsim import gallery
from selfsim.approximator import (cell_count, enumerate_cells, geometric_realization,
                                  is_discretely_separated, pointed_classes, touching_graph)
from selfsim.bimodule import Bimodule, finiteness_check, iterate_G, tensor, tensor_map
from selfsim.fincat import (CoPresheaf, FinCategory, NatTransformation, category_of_elements,
                            connected_components, constant_functor, is_cofiltered, validate_category,
                            validate_functor)
from selfsim.nondegen import is_nondegenerate, is_valid_system


def freyd_X(n1=3):
    cat = gallery.freyd_system().base
    labels = ["0", "1/2", "1"] if n1 == 3 else [str(i) for i in range(n1)]
    return CoPresheaf.build(cat, {"0": ["*"], "1": labels}, {"inf": {"*": labels[0]}, "sup": {"*": labels[-1]}})


def test_parallel_pair_and_trivial_monoid_valid():
    assert validate_category(gallery.freyd_system().base) == []
    assert validate_category(FinCategory.discrete(["*"])) == []


def test_freyd_points_functor():
    X = freyd_X()
    assert validate_functor(X.cat, X) == []
    assert validate_functor(X.cat, constant_functor(X.cat)) == []


def test_elements_of_constant_functor():
    cat = gallery.freyd_system().base
    el = category_of_elements(cat, constant_functor(cat)).category
    assert el.n_objects == 2 and len(el.non_identity_arrows) == 2


def test_elements_of_freyd_points():
    X = freyd_X()
    el = category_of_elements(X.cat, X)
    E = el.category
    assert E.n_objects == 4
    ends = {(el.element(E.source(f)), el.element(E.target(f))) for f in E.non_identity_arrows}
    assert ends == {((0, 0), (1, 0)), ((0, 0), (1, 2))}
    comps = [[el.element(e) for e in c] for c in connected_components(E)]
    assert comps == [[(0, 0), (1, 0), (1, 2)], [(1, 1)]]
    sub = FinCategory.discrete(["a", "b"])
    assert len(connected_components(sub)) == 2 and not is_cofiltered(sub)
    assert len(connected_components(X.cat)) == 1


def test_empty_carrier_contributes_nothing():
    cat = gallery.freyd_system().base
    X = CoPresheaf(cat, (0, 2), ((), (0, 1), (), ()))
    assert category_of_elements(cat, X).category.n_objects == 2
    assert is_nondegenerate(X)


def test_poset_with_bottom_is_cofiltered():
    cat = FinCategory.build(["b", "x", "y", "t"],
                            [("bx", "b", "x"), ("by", "b", "y"), ("xt", "x", "t"), ("yt", "y", "t"),
                             ("bt", "b", "t")],
                            {("xt", "bx"): "bt", ("yt", "by"): "bt"})
    assert is_cofiltered(cat)


def test_freyd_finiteness_count():
    M = gallery.freyd_system()
    # sum over b, c of |hom(c, b)| |m(b, 1)|: |m(0,1)| = 3 with one arrow into 0, |m(1,1)| = 2 with three into 1
    assert finiteness_check(M, 1) == (True, 3 * 1 + 2 * 3)
    j = gallery.julia_system()
    assert finiteness_check(j, j.base.object_index("2")).finite


def test_julia_tensor_without_glue_points():
    M = gallery.julia_system()
    cat = M.base
    o = cat.object_index
    sizes = {"0": 0, "1": 2, "2": 3, "3": 4}
    acts = tuple(tuple(range(sizes[cat.objects[s]])) if s == t else () for s, t in cat.arrows)
    X = CoPresheaf(cat, tuple(sizes[x] for x in cat.objects), acts)
    assert validate_functor(cat, X) == []
    # with nothing to glue along, (G X)(2) is two copies of X(2) beside one of X(3)
    assert tensor(M, X).carrier.sizes[o("2")] == 2 * 3 + 4


def test_collapsing_map_on_the_interval():
    M = gallery.freyd_system()
    X, P = freyd_X(), constant_functor(M.base)
    collapse = NatTransformation(X, P, ((0,), (0, 0, 0)))
    image = tensor_map(M, collapse)
    # two copies of a three-point interval glued at one end: five classes
    assert image.source.sizes == (1, 5)
    assert image.target.sizes == (1, 1)
    T = tensor(M, X)
    glue = {T.class_of(1, 0, m, 0) for m in range(M.sizes[0][1])}
    assert len(glue) == 3
    assert {image.components[1][c] for c in glue} == {0}


def test_iterate_edge_cases():
    M = gallery.freyd_system()
    X = freyd_X()
    assert iterate_G(M, X, 0) == X
    S = gallery.singleton_system()
    one = constant_functor(S.base)
    assert all(iterate_G(S, one, n).sizes == (1,) for n in range(5))


def test_nondegeneracy_examples():
    assert is_nondegenerate(freyd_X())
    cat = gallery.freyd_system().base
    same = CoPresheaf(cat, (1, 2), ((0,), (0, 1), (0,), (0,)))
    res = is_nondegenerate(same)
    assert not res and res.kind == "parallel"
    assert is_nondegenerate(CoPresheaf(cat, (0, 0), ((), (), (), ())))
    assert is_valid_system(gallery.cantor_system()).valid


def test_enumerate_cells_examples():
    F, C = gallery.freyd_system(), gallery.cantor_system()
    staying = [c for c in enumerate_cells(F, 1, 3) if all(b == 1 for b, _ in c.digits)]
    assert len(staying) == 8
    assert len(enumerate_cells(F, 1, 3)) == cell_count(F, 1, 3)
    assert [c.digits for c in enumerate_cells(F, 0, 0)] == [()]
    assert len(enumerate_cells(C, 0, 5)) == 32


def _pointed_index(PC, M, labels, arrow):
    cat = M.base
    for p in range(PC.n_pointed):
        cell = PC.cells[int(PC.pointed_cell[p])]
        if cell.label(M) == labels and cat.arrow_labels[int(PC.pointed_arrow[p])] == arrow:
            return p
    raise KeyError((labels, arrow))


def test_freyd_glued_midpoint():
    M = gallery.freyd_system()
    PC = pointed_classes(M, 1, 1)
    assert sum(1 for s in PC.class_source if s == 0) == 3
    lab = PC.labels
    assert lab[_pointed_index(PC, M, "L", "sup")] == lab[_pointed_index(PC, M, "R", "inf")]
    PC2 = pointed_classes(M, 1, 2)
    assert PC2.labels[_pointed_index(PC2, M, "L,R", "sup")] == PC2.labels[_pointed_index(PC2, M, "R,L", "inf")]


def test_cantor_classes_are_singletons():
    M = gallery.cantor_system()
    for n in range(5):
        PC = pointed_classes(M, 0, n)
        assert PC.n_classes == PC.n_pointed


def test_touching_examples():
    cells, edges = touching_graph(gallery.sierpinski_system(), 1, 1)
    assert len(cells) == 3 and edges == [(0, 1), (0, 2), (1, 2)]
    cells, edges = touching_graph(gallery.cantor_system(), 0, 4)
    assert len(cells) == 16 and edges == []
    assert not is_discretely_separated(gallery.freyd_system(), 1, 1)


def test_discrete_bases_are_separated():
    rng = np.random.default_rng(5)
    for _ in range(10):
        k = int(rng.integers(1, 4))
        cat = FinCategory.discrete([f"o{i}" for i in range(k)])
        elements = {}
        for b in range(k):
            for a in range(k):
                size = int(rng.integers(0, 3))
                if size:
                    elements[(f"o{b}", f"o{a}")] = [f"d{b}{a}{i}" for i in range(size)]
        M = Bimodule.build(cat, elements)
        assert is_valid_system(M).valid
        for a in range(k):
            assert is_discretely_separated(M, a, 3)


def test_freyd_realization_gives_dyadic_intervals():
    M, hints = gallery.load("freyd")
    for n in range(5):
        real = geometric_realization(M, 1, n, hints)
        xs = sorted(tuple(np.round(pts[:, 0], 12)) for _, pts in real.cells)
        assert xs == [(j / 2 ** n, (j + 1) / 2 ** n) for j in range(2 ** n)]


def test_simplex2_depth_two():
    M = gallery.simplex_system(2)
    assert cell_count(M, M.base.object_index("tri"), 2, top_only=True) == 36
