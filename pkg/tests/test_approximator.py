"""Cells, glued classes, depth models, stream equality and realizations."""
import numpy as np
import pytest

from selfsim import gallery
from selfsim.approximator import (Affine, RealizationHints, StreamGenerator, approximate_space,
                                  cell_count, depth_model, enumerate_cells, geometric_realization,
                                  is_discretely_separated, parse_stream, pointed_classes,
                                  stream_equal_up_to, touching_graph)
from selfsim.bimodule import iterate_G
from selfsim.errors import RealizationError, ResourceLimitError
from selfsim.fincat import representable
from oracles import all_cells, gasket_vertex_count, partition_of_labels, pointed_partition


def systems():
    return [(name, make()) for name, make in gallery.GALLERY.items()]


def test_cell_counts_follow_recurrence():
    for name, M in systems():
        k = M.base.n_objects
        for top_only in (False, True):
            counts = [1] * k
            for n in range(5):
                for a in range(k):
                    assert cell_count(M, a, n, top_only) == counts[a], (name, a, n)
                counts = [sum(M.sizes[b][a] * counts[b] for b in range(k)
                              if not top_only) if not top_only else
                          sum(counts[b] for b in range(k) for m in range(M.sizes[b][a])
                              if not M.is_degenerate_digit(b, a, m))
                          for a in range(k)]


def test_enumerate_cells_lexicographic_and_complete():
    for name, M in systems():
        for a in range(M.base.n_objects):
            for n in range(4):
                if cell_count(M, a, n) > 3000:
                    break
                cells = enumerate_cells(M, a, n)
                digits = [c.digits for c in cells]
                assert digits == sorted(digits)
                assert digits == sorted(all_cells(M, a, n))


def test_pointed_classes_match_naive_closure():
    cases = 0
    for name, M in systems():
        for a in range(M.base.n_objects):
            for n in range(5):
                PC = pointed_classes(M, a, n)
                if PC.n_pointed > 500:
                    break
                pointed, part = pointed_partition(M, a, n)
                mine = [(PC.cells[c].digits, f) for c, f in zip(PC.pointed_cell.tolist(), PC.pointed_arrow.tolist())]
                assert sorted(mine) == sorted(pointed)
                pos = {p: i for i, p in enumerate(pointed)}
                got = {frozenset(pos[mine[i]] for i in grp) for grp in partition_of_labels(PC.labels)}
                assert got == part, (name, a, n)
                cases += 1
    assert cases > 40


def test_pointed_classes_count_iterated_representables():
    for name, M in systems():
        cat = M.base
        for a in range(cat.n_objects):
            for n in range(3):
                PC = pointed_classes(M, a, n)
                if PC.n_pointed > 5000:
                    break
                for c in range(cat.n_objects):
                    expect = iterate_G(M, representable(cat, c), n).sizes[a]
                    assert sum(1 for s in PC.class_source if s == c) == expect, (name, a, n, c)


def test_truncation_and_touching_compatibility():
    for name, M in systems():
        for a in range(M.base.n_objects):
            depth = 4 if name not in ("simplex2", "square", "julia") else 2
            approx = approximate_space(M, a, depth)
            assert approx.truncation_ok and approx.compatibility_ok, (name, a)


def test_freyd_touching_graph_is_a_path():
    M = gallery.freyd_system()
    for n in range(7):
        cells, edges = touching_graph(M, 1, n)
        assert edges == [(i, i + 1) for i in range(len(cells) - 1)]


def test_sierpinski_vertex_count():
    M = gallery.sierpinski_system()
    g = M.base.object_index("g")
    for n in range(6):
        model = depth_model(M, g, n)
        assert model.n_cells == 3 ** n
        assert model.face_classes == gasket_vertex_count(n) == 3 * (3 ** n + 1) // 2


def test_streams_on_the_interval():
    M = gallery.freyd_system()
    s = lambda t: parse_stream(M, 1, t)
    assert str(stream_equal_up_to(M, 1, s("L:R"), s("R:L"), 10)) == "Undistinguished"
    assert str(stream_equal_up_to(M, 1, s("L,L:R"), s("L,R:L"), 10)) == "Undistinguished"
    assert str(stream_equal_up_to(M, 1, s(":L"), s(":R"), 10)) == "Distinct(2)"
    assert str(stream_equal_up_to(M, 1, s("L:R"), s("R,L:R"), 10)) == "Distinct(3)"
    # the marked point 1/2 is the common end of the two halves
    assert str(stream_equal_up_to(M, 1, s("1/2:*"), s("L:R"), 10)) == "Undistinguished"
    assert str(stream_equal_up_to(M, 1, s("L:R"), s("R:L"), 5, chain_bound=0)) == "Distinct(1)"
    assert str(stream_equal_up_to(M, 1, s(":L"), s(":R"), 6, chain_bound=100)) == "Undistinguished"


def test_cantor_streams_separate_at_first_difference():
    M = gallery.cantor_system()
    s = lambda t: parse_stream(M, 0, t)
    assert str(stream_equal_up_to(M, 0, s("L,L:R"), s("L,R:L"), 8)) == "Distinct(2)"
    assert str(stream_equal_up_to(M, 0, s(":L"), s("L,L,L:L"), 8)) == "Undistinguished"


def test_stream_parsing_errors():
    M = gallery.freyd_system()
    for bad in ("L,R", "Q:L", "L:", "L:R,0", "L:R:L"):
        with pytest.raises(ValueError):
            parse_stream(M, 1, bad)
    s = parse_stream(M, 1, "L,R:L")
    assert isinstance(s, StreamGenerator) and s.digits(5) == ((1, 0), (1, 1), (1, 0), (1, 0), (1, 0))


def test_discrete_separation():
    assert is_discretely_separated(gallery.cantor_system(), 0, 6)
    assert not is_discretely_separated(gallery.freyd_system(), 1, 2)


def test_resource_guard_keeps_partial_models():
    M = gallery.sierpinski_system()
    with pytest.raises(ResourceLimitError) as info:
        approximate_space(M, 1, 10, max_cells=500)
    fits = [n for n in range(11) if cell_count(M, 1, n) <= 500]
    assert [m.depth for m in info.value.partial] == fits


def test_realizations_consistent():
    for name in ("freyd", "simplex1", "cantor", "sierpinski", "simplex2"):
        M, hints = gallery.load(name)
        for a in range(M.base.n_objects):
            real = geometric_realization(M, a, 3 if name != "simplex2" else 2, hints)
            assert len(real.cells) == cell_count(M, a, real.depth, top_only=True)


def test_sierpinski_realized_corners_are_gasket_vertices():
    M, hints = gallery.load("sierpinski")
    g = M.base.object_index("g")
    for n in range(5):
        real = geometric_realization(M, g, n, hints)
        pts = {tuple(np.round(p, 9).ravel()) for p in real.points if p is not None and len(p) == 1}
        assert len(pts) == gasket_vertex_count(n)


def test_realization_errors():
    M, hints = gallery.load("freyd")
    with pytest.raises(RealizationError):
        geometric_realization(M, 1, 2, None)
    bad = dict(hints.elements)
    key = (1, 1, M.element_index(1, 1, "R"))
    bad[key] = Affine.scale(0.5, (0.6, 0.0))
    with pytest.raises(RealizationError, match="inconsistent"):
        geometric_realization(M, 1, 2, RealizationHints(hints.base, hints.arrows, bad))
