"""Nondegeneracy of functors and validity of systems."""
import itertools

import numpy as np

from selfsim import gallery
from selfsim.bimodule import Bimodule
from selfsim.fincat import CoPresheaf, FinCategory
from selfsim.nondegen import is_nondegenerate, is_valid_system
from oracles import nondegenerate_oracle, random_system


def freyd_base():
    return FinCategory.build(["0", "1"], [("inf", "0", "1"), ("sup", "0", "1")])


def all_freyd_functors(max0=2, max1=4):
    cat = freyd_base()
    for n0 in range(max0 + 1):
        for n1 in range(max1 + 1):
            tables = list(itertools.product(range(n1), repeat=n0))
            for u, v in itertools.product(tables, repeat=2):
                yield CoPresheaf(cat, (n0, n1), (tuple(range(n0)), tuple(range(n1)), u, v))


def injective_disjoint(X):
    u, v = X.actions[2], X.actions[3]
    return len(set(u)) == len(u) and len(set(v)) == len(v) and not set(u) & set(v)


def test_freyd_characterization_exhaustive():
    count = mismatches = 0
    for X in all_freyd_functors():
        count += 1
        if bool(is_nondegenerate(X)) != injective_disjoint(X):
            mismatches += 1
    assert count == 389
    assert mismatches == 0


def test_freyd_witnesses_point_at_the_failure():
    for X in all_freyd_functors(2, 3):
        res = is_nondegenerate(X)
        if res:
            continue
        u, v = X.actions[2], X.actions[3]
        if res.kind == "pair":
            p, q = res.witness
            assert p in res.component and q in res.component
            # no element maps to both
            reach = [{(0, z), (1, u[z]), (1, v[z])} for z in range(X.sizes[0])]
            reach += [{(1, y)} for y in range(X.sizes[1])]
            assert not any(p in r and q in r for r in reach)
        else:
            f, g, (a, x) = res.witness
            assert a == 0 and {f, g} == {2, 3} and u[x] == v[x]
        assert "degenerate" in res.describe(X)


def test_agrees_with_cone_oracle_on_random_functors():
    for seed in range(150):
        _, X = random_system(np.random.default_rng(seed))
        assert bool(is_nondegenerate(X)) == nondegenerate_oracle(X), seed


def test_gallery_systems_valid():
    for name, make in gallery.GALLERY.items():
        rep = is_valid_system(make())
        assert rep.valid, name
        assert all(f.finite for f in rep.finiteness)


def test_degenerate_system_rejected():
    # both endpoints of the interval sent to the same marked point
    cat = freyd_base()
    M = Bimodule.build(cat, {("0", "0"): ["*"], ("0", "1"): ["p"], ("1", "1"): ["A"]},
                       rho={("inf", "1"): {"A": "p"}, ("sup", "1"): {"A": "p"}},
                       lam={("inf", "0"): {"*": "p"}, ("sup", "0"): {"*": "p"}})
    rep = is_valid_system(M)
    assert not rep.valid
    assert rep.slices[0].kind == "parallel"
    assert rep.slices[1].nondegenerate
