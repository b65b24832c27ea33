import pytest

from helpers import random_diagrams
from sfhkit import fixtures as F
from sfhkit.complex import (brute_force_differential, compute_sfh, differential_matrix,
                            relative_grading, select_theta)
from sfhkit.diagram import (attach_onehandle_annulus, build_translate_triple, disjoint_union,
                            enumerate_generators, reverse_orientation)
from sfhkit.errors import NotNice, NotTranslateType

RANDOM = random_diagrams(120, seed=1)


def names(gs):
    return [str(g) for g in gs]


def test_figure5_differential():
    cx = compute_sfh(F.figure5()).complex
    x, y, z = cx.generators
    assert cx.d(x) == []
    assert cx.d(y) == [x]
    assert cx.d(z) == [x]
    assert compute_sfh(F.figure5()).total == 1


def test_disk_and_torus_rank_one():
    assert compute_sfh(F.disk()).total == 1
    assert compute_sfh(F.torus()).total == 1


def test_annulus_rank_and_grading_gap():
    a = F.onehandle_annulus()
    sfh = compute_sfh(a)
    assert sfh.total == 2
    lo, th = sfh.generators
    gr = relative_grading(a, 0)
    assert gr.divisor == 0
    assert gr.difference(th, lo) == 1


def test_square_zero_on_random_nice_diagrams():
    assert len(RANDOM) >= 100
    for d in RANDOM:
        cx = differential_matrix(d)
        assert (cx.boundary @ cx.boundary).is_zero()


def test_differential_matches_brute_force():
    small = [d for d in RANDOM if len(d.regions) <= 8][:40]
    assert len(small) >= 20
    for d in small:
        assert differential_matrix(d).boundary == brute_force_differential(d)


def test_blocks_and_gradings():
    for d in RANDOM[:60]:
        cx = differential_matrix(d)
        assert cx.block_diagonal()
        assert cx.grading_drops()


def test_class_ranks_sum_to_total():
    for d in RANDOM[:60]:
        sfh = compute_sfh(d)
        assert sum(r for _, r in sfh.class_ranks) == sfh.total
        assert len(sfh.basis_classes()) == sfh.total


def test_rank_doubles_under_one_handle():
    for d in list(F.BASIC.values()) + [F.torus, F.annulus]:
        base = d()
        r = F.first_suture_region(base)
        assert compute_sfh(attach_onehandle_annulus(base, r, r)).total == 2 * compute_sfh(base).total


def test_reverse_preserves_rank():
    for d in RANDOM[:40]:
        assert compute_sfh(reverse_orientation(d)).total == compute_sfh(d).total


def test_union_rank_multiplies():
    for a in RANDOM[:8]:
        for b in (F.figure5(), F.onehandle_annulus()):
            if a.d + b.d > 5:
                continue
            assert compute_sfh(disjoint_union(a, b)).total == compute_sfh(a).total * compute_sfh(b).total


def test_not_nice_rejected():
    with pytest.raises(NotNice):
        compute_sfh(F.parallel_annulus())


def test_homology_basis_is_cycles():
    for d in RANDOM[:30]:
        sfh = compute_sfh(d)
        for z in sfh.homology.basis:
            assert sfh.complex.boundary.apply(z) == 0


def test_theta_is_top_generator():
    t = build_translate_triple(F.figure5())
    th = select_theta(t)
    assert len(th) == 1
    with pytest.raises(NotTranslateType):
        select_theta(F.figure5())


def test_theta_for_annulus_translate():
    a = F.onehandle_annulus()
    t = build_translate_triple(a)
    th = select_theta(t)
    assert len(th) == a.d
    assert all(p in {c.id for c in t.crossings if c.families == ("beta", "delta")} for p in th)


def test_results_stable_across_reloads():
    from sfhkit.diagram import dumps, loads
    d = attach_onehandle_annulus(F.figure5(), "R0", "R0")
    a, b = compute_sfh(d), compute_sfh(loads(dumps(d)))
    assert names(a.generators) == names(b.generators)
    assert a.complex.boundary == b.complex.boundary
    assert a.homology.basis == b.homology.basis


def test_standalone_annulus_rank_two():
    a = F.annulus()
    sfh = compute_sfh(a)
    assert sfh.total == 2
    assert sfh.complex.boundary.is_zero()
