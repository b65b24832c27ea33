import pytest

from helpers import is_tensor_with_identity
from sfhkit import fixtures as F
from sfhkit.cobordism import (compose_special, count_triangles, duality_pairing,
                              filtered_triangle_maps, identity_map, link_surgery_map,
                              one_handle_map, pointwise_map, three_handle_map, triangle_map,
                              translate_identification, validate_annulus_marking)
from sfhkit.complex import compute_sfh, select_theta
from sfhkit.diagram import (annulus_marking, build_translate_triple, disjoint_union,
                            enumerate_generators, erase_family, reverse_orientation)
from sfhkit.errors import (DimensionMismatch, MarkedSubdiagramInvalid, NotTranslateType,
                           SubordinateConditionViolated)
from sfhkit.linalg import SparseMatrixF2

FIXTURES = dict(F.BASIC, torus=F.torus, annulus=F.annulus)


def translate_map(diag):
    t = build_translate_triple(diag)
    return t, compose_special([triangle_map(t, select_theta(t)), translate_identification(t)])


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_translate_triple_is_identity(name):
    _, m = translate_map(FIXTURES[name]())
    assert m.is_identity()
    assert m.chain == SparseMatrixF2.identity(m.chain.rows)


@pytest.mark.parametrize("name", ["onehandle", "figure5", "torus"])
def test_wrong_theta_is_not_identity(name):
    t = build_translate_triple(FIXTURES[name]())
    top = select_theta(t)
    others = [g for g in enumerate_generators(t, ("beta", "delta")) if g != top]
    assert others
    for g in others:
        m = compose_special([triangle_map(t, g), translate_identification(t)])
        assert not m.is_identity()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_filtered_maps_sum_to_full(name):
    t = build_translate_triple(FIXTURES[name]())
    full = triangle_map(t)
    parts = filtered_triangle_maps(t)
    acc = SparseMatrixF2.zero(full.chain.rows, full.chain.cols)
    for m in parts.values():
        acc = acc + m.chain
    assert acc == full.chain
    hom = SparseMatrixF2.zero(*full.shape)
    for m in parts.values():
        hom = hom + m.matrix
    assert hom == full.matrix


def test_triangle_counts_are_cached():
    t = build_translate_triple(F.figure5())
    th = select_theta(t)
    assert count_triangles(t, th) is count_triangles(t, th)


def test_one_handle_sends_x_to_x_theta():
    m = one_handle_map(F.figure5(), "R0", "R0")
    mk = annulus_marking(m.target.complex.diagram)
    for j, g in enumerate(m.source.generators):
        col = [m.target.generators[i] for i, _ in sorted(m.chain.entries) if _ == j]
        assert col == [g.extend(mk["theta"])]
    assert m.shape == (2, 1)


def test_three_handle_after_one_handle_is_zero():
    # g(x) = x x theta and e kills theta, so the composite vanishes
    for f in FIXTURES.values():
        d = f()
        r = F.first_suture_region(d)
        g = one_handle_map(d, r, r)
        e = three_handle_map(g.target.complex.diagram)
        comp = compose_special([g, e])
        assert comp.matrix.is_zero()
        assert e.target.complex.diagram.key() == d.key()


def test_three_handle_sends_low_to_x():
    a = F.onehandle_annulus()
    e = three_handle_map(a)
    mk = annulus_marking(a)
    lo = [g for g in e.source.generators if mk["low"] in g][0]
    assert e.chain.apply(1 << e.source.complex.index(lo)) == 1


def test_bad_annulus_markings():
    a = F.onehandle_annulus()
    mk = annulus_marking(a)
    with pytest.raises(MarkedSubdiagramInvalid):
        validate_annulus_marking(a, dict(mk, bigons=mk["bigons"][:1]))
    with pytest.raises(MarkedSubdiagramInvalid):
        validate_annulus_marking(a, {"alpha": 0})
    with pytest.raises(MarkedSubdiagramInvalid):
        three_handle_map(F.figure5())


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_cancellation_both_orders(name):
    forward, dual = F.cancellation_composites(F.cancellation(FIXTURES[name]()))
    assert forward.is_identity()
    assert dual.is_identity()


def test_two_component_functoriality():
    FL, comp = F.two_component_maps(F.two_component())
    assert comp.chain == FL.chain
    assert comp.matrix == FL.matrix


def test_surgery_requires_subordinate_triple():
    c = F.cancellation(F.disk())
    with pytest.raises(SubordinateConditionViolated):
        link_surgery_map(c.triple, [])
    with pytest.raises(SubordinateConditionViolated):
        link_surgery_map(c.triple, [5])
    with pytest.raises(SubordinateConditionViolated):
        link_surgery_map(F.figure5(), [0])


def test_translate_identification_needs_plain_triple():
    with pytest.raises(NotTranslateType):
        translate_identification(F.cancellation(F.disk()).triple)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_handle_maps_dual_under_reversal(name):
    d = FIXTURES[name]()
    r = F.first_suture_region(d)
    g = one_handle_map(d, r, r)
    a = g.target.complex.diagram
    e = three_handle_map(reverse_orientation(a), annulus_marking(a))
    assert [str(x) for x in e.source.generators] == [str(x) for x in g.target.generators]
    assert e.target.complex.diagram.key() == reverse_orientation(d).key()
    assert e.chain == g.chain.transpose()
    assert e.matrix == g.matrix.transpose()


@pytest.mark.parametrize("name", sorted(FIXTURES) + ["collar"])
def test_pairing_adjoint(name):
    d = F.collar(F.figure5()) if name == "collar" else FIXTURES[name]()
    pr = duality_pairing(d)
    assert pr.adjoint()
    cx, rx = pr.forward.complex, pr.reverse.complex
    for a in range(cx.dim):
        for b in range(rx.dim):
            lhs = pr.pair(1 << a, rx.boundary.apply(1 << b))
            rhs = pr.pair(cx.boundary.apply(1 << a), 1 << b)
            assert lhs == rhs


def test_compose_checks_diagrams():
    a = one_handle_map(F.disk(), "R0", "R0")
    with pytest.raises(DimensionMismatch):
        compose_special([a, identity_map(F.figure5())])
    with pytest.raises(DimensionMismatch):
        compose_special([])


def test_pointwise_map_rejects_missing_images():
    with pytest.raises(DimensionMismatch):
        pointwise_map(F.figure5(), F.torus())


def test_maps_on_unions_are_tensor_products():
    u = disjoint_union(F.figure5(), F.disk())
    m = one_handle_map(u, "R.R0", "R.R0")
    assert is_tensor_with_identity(m, "R")
    small = one_handle_map(F.disk(), "R0", "R0")
    assert m.matrix.rank() == compute_sfh(F.figure5()).total * small.matrix.rank()
    m2 = one_handle_map(u, "L.R0", "L.R0")
    assert is_tensor_with_identity(m2, "L")


def test_routing_reported():
    t = build_translate_triple(F.onehandle_annulus())
    m = triangle_map(t)
    assert m.routing == frozenset({(0, 0)})
    assert erase_family(t, "delta").key() == F.onehandle_annulus().key()


def test_empty_surgery_set_is_identity():
    for f in FIXTURES.values():
        t = build_translate_triple(f())
        m = compose_special([link_surgery_map(t, []), translate_identification(t)])
        assert m.is_identity()


def test_three_handle_rejects_wrong_intersection_count():
    marking = {"alpha": 0, "beta": 0, "theta": "x", "low": "y", "bigons": ["R1", "R2"]}
    with pytest.raises(MarkedSubdiagramInvalid):
        validate_annulus_marking(F.figure5(), marking)


def test_annulus_to_disk_values():
    e = three_handle_map(F.onehandle_annulus())
    assert e.shape == (1, 2)
    assert e.matrix.to_dense() == [[1, 0]]
