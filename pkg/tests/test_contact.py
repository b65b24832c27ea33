import pytest

from sfhkit import fixtures as F
from sfhkit.cobordism import compose_special
from sfhkit.contact import (CobordismPlan, Glue, GluingData, LinkSurgery, OneHandle, ThreeHandle,
                            Translate, check_gluing, eh_class, execute_plan, gluing_map,
                            marking_from, outgoing_violations)
from sfhkit.diagram import (attach_onehandle_annulus, build_translate_triple, disjoint_union,
                            erase_family)
from sfhkit.errors import GluingConditionViolated, MarkingNotCycleCertified, StepMismatch
from sfhkit.linalg import SparseMatrixF2


def test_figure5_eh_vanishes():
    cls = eh_class(marking_from(F.figure5()))
    assert str(cls.generator) == "{x}"
    assert cls.is_zero
    assert cls.vector() == [0]


def test_disk_eh_nonzero():
    cls = eh_class(marking_from(F.disk(), []))
    assert not cls.is_zero
    assert cls.vector() == [1]


def test_marking_with_closed_outgoing_region_rejected():
    assert outgoing_violations(F.figure5(), ["y"]) == [("y", "R2")]
    with pytest.raises(MarkingNotCycleCertified):
        eh_class(marking_from(F.figure5(), ["y"]))


def test_marking_must_be_generator():
    with pytest.raises(MarkingNotCycleCertified):
        marking_from(F.figure5(), ["x", "y"])
    with pytest.raises(MarkingNotCycleCertified):
        outgoing_violations(F.figure5(), ["nope"])


@pytest.mark.parametrize("name", ["disk", "onehandle", "figure5"])
def test_collar_gluing_is_identity(name):
    d = F.BASIC[name]()
    m = gluing_map(GluingData(d, F.collar(d), ("T.p",)))
    assert m.is_identity()
    assert m.provenance[2]["contact_compatibility"] == "assumed"


def test_nested_gluings_compose():
    d = F.figure5()
    c1 = F.collar(d, tag="T")
    c2 = F.collar(c1, tag="U")
    step = compose_special([gluing_map(GluingData(d, c1, ("T.p",))),
                            gluing_map(GluingData(c1, c2, ("U.p",)))])
    direct = gluing_map(GluingData(d, c2, ("T.p", "U.p")))
    assert step.chain == direct.chain
    assert direct.is_identity()


def test_empty_sub_gluing_gives_eh():
    m = gluing_map(GluingData(F.disk(), F.figure5(), ("x",)))
    assert m.matrix.is_zero()
    assert (m.target.total, m.source.total) == (1, 1)


def test_isolated_disks_recorded():
    m = gluing_map(GluingData(F.disk(), F.collar(F.disk()), ("T.p",), isolated_disks=2))
    assert m.provenance[2]["isolated_disks"] == 2


@pytest.mark.parametrize("data", [
    lambda: GluingData(F.disk(), F.figure5(), ()),                    # wrong point count
    lambda: GluingData(F.disk(), F.figure5(), ("y",)),                # closed outgoing region
    lambda: GluingData(F.disk(), F.figure5(), ("w",)),                # unknown crossing
    lambda: GluingData(F.figure5(), F.collar(F.figure5()), ("x",)),   # reuses a sub crossing
    lambda: GluingData(F.disk(), F.collar(F.disk()), ("T.p",), -1),
])
def test_gluing_conditions(data):
    with pytest.raises(GluingConditionViolated):
        check_gluing(data())


def test_gluing_family_mismatch():
    t = build_translate_triple(F.figure5())
    with pytest.raises(GluingConditionViolated):
        check_gluing(GluingData(F.disk(), t, ("x",)))


def weinstein():
    return attach_onehandle_annulus(F.onehandle_annulus(), "R0", "R0")


def test_weinstein_shadow_maps_marked_class():
    w = weinstein()
    eh = eh_class(marking_from(w, ["lo0", "lo1"]))
    assert not eh.is_zero
    res = execute_plan(CobordismPlan(w, (ThreeHandle(),)))
    image = res.map.apply_class(eh.coordinates)
    target_eh = eh_class(marking_from(res.map.target.complex.diagram, ["lo0"]))
    assert image == target_eh.coordinates != 0


def test_plan_associativity():
    d = F.disk()
    steps = [OneHandle("R0", "R0"), OneHandle("R0", "R0"), ThreeHandle()]
    flat = execute_plan(CobordismPlan(d, tuple(steps))).map
    left = execute_plan(CobordismPlan(d, ((steps[0], steps[1]), steps[2]))).map
    right = execute_plan(CobordismPlan(d, (steps[0], (steps[1], steps[2])))).map
    assert flat.chain == left.chain == right.chain
    assert flat.matrix == left.matrix == right.matrix


def test_plan_with_translate_and_surgery():
    c = F.cancellation(F.figure5())
    t = build_translate_triple(c.annulus)
    start = erase_family(t, "beta")
    res = execute_plan(CobordismPlan(start, (Translate(t), LinkSurgery(c.triple))))
    assert res.steps[0].is_identity()
    direct = compose_special(list(res.steps))
    assert res.map.chain == direct.chain
    assert res.map.target.complex.diagram.key() == c.surgered.key()


def test_plan_decomposes_over_classes():
    d = disjoint_union(F.figure5(), F.onehandle_annulus())
    res = execute_plan(CobordismPlan(d, (OneHandle("L.R0", "L.R0"),)))
    parts = res.by_source_class()
    total = SparseMatrixF2.zero(*res.map.shape)
    for ents in parts.values():
        total = total + SparseMatrixF2(res.map.matrix.rows, res.map.matrix.cols, ents)
    assert total == res.map.matrix
    assert res.classes == sorted(res.map.blocks())


def test_plan_glue_step_and_mismatch():
    d = F.figure5()
    res = execute_plan(CobordismPlan(d, (Glue(GluingData(d, F.collar(d), ("T.p",))),)))
    assert res.map.is_identity()
    with pytest.raises(StepMismatch):
        execute_plan(CobordismPlan(F.disk(), (Glue(GluingData(d, F.collar(d), ("T.p",))),)))
    with pytest.raises(StepMismatch):
        execute_plan(CobordismPlan(F.disk(), (Translate(build_translate_triple(d)),)))
    with pytest.raises(StepMismatch):
        execute_plan(CobordismPlan(F.disk(), ("bogus",)))


def test_empty_plan_is_identity():
    res = execute_plan(CobordismPlan(F.figure5(), ()))
    assert res.map.is_identity()
    assert erase_family(build_translate_triple(F.figure5()), "delta").key() == F.figure5().key()
