import copy
import json
import random

import pytest

from helpers import random_diagrams
from sfhkit import fixtures as F
from sfhkit.diagram import (attach_onehandle_annulus, build_translate_triple, disjoint_union,
                            dumps, enumerate_generators, erase_family, is_nice, load, loads,
                            reverse_orientation, save, swap_beta_delta, translate_correspondence,
                            validate_diagram)
from sfhkit.errors import (InconsistentCellStructure, MalformedInput, RegionNotOnBoundary,
                           UnbalancedDiagram)


def broken(**edits):
    raw = copy.deepcopy(F.FIGURE5)
    for path, value in edits.items():
        node = raw
        keys = path.split("__")
        for k in keys[:-1]:
            node = node[k]
        node[keys[-1]] = value
    return raw


@pytest.mark.parametrize("raw, err", [
    (broken(d=2), MalformedInput),
    (broken(crossings__x=["R0", "R1", "R0"]), MalformedInput),
    (broken(crossings__x=["R0", "R1", "R2", "R2"]), InconsistentCellStructure),
    (broken(regions__R0__touches_suture=False), InconsistentCellStructure),
    (broken(alphas=[["x", "y"]]), InconsistentCellStructure),
    ("not json {", MalformedInput),
    ({"d": 0}, MalformedInput),
])
def test_rejects_bad_input(raw, err):
    with pytest.raises(err):
        validate_diagram(raw)


def test_unequal_families_unbalanced():
    raw = copy.deepcopy(F.PARALLEL_ANNULUS)
    raw["betas"] = []
    with pytest.raises((UnbalancedDiagram, MalformedInput)):
        validate_diagram(raw)


def test_figure5_summary():
    s = F.figure5().summary()
    assert s["d"] == 1 and s["crossings"] == 3 and s["regions"] == 3
    assert s["interior_regions"] == 2


def test_generators_are_matchings():
    assert [str(g) for g in enumerate_generators(F.figure5())] == ["{x}", "{y}", "{z}"]
    assert [str(g) for g in enumerate_generators(F.disk())] == ["{}"]
    ann = F.onehandle_annulus()
    assert len(enumerate_generators(ann)) == 2


def test_round_trip_text_and_file(tmp_path):
    for d in random_diagrams(25, seed=4):
        again = loads(dumps(d))
        assert again == d
        assert dumps(again) == dumps(d)
    p = tmp_path / "f.json"
    save(F.figure5(), p)
    assert load(p).key() == F.figure5().key()
    assert json.loads(p.read_text())["d"] == 1


def test_reverse_is_involution():
    for d in random_diagrams(20, seed=8):
        assert reverse_orientation(reverse_orientation(d)).key() == d.key()


def test_nice_detection():
    assert is_nice(F.figure5())[0]
    ok, bad = is_nice(F.parallel_annulus())
    assert not ok and bad == "M"


def test_disjoint_union_counts():
    u = disjoint_union(F.figure5(), F.torus())
    assert u.d == 2
    assert len(enumerate_generators(u)) == 3
    assert all(c.id.startswith(("L.", "R.")) for c in u.crossings)


def test_attach_requires_suture_region():
    with pytest.raises(RegionNotOnBoundary):
        attach_onehandle_annulus(F.figure5(), "R1", "R0")


def test_attach_adds_one_curve_each():
    a = attach_onehandle_annulus(F.figure5(), "R0", "R0")
    assert a.d == 2
    assert len(enumerate_generators(a)) == 6


def test_translate_triple_erases_back():
    d = F.figure5()
    t = build_translate_triple(d)
    assert t.families == ("alpha", "beta", "delta")
    assert erase_family(t, "delta").key() == d.key()
    corr = translate_correspondence(t)
    assert corr == {"x": "x'", "y": "y'", "z": "z'"}
    ad = erase_family(t, "beta")
    assert sorted(c.id for c in ad.crossings) == ["x'", "y'", "z'"]


def test_swap_twice_is_identity():
    t = F.cancellation(F.disk()).triple
    assert swap_beta_delta(swap_beta_delta(t)).key() == t.key()
    s = swap_beta_delta(t)
    assert erase_family(s, "beta").key() == erase_family(t, "delta").key()


def test_random_builders_are_valid():
    rng = random.Random(0)
    for d in random_diagrams(30, seed=rng.randint(0, 10 ** 6)):
        assert validate_diagram(json.loads(dumps(d))).key() == d.key()


def test_standalone_annulus():
    a = F.annulus()
    s = a.summary()
    assert (s["d"], s["regions"], s["interior_regions"], s["sutures"]) == (1, 4, 2, 2)
    assert s["euler_characteristic"] == 0


def test_parallel_disjoint_cores_are_valid():
    # alpha and beta are each nonzero in H_1, so both families are independent
    p = F.parallel_annulus()
    assert p.d == 1 and not p.crossings
