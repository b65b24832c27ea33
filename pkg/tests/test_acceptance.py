"""Acceptance criteria, one test each.

Every test records PASS/FAIL in RESULTS; conftest prints one line per
criterion at the end of the run.  ``python3 tests/test_acceptance.py``
runs the checks without pytest.
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import is_tensor_with_identity, random_diagrams  # noqa: E402
from sfhkit import fixtures as F  # noqa: E402
from sfhkit.cobordism import (compose_special, duality_pairing, filtered_triangle_maps,  # noqa: E402
                              one_handle_map, three_handle_map, triangle_map,
                              translate_identification)
from sfhkit.complex import (brute_force_differential, compute_sfh, differential_matrix,  # noqa: E402
                            relative_grading, select_theta)
from sfhkit.contact import (CobordismPlan, GluingData, OneHandle, ThreeHandle, eh_class,  # noqa: E402
                            execute_plan, gluing_map, marking_from)
from sfhkit.diagram import (annulus_marking, attach_onehandle_annulus, build_translate_triple,  # noqa: E402
                            disjoint_union, enumerate_generators, reverse_orientation)
from sfhkit.domains import (Domain, check_admissibility, cone_search, connecting_domain,  # noqa: E402
                            enumerate_positive_domains, maslov_index, satisfies_boundary)
from sfhkit.linalg import SparseMatrixF2  # noqa: E402

RESULTS: dict[int, tuple[str, bool]] = {}

FIXTURES = {"disk": F.disk, "onehandle": F.onehandle_annulus, "annulus": F.annulus,
            "figure5": F.figure5, "torus": F.torus}


def criterion(num, title):
    def wrap(fn):
        def test():
            ok = False
            try:
                fn()
                ok = True
            finally:
                RESULTS[num] = (title, ok)
                print(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}: {title}")
        test.__name__ = fn.__name__
        test.criterion = num
        return test
    return wrap


@criterion(1, "Figure-5 complex, rank 1, EH = 0")
def test_c01_figure5():
    d = F.figure5()
    sfh = compute_sfh(d)
    cx = sfh.complex
    x, y, z = cx.generators
    assert [str(g) for g in cx.generators] == ["{x}", "{y}", "{z}"]
    assert cx.d(x) == [] and cx.d(y) == [x] and cx.d(z) == [x]
    assert sfh.total == 1
    assert eh_class(marking_from(d, ["x"])).is_zero


@criterion(2, "disk: rank 1, EH of the empty generator nonzero")
def test_c02_disk():
    d = F.disk()
    assert compute_sfh(d).total == 1
    assert not eh_class(marking_from(d, [])).is_zero


@criterion(3, "one-handle annulus: admissible, rank 2, grading gap 1")
def test_c03_annulus():
    for a in (F.onehandle_annulus(), F.annulus()):
        adm = check_admissibility(a)
        assert adm.admissible and adm.periodic_rank == 1
        sfh = compute_sfh(a)
        assert sfh.total == 2
        lo, th = sfh.generators
        assert relative_grading(a, 0).difference(th, lo) == 1


@criterion(4, "rank doubles under a one-handle annulus")
def test_c04_rank_doubling():
    for f in FIXTURES.values():
        d = f()
        r = F.first_suture_region(d)
        assert compute_sfh(attach_onehandle_annulus(d, r, r)).total == 2 * compute_sfh(d).total


@criterion(5, "translate triple and trivial collar give the identity")
def test_c05_identity_cobordisms():
    for f in FIXTURES.values():
        d = f()
        t = build_translate_triple(d)
        m = compose_special([triangle_map(t, select_theta(t)), translate_identification(t)])
        assert m.is_identity()
        assert gluing_map(GluingData(d, F.collar(d), ("T.p",))).is_identity()


@criterion(6, "one-handle/two-handle and two-handle/three-handle cancel")
def test_c06_cancellation():
    for f in FIXTURES.values():
        forward, dual = F.cancellation_composites(F.cancellation(f()))
        assert forward.is_identity()
        assert dual.is_identity()


@criterion(7, "two-component surgery is functorial; plans associate")
def test_c07_functoriality():
    FL, comp = F.two_component_maps(F.two_component())
    assert comp.matrix == FL.matrix and comp.chain == FL.chain
    d = F.disk()
    s = [OneHandle("R0", "R0"), OneHandle("R0", "R0"), ThreeHandle()]
    a = execute_plan(CobordismPlan(d, ((s[0], s[1]), s[2]))).map
    b = execute_plan(CobordismPlan(d, (s[0], (s[1], s[2])))).map
    assert a.matrix == b.matrix and a.chain == b.chain


@criterion(8, "reversed diagrams give transposed maps; pairing is adjoint")
def test_c08_duality():
    for f in FIXTURES.values():
        d = f()
        r = F.first_suture_region(d)
        g = one_handle_map(d, r, r)
        a = g.target.complex.diagram
        e = three_handle_map(reverse_orientation(a), annulus_marking(a))
        assert e.chain == g.chain.transpose()
        assert e.matrix == g.matrix.transpose()
        assert duality_pairing(d).adjoint() and duality_pairing(a).adjoint()


@criterion(9, "Spin^c decomposition of differentials and maps")
def test_c09_spinc():
    for d in random_diagrams(30, seed=3):
        assert differential_matrix(d).block_diagonal()
    for f in FIXTURES.values():
        t = build_translate_triple(f())
        full = triangle_map(t)
        acc = SparseMatrixF2.zero(full.chain.rows, full.chain.cols)
        for m in filtered_triangle_maps(t).values():
            acc = acc + m.chain
        assert acc == full.chain
    u = disjoint_union(F.figure5(), F.onehandle_annulus())
    res = execute_plan(CobordismPlan(u, (OneHandle("L.R0", "L.R0"),)))
    acc = SparseMatrixF2.zero(*res.map.shape)
    for ents in res.by_source_class().values():
        acc = acc + SparseMatrixF2(res.map.matrix.rows, res.map.matrix.cols, ents)
    assert acc == res.map.matrix


def _vectors(n, total):
    if n == 0:
        yield ()
        return
    for a in range(total + 1):
        for rest in _vectors(n - 1, total - a):
            yield (a,) + rest


@criterion(10, "property suites: d^2 = 0, Maslov additivity, solver and LP oracles")
def test_c10_properties():
    diags = random_diagrams(110, seed=1)
    for d in diags:
        cx = differential_matrix(d)
        assert (cx.boundary @ cx.boundary).is_zero()
    small = [d for d in diags if len(d.regions) <= 8]
    for d in small[:30]:
        gens = enumerate_generators(d)
        for x in gens[:3]:
            for y in gens[:3]:
                a = connecting_domain(d, x, y).domain
                b = connecting_domain(d, y, x).domain
                if a is not None:
                    assert maslov_index(a + b) == maslov_index(a) + maslov_index(b)
        x, y = gens[0], gens[-1]
        brute = {}
        for v in _vectors(len(d.interior_regions), 2):
            dom = Domain(v, (x, y), d)
            if satisfies_boundary(dom):
                brute.setdefault(maslov_index(dom), set()).add(v)
        for mu, doms in brute.items():
            got = {e.coefficients for e in enumerate_positive_domains(d, (x, y), mu, bound=2).domains}
            assert got == doms
        assert differential_matrix(d).boundary == brute_force_differential(d)
        assert check_admissibility(d).admissible == (cone_search(d, 4) is None)
    p = F.parallel_annulus()
    assert not check_admissibility(p).admissible and cone_search(p, 4) is not None


@criterion(11, "Weinstein one-handle shadow carries x x {y} to x")
def test_c11_weinstein():
    w = attach_onehandle_annulus(F.onehandle_annulus(), "R0", "R0")
    eh = eh_class(marking_from(w, ["lo0", "lo1"]))
    assert not eh.is_zero
    m = execute_plan(CobordismPlan(w, (ThreeHandle(),))).map
    target = eh_class(marking_from(m.target.complex.diagram, ["lo0"]))
    assert m.apply_class(eh.coordinates) == target.coordinates
    assert not target.is_zero


@criterion(12, "disjoint unions: ranks multiply, maps are tensor products")
def test_c12_multiplicativity():
    parts = [F.disk(), F.figure5(), F.onehandle_annulus(), F.torus()]
    for a in parts:
        for b in parts:
            assert compute_sfh(disjoint_union(a, b)).total == compute_sfh(a).total * compute_sfh(b).total
    u = disjoint_union(F.figure5(), F.onehandle_annulus())
    assert is_tensor_with_identity(one_handle_map(u, "R.R0", "R.R0"), "R")
    assert is_tensor_with_identity(one_handle_map(u, "L.R0", "L.R0"), "L")


if __name__ == "__main__":
    t0 = time.time()
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    print(f"{sum(ok for _, ok in RESULTS.values())}/{len(RESULTS)} criteria pass "
          f"in {time.time() - t0:.1f}s")
    sys.exit(0 if all(ok for _, ok in RESULTS.values()) else 1)
