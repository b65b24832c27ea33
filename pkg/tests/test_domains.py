import random
from collections import defaultdict
from fractions import Fraction

import pytest

from helpers import random_diagrams
from sfhkit import fixtures as F
from sfhkit.diagram import attach_onehandle_annulus, disjoint_union, enumerate_generators
from sfhkit.domains import (CAP_ENV, DEFAULT_BOUND, Domain, check_admissibility, cone_search,
                            connecting_domain, enumerate_positive_domains, enumeration_cap,
                            maslov_index, periodic_domain_basis, satisfies_boundary,
                            spinc_partition)
from sfhkit.errors import MalformedDomain

SMALL = [d for d in random_diagrams(60, seed=21) if len(d.regions) <= 8]


def vectors_up_to(n, total):
    """All nonnegative integer vectors of length n with sum <= total."""
    if n == 0:
        yield ()
        return
    for a in range(total + 1):
        for rest in vectors_up_to(n - 1, total - a):
            yield (a,) + rest


def test_figure5_connecting_domains():
    d = F.figure5()
    x, y, z = enumerate_generators(d)
    res = connecting_domain(d, y, x)
    assert res.solvable
    assert res.kernel.rank == 0
    assert maslov_index(res.domain) == 1
    assert res.domain.by_region() == {"R2": 1}
    assert connecting_domain(d, z, x).domain.by_region() == {"R1": 1}


def test_annulus_periodic_rank_and_classes():
    a = F.onehandle_annulus()
    assert periodic_domain_basis(a).rank == 1
    part = spinc_partition(a)
    assert part.count == 1


def test_spinc_classes_are_connectable():
    for d in random_diagrams(25, seed=5):
        part = spinc_partition(d)
        gens = part.generators
        for i, x in enumerate(gens):
            for y in gens[i + 1:]:
                same = part.class_id(x) == part.class_id(y)
                assert connecting_domain(d, x, y).solvable == same


def test_union_multiplies_class_counts():
    a, b = F.figure5(), attach_onehandle_annulus(F.torus(), "R0", "R0")
    u = disjoint_union(a, b)
    assert spinc_partition(u).count == spinc_partition(a).count * spinc_partition(b).count


def test_maslov_additive_under_juxtaposition():
    rng = random.Random(9)
    checked = 0
    for d in random_diagrams(40, seed=13):
        part = spinc_partition(d)
        lat = periodic_domain_basis(d)
        for cls in part.classes():
            for _ in range(3):
                x, y, z = (rng.choice(cls) for _ in range(3))
                a = connecting_domain(d, x, y).domain
                b = connecting_domain(d, y, z).domain
                ab = a + b
                assert satisfies_boundary(ab)
                assert maslov_index(ab) == maslov_index(a) + maslov_index(b)
                assert maslov_index(-a) == -maslov_index(a)
                for p in lat.basis:
                    per = Domain(p, (z, z), d)
                    assert maslov_index(ab + per) == maslov_index(ab) + maslov_index(per)
                checked += 1
    assert checked > 50


def test_periodic_domains_have_periodic_boundary():
    for d in random_diagrams(20, seed=2):
        g = enumerate_generators(d)[0]
        for p in periodic_domain_basis(d).basis:
            assert satisfies_boundary(Domain(p, (g, g), d))


@pytest.mark.parametrize("bound", [2, 3])
def test_enumeration_matches_exhaustive_search(bound):
    rng = random.Random(bound)
    assert len(SMALL) >= 20
    for d in SMALL:
        gens = enumerate_generators(d)
        n = len(d.interior_regions)
        pairs = [(rng.choice(gens), rng.choice(gens)) for _ in range(4)]
        for x, y in pairs:
            brute = defaultdict(set)
            for v in vectors_up_to(n, bound):
                dom = Domain(v, (x, y), d)
                if satisfies_boundary(dom):
                    brute[maslov_index(dom)].add(v)
            for mu in set(brute) | {Fraction(0), Fraction(1), Fraction(2)}:
                res = enumerate_positive_domains(d, (x, y), mu, bound=bound)
                got = {dom.coefficients for dom in res.domains}
                assert got == brute.get(mu, set()), (d.summary(), str(x), str(y), mu)


def test_admissibility_matches_cone_search():
    cases = list(SMALL) + [F.parallel_annulus(), disjoint_union(F.figure5(), F.parallel_annulus()),
                           attach_onehandle_annulus(F.parallel_annulus(), "R0", "R1")]
    seen = set()
    for d in cases:
        res = check_admissibility(d)
        brute = cone_search(d, bound=4)
        assert res.admissible == (brute is None)
        seen.add(res.admissible)
        if not res.admissible:
            cert = res.certificate
            assert all(a >= 0 for a in cert) and any(cert)
            assert periodic_domain_basis(d).contains(cert)
    assert seen == {True, False}


def test_parallel_annulus_certificate():
    res = check_admissibility(F.parallel_annulus())
    assert not res.admissible
    assert res.certificate == (1,)
    assert res.periodic_rank == 1


def test_enumeration_flags_truncation():
    d = F.onehandle_annulus()
    lo, th = enumerate_generators(d)
    res = enumerate_positive_domains(d, (th, lo), 1, bound=0)
    assert res.truncated
    assert res.max_total == 1
    assert res.domains == ()


def test_enumeration_complete_when_lp_bounded():
    d = F.onehandle_annulus()
    lo, th = enumerate_generators(d)
    res = enumerate_positive_domains(d, (th, lo), 1)
    assert res.complete
    assert len(res.domains) == 2


def test_enumeration_cap_env(monkeypatch):
    monkeypatch.delenv(CAP_ENV, raising=False)
    assert enumeration_cap() == DEFAULT_BOUND
    monkeypatch.setenv(CAP_ENV, "5")
    assert enumeration_cap() == 5
    monkeypatch.setenv(CAP_ENV, "lots")
    with pytest.raises(MalformedDomain):
        enumeration_cap()


def test_malformed_domains_rejected():
    d = F.figure5()
    x = enumerate_generators(d)[0]
    with pytest.raises(MalformedDomain):
        maslov_index(Domain((1,), (x, x), d))
