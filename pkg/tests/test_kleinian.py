from __future__ import annotations

import itertools
import random

import pytest

from weylfold.errors import InvalidInput
from weylfold.kleinian import (
    FiberCohomology,
    KleinianPartial,
    deformation_dims,
    end_spr_dim,
    fiber_cohomology,
    generic_point,
    invariant_fiber_check,
    pushforward_kernel,
    quotient_tower,
    report,
    singular_points,
    z_prime_components,
)
from weylfold.root_systems import DynkinType, all_types
from weylfold.weyl import fixed_space_dim, stabilizer_order

ADE_5 = [t for t in all_types(5) if t.simply_laced]
ADE_4 = [t for t in all_types(4) if t.simply_laced]


def kp(t, nodes=()):
    return KleinianPartial.make(t, nodes)


def all_partials(types):
    for t in types:
        for size in range(t.rank + 1):
            for sub in itertools.combinations(range(1, t.rank + 1), size):
                yield KleinianPartial.make(t, sub)


def test_validation():
    with pytest.raises(InvalidInput):
        kp("B3")
    with pytest.raises(InvalidInput):
        kp("A3", [4])
    with pytest.raises(InvalidInput):
        kp("A0")


def test_singular_point_examples():
    [p] = singular_points(kp("A3", [2]))
    assert (p.nodes, str(p.type)) == ((2,), "A1")
    assert [(p.nodes, str(p.type)) for p in singular_points(kp("A3", [1, 3]))] == [((1,), "A1"), ((3,), "A1")]
    assert singular_points(kp("D5", [])) == []
    [p] = singular_points(kp("D5", [2, 3, 4, 5]))
    assert str(p.type) in ("D4",) and p.rank == 4
    [p] = singular_points(kp("D4", [1, 2, 3]))
    assert str(p.type) == "A3"


def test_fiber_cohomology_examples():
    assert fiber_cohomology(kp("A3"), "full") == FiberCohomology(1, 0, 3)
    assert fiber_cohomology(kp("A3", [2]), "partial") == FiberCohomology(1, 0, 2)
    assert fiber_cohomology(kp("A3", [1, 2, 3]), "partial") == FiberCohomology(1, 0, 0)
    with pytest.raises(InvalidInput):
        fiber_cohomology(kp("A3"), "other")


def test_invariant_fiber_examples():
    assert invariant_fiber_check(kp("A3", [2]))
    assert invariant_fiber_check(kp("E6", []))
    assert invariant_fiber_check(kp("D4", [1, 3, 4]))
    assert fixed_space_dim(kp("D4", [1, 3, 4]).parabolic()) == 1


def test_deformation_examples():
    d = deformation_dims(kp("A4", [2, 3]))
    assert (d.dim_pd_total, d.dim_pd_lt, d.local_dims) == (4, 2, (2,))
    d = deformation_dims(kp("A3", [1, 3]))
    assert (d.dim_pd_total, d.dim_pd_lt, d.local_dims) == (3, 1, (1, 1))
    d = deformation_dims(kp("D5"))
    assert (d.dim_pd_total, d.dim_pd_lt, d.local_dims) == (5, 5, ())


def test_kernel_examples():
    assert pushforward_kernel(kp("A3", [2])) == [(0, 1, 0)]
    assert pushforward_kernel(kp("A3")) == []
    assert len(pushforward_kernel(kp("A3", [1, 2, 3]))) == 3


def test_tower_examples():
    assert quotient_tower(kp("A2", [1])).degrees == (2, 6)
    assert quotient_tower(kp("A3", [1, 2])).degrees == (6, 24)
    r = quotient_tower(kp("A3"))
    assert r.degrees == (1, 24) and r.consistent


def test_end_spr_examples():
    assert end_spr_dim(kp("A3", [2])) == 2
    assert end_spr_dim(kp("A3", [1, 2, 3])) == 10
    assert end_spr_dim(kp("A3")) == 1
    assert ("curves", 1, 3) in z_prime_components(kp("A3", [1, 2, 3]))


@pytest.mark.parametrize("t", ADE_5, ids=str)
def test_exhaustive_identities(t):
    for p in all_partials([t]):
        assert invariant_fiber_check(p)
        d = deformation_dims(p)
        assert d.dim_pd_total == d.dim_pd_lt + sum(d.local_dims)
        assert len(pushforward_kernel(p)) + fixed_space_dim(p.parabolic()) == t.rank
        # the singular points partition the contracted nodes
        nodes = [n for sp in singular_points(p) for n in sp.nodes]
        assert sorted(nodes) == sorted(p.contracted)


@pytest.mark.parametrize("t", ADE_5, ids=str)
def test_end_spr_extremes(t):
    assert end_spr_dim(kp(t)) == 1
    assert end_spr_dim(kp(t, range(1, t.rank + 1))) == 1 + t.rank**2


@pytest.mark.parametrize("t", ADE_4, ids=str)
def test_tower_degrees_exhaustive(t):
    for p in all_partials([t]):
        r = quotient_tower(p, samples=20, seed=0)
        assert r.consistent
        assert r.degrees == (p.parabolic().order, p.weyl().order)


def test_generic_point_is_free():
    rng = random.Random(1)
    t = DynkinType("D", 4)
    v = generic_point(t, rng)
    assert stabilizer_order(kp(t).weyl(), v) == 1


def test_report_is_seed_deterministic():
    a = report(kp("D4", [1, 3, 4]), samples=5, seed=3)
    b = report(kp("D4", [1, 3, 4]), samples=5, seed=3)
    assert a == b
    assert a["invariant_check"] and a["b2_partial"] == 1 and a["end_spr_dim"] == 4
