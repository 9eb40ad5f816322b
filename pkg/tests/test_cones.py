from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylfold.acceptance import simplicial_chamber, single_chamber_cases, sl4_fan
from weylfold.cones import (
    MoriFanData,
    check_duality,
    cone_faces,
    dual_cone,
    face_lattice,
    face_weyl,
    fundamental_domain_check,
    movable_cone_rays,
    psi_face_map,
)
from weylfold.errors import ConsistencyError, InvalidInput
from weylfold.linalg import primitive
from weylfold.namikawa import LeafDatum, SingularityData, namikawa_weyl


def quadrant(tags=("P:1", "Q:1"), action=None):
    obj = {
        "dim": 2,
        "hyperplanes": [
            {"normal": [1, 0], **({"generator": tags[0]} if tags[0] else {})},
            {"normal": [0, 1], **({"generator": tags[1]} if tags[1] else {})},
        ],
        "chambers": [{"rays": [[1, 0], [0, 1]]}],
    }
    if action is not None:
        obj["weyl_action"] = action
    return MoriFanData.from_json(obj)


TWO_A1 = SingularityData((LeafDatum.make("P", "A1"), LeafDatum.make("Q", "A1")))


def sl4():
    fan, sing = sl4_fan()
    return fan, namikawa_weyl(sing)


def test_sl4_faces():
    fan, wx = sl4()
    faces = face_lattice(fan)
    assert len(faces) == 8
    orders = {f.rays: face_weyl(f, fan, wx).order for f in faces}
    assert orders[()] == 2
    assert orders[((1, 0),)] == 2 and orders[((-1, 0),)] == 2
    assert sum(1 for o in orders.values() if o == 1) == 5
    for f in faces:
        if f.dim == 2:
            assert orders[f.rays] == 1


def test_sl4_psi_report():
    fan, wx = sl4()
    r = psi_face_map(fan, wx)
    assert r.surjective and not r.injective and not r.bijective
    assert r.chambers == 3


def test_sl4_fundamental_domain():
    fan, _ = sl4()
    assert fundamental_domain_check(fan)


def test_quadrant():
    fan = quadrant()
    assert len(face_lattice(fan)) == 4
    r = psi_face_map(fan, namikawa_weyl(TWO_A1))
    assert r.bijective
    assert sorted(p.order for p in r.images) == [1, 2, 2, 4]


def test_ray_in_dimension_one():
    fan = MoriFanData.from_json({"dim": 1, "hyperplanes": [{"normal": [1], "generator": "L:1"}], "chambers": [{"rays": [[1]]}]})
    assert [f.dim for f in face_lattice(fan)] == [0, 1]
    r = psi_face_map(fan, namikawa_weyl(SingularityData((LeafDatum.make("L", "A1"),))))
    assert r.bijective


def test_untagged_interior_wall_gives_trivial_group():
    # upper half plane split by the untagged wall x = 0; the x-axis is H_s
    obj = {
        "dim": 2,
        "hyperplanes": [{"normal": [0, 1], "generator": "L:1"}, {"normal": [1, 0]}],
        "chambers": [{"rays": [[1, 0], [0, 1]]}, {"rays": [[0, 1], [-1, 0]]}],
    }
    fan = MoriFanData.from_json(obj)
    wx = namikawa_weyl(SingularityData((LeafDatum.make("L", "A1"),)))
    for f in face_lattice(fan):
        if f.rays and all(r[1] > 0 for r in f.rays):
            assert face_weyl(f, fan, wx).order == 1


def test_untagged_boundary_wall_is_an_error():
    fan = quadrant(tags=("P:1", None))
    wx = namikawa_weyl(TWO_A1)
    with pytest.raises(InvalidInput, match="generator tag missing"):
        psi_face_map(fan, wx)


def test_bijectivity_mismatch_is_a_consistency_error():
    # one chamber but both walls tagged by the same generator: not injective
    fan = quadrant(tags=("P:1", "P:1"))
    with pytest.raises(ConsistencyError):
        psi_face_map(fan, namikawa_weyl(TWO_A1))


@pytest.mark.parametrize(
    "obj",
    [
        {"dim": 2, "hyperplanes": [], "chambers": [{"rays": [[1, 0], [0, 1]]}]},
        {"dim": 2, "hyperplanes": [{"normal": [1, 0]}, {"normal": [0, 1]}],
         "chambers": [{"rays": [[1, 0], [0, 1]]}, {"rays": [[1, 0], [0, 1]]}]},
        {"dim": 5, "hyperplanes": [], "chambers": [{"rays": [[1, 0, 0, 0, 0]]}]},
        {"dim": 2, "chambers": [{"rays": [[1, 0, 0]]}]},
        {"dim": 2},
        {"dim": 2, "hyperplanes": [{"normal": [0, 0]}], "chambers": [{"rays": [[1, 0], [0, 1]]}]},
    ],
)
def test_invalid_fans(obj):
    with pytest.raises(InvalidInput):
        MoriFanData.from_json(obj)


def test_fundamental_domain_examples():
    assert fundamental_domain_check(quadrant(action=[[[-1, 0], [0, 1]], [[1, 0], [0, -1]]]))
    assert not fundamental_domain_check(quadrant(action=[]))
    assert not fundamental_domain_check(quadrant(action=[[[-1, 0], [0, 1]]]))


def test_trivial_action_on_whole_line():
    obj = {"dim": 1, "hyperplanes": [{"normal": [1]}], "chambers": [{"rays": [[1]]}, {"rays": [[-1]]}], "weyl_action": []}
    assert fundamental_domain_check(MoriFanData.from_json(obj))


def test_dual_cone_examples():
    assert dual_cone([(1, 0), (0, 1)]) == [(0, 1), (1, 0)]
    fan, _ = sl4()
    assert dual_cone(movable_cone_rays(fan), 2) == [(0, 1)]
    assert dual_cone(halfspaces=[(0, 1)], d=2) == [(0, 1)]
    assert check_duality([(0, 3)], movable_cone_rays(fan), 2)
    with pytest.raises(InvalidInput):
        dual_cone([(1, 0)], 2)


def test_face_lattice_graded_and_order_reversing():
    fans = [sl4()] + [(f, namikawa_weyl(s)) for f, s in map(simplicial_chamber, single_chamber_cases())]
    for fan, wx in fans:
        faces = face_lattice(fan)
        assert [f for f in faces if f.dim == 0] == [faces[0]] and faces[0].rays == ()
        for f in faces:
            if f.dim > 0:
                assert any(g.dim == f.dim - 1 and g.is_subface_of(f) for g in faces)
        groups = {f: face_weyl(f, fan, wx) for f in faces}
        for f1, f2 in itertools.permutations(faces, 2):
            if f1.is_subface_of(f2):
                assert groups[f2].issubgroup(groups[f1])


def test_single_chamber_bijection_all_sizes():
    for rays in single_chamber_cases():
        fan, sing = simplicial_chamber(rays)
        r = psi_face_map(fan, namikawa_weyl(sing))
        assert r.bijective and len(r.faces) == 2 ** fan.dim


vec = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any)


@settings(max_examples=40, deadline=None)
@given(st.lists(vec, min_size=3, max_size=6))
def test_dual_of_dual(rays):
    from weylfold.linalg import rank

    if rank(rays, 3) < 3:
        return
    facets = dual_cone(rays, 3)
    # a pointed full cone: the double dual gives back its extremal rays
    if rank(facets, 3) < 3:
        return
    double = dual_cone(facets, 3)
    assert all(all(sum(a * b for a, b in zip(n, r)) >= 0 for n in facets) for r in rays)
    assert set(double) <= {primitive(r) for r in rays}
    assert dual_cone(double, 3) == facets


def test_cone_faces_of_simplicial_cone():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    faces = cone_faces(rays, 3)
    assert len(faces) == 8
    assert sorted(len(f) for f in faces) == [0, 1, 1, 1, 2, 2, 2, 3]


def test_fan_json_roundtrip():
    fan, _ = sl4()
    again = MoriFanData.from_json(fan.to_json())
    assert again.to_json() == fan.to_json()
    assert [h.normal for h in again.hyperplanes][0] == (Fraction(0), Fraction(1))
