from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylfold.errors import InvalidInput
from weylfold.linalg import coordinates, in_span, inverse, mat_mul, nullspace, primitive, rank, identity
from weylfold.root_systems import (
    DynkinDiagram,
    DynkinType,
    all_types,
    cartan_matrix,
    classify,
    coxeter_number,
    dynkin_diagram,
    inner_product,
    roots,
    simply_laced_gram,
    submatrix,
    symmetric_form,
)

TYPES_8 = all_types(8)


def block_diag(*ms):
    n = sum(len(m) for m in ms)
    out = [[0] * n for _ in range(n)]
    off = 0
    for m in ms:
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(m)
    return tuple(tuple(r) for r in out)


def test_cartan_examples():
    assert cartan_matrix("A2") == ((2, -1), (-1, 2))
    assert cartan_matrix("A1") == ((2,),)
    assert cartan_matrix("C2") == ((2, -2), (-1, 2))
    assert cartan_matrix("B2") == ((2, -1), (-2, 2))
    assert cartan_matrix("G2") == ((2, -3), (-1, 2))


def test_bourbaki_numbering_of_branch_nodes():
    d5 = cartan_matrix("D5")
    assert d5[2][4] == -1 and d5[3][4] == 0
    e6 = cartan_matrix("E6")
    assert e6[1][3] == -1 and e6[0][2] == -1 and e6[0][1] == 0


@pytest.mark.parametrize("bad", ["B1", "C1", "D2", "E5", "E9", "F3", "G3", "A0", "H3", "", "A"])
def test_invalid_types(bad):
    with pytest.raises(InvalidInput, match="invalid Dynkin type"):
        DynkinType.parse(bad)


def test_parse_variants():
    assert DynkinType.parse("a_4") == DynkinType("A", 4)
    assert str(DynkinType.parse(" E6 ")) == "E6"


def test_inner_product_examples():
    g = simply_laced_gram("A4")
    e1 = (1, 0, 0, 0)
    b1 = (Fraction(1, 2), 0, 0, Fraction(1, 2))
    assert inner_product(e1, e1, g) == 2
    assert inner_product(b1, b1, g) == 1
    assert inner_product(b1, (0, 1, 1, 0), g) == -1
    with pytest.raises(InvalidInput):
        inner_product((1, 0), e1, g)


def test_classify_examples():
    assert classify(((2, -2), (-1, 2))) == [(DynkinType("C", 2), (1, 2))]
    assert classify(((2,),)) == [(DynkinType("A", 1), (1,))]
    assert classify(block_diag(cartan_matrix("A1"), cartan_matrix("A1"))) == [
        (DynkinType("A", 1), (1,)),
        (DynkinType("A", 1), (2,)),
    ]


def test_classify_rejects_affine_and_garbage():
    affine_a2 = ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
    with pytest.raises(InvalidInput, match="not a finite-type Cartan matrix"):
        classify(affine_a2)
    with pytest.raises(InvalidInput):
        classify(((2, 1), (1, 2)))
    with pytest.raises(InvalidInput):
        classify(((2, -1), (0, 2)))


@pytest.mark.parametrize("t", TYPES_8, ids=str)
def test_classify_inverts_cartan(t):
    assert classify(cartan_matrix(t)) == [(t, tuple(range(1, t.rank + 1)))]


@pytest.mark.parametrize("t", [t for t in TYPES_8 if t.rank <= 6], ids=str)
def test_classify_permuted_cartan(t):
    # reverse the node order; the reported node map must undo it
    n = t.rank
    perm = list(reversed(range(n)))
    c = submatrix(cartan_matrix(t), perm)
    [(found, nodes)] = classify(c)
    assert found.rank == n
    assert submatrix(c, [k - 1 for k in nodes]) == cartan_matrix(found)


def test_classify_decomposable_interleaved():
    # A2 on nodes {1,3} and A1 on node 2
    c = ((2, 0, -1), (0, 2, 0), (-1, 0, 2))
    assert classify(c) == [(DynkinType("A", 2), (1, 3)), (DynkinType("A", 1), (2,))]


@pytest.mark.parametrize("t", TYPES_8, ids=str)
def test_diagram_roundtrip(t):
    assert dynkin_diagram(t).cartan() == cartan_matrix(t)
    assert DynkinDiagram.from_cartan(cartan_matrix(t)).simply_laced == t.simply_laced


@pytest.mark.parametrize("t", [t for t in TYPES_8 if t.simply_laced], ids=str)
def test_symmetric_form_is_gram_for_simply_laced(t):
    assert symmetric_form(cartan_matrix(t)) == simply_laced_gram(t)


@pytest.mark.parametrize("t", TYPES_8, ids=str)
def test_symmetric_form_symmetrizes_cartan(t):
    c = cartan_matrix(t)
    b = symmetric_form(c)
    n = len(c)
    assert all(b[i][j] == b[j][i] for i in range(n) for j in range(n))
    assert all(c[i][j] == 2 * b[i][j] / b[i][i] for i in range(n) for j in range(n))
    assert max(b[i][i] for i in range(n)) == 2


def test_roots_examples():
    assert len(roots("A2")) == 6
    assert len(roots("G2")) == 12
    assert sorted(roots("A1")) == [(-1,), (1,)]


@pytest.mark.parametrize("t", [t for t in TYPES_8 if t.rank <= 6 or t.family in "ABCDG"], ids=str)
def test_root_count_is_rank_times_coxeter_number(t):
    rs = roots(t)
    assert len(rs) == t.rank * coxeter_number(t)
    # every root is a non-negative or non-positive combination of simple roots
    assert all(all(x >= 0 for x in r) or all(x <= 0 for x in r) for r in rs)


# exact linear algebra

small = st.integers(-5, 5)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    ns = nullspace(rows, 3)
    assert rank(rows, 3) + len(ns) == 3
    assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows for v in ns)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse(rows):
    m = tuple(tuple(r) for r in rows)
    if rank(m, 3) < 3:
        with pytest.raises(ValueError):
            inverse(m)
    else:
        assert mat_mul(m, inverse(m)) == identity(3)


@given(st.lists(small, min_size=1, max_size=4).filter(any), st.integers(1, 7))
def test_primitive_is_positive_scaling_invariant(v, k):
    p = primitive(v)
    assert primitive([Fraction(x * k, 3) for x in v]) == p
    assert primitive([-x for x in v]) == tuple(-x for x in p)


def test_coordinates_and_span():
    basis = [(1, 1, 0), (0, 1, 1)]
    assert coordinates(basis, (2, 5, 3)) == (2, 3)
    assert in_span(basis, (1, 0, -1))
    assert not in_span(basis, (1, 0, 0))
    with pytest.raises(ValueError):
        coordinates(basis, (1, 0, 0))
