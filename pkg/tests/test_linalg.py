from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipinv.linalg import BasisMatrix, complement, express, intersection, nullspace, rank, span_membership


def rows(bm):
    return [[r.get(j, 0) for j in range(bm.ncols)] for r in bm.rows]


def test_nullspace_examples():
    assert rows(nullspace([[0, 1], [0, 0]])) == [[1, 0]]
    assert nullspace([[1, 0], [0, 1]]).dim == 0
    assert rows(nullspace([[1, 1], [1, 1]])) == [[1, -1]]


def test_span_membership_examples():
    s = BasisMatrix(2, [[1, 0], [0, 1]])
    assert span_membership(s, [1, 1]) == [1, 1]
    assert span_membership(BasisMatrix(2, [[0, 1]]), [1, 0]) is None
    assert span_membership(s, [0, 0]) == [0, 0]


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        span_membership(BasisMatrix(2, [[1, 0]]), [1, 0, 0])


def test_canonical_form_unique():
    a = BasisMatrix(3, [[1, 2, 3], [0, 1, 1]])
    b = BasisMatrix(3, [[1, 3, 4], [2, 5, 7]])
    assert a == b
    assert all(r[p] == 1 for p, r in zip(a.pivots, a.rows))


def test_complement_and_intersection():
    sub = BasisMatrix(3, [[1, 0, 0]])
    comp = complement(sub, [{0: 1, 1: 1}, {1: 2}, {2: 1}], 3)
    assert comp.dim == 2 and not any(sub.contains(r) for r in comp.rows)
    inter = intersection(BasisMatrix(3, [[1, 0, 0], [0, 1, 0]]), BasisMatrix(3, [[0, 1, 0], [0, 0, 1]]))
    assert rows(inter) == [[0, 1, 0]]


def test_express_solves():
    vecs = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}]
    c = express(vecs, {0: Fraction(2), 1: Fraction(5)})
    assert c == [2, 3]
    assert express(vecs, {2: Fraction(1)}) is None


entries = st.integers(-3, 3).map(Fraction)
matrices = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=1, max_size=4)
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_nullity(m):
    ncols = len(m[0])
    ns = nullspace(m)
    for v in ns.rows:
        for row in m:
            assert sum(row[j] * v.get(j, 0) for j in range(ncols)) == 0
    assert ns.dim + rank(m, ncols) == ncols


@settings(max_examples=80, deadline=None)
@given(matrices, st.lists(entries, min_size=4, max_size=4))
def test_membership_coordinates(m, coeffs):
    ncols = len(m[0])
    s = BasisMatrix(ncols, m)
    v = [sum(c * r[j] for c, r in zip(coeffs, m)) for j in range(ncols)]
    c = span_membership(s, v)
    assert c is not None
    assert [sum(ci * r.get(j, 0) for ci, r in zip(c, s.rows)) for j in range(ncols)] == v
