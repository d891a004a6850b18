from itertools import product

import pytest

from unipinv.exact import NcPoly, commutator, parse_nc
from unipinv.kernel import NotConstantError
from unipinv.linalg import BasisMatrix
from unipinv.relfree import (
    RelFreeAlgebra,
    VarietySpec,
    in_tideal,
    mixed_basis_check,
    proper_component,
    relfree_component,
    relfree_invariant_generators,
    tideal_component,
    verify_relfree_generation,
)

J2 = [[0, 1], [0, 0]]
C2M2 = VarietySpec(2, 2)


def brute_tideal(c, m, n):
    """Span of u * [w1, ..., w_{c+1}] * v over all words, the naive way."""
    words = [tuple(w) for w in product(range(1, m + 1), repeat=n)]
    idx = {w: i for i, w in enumerate(words)}
    vecs = []

    def all_words(k):
        return [tuple(w) for w in product(range(1, m + 1), repeat=k)]

    def splits(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in splits(total - first, parts - 1):
                yield (first,) + rest

    for inner in range(c + 1, n + 1):
        for left in range(n - inner + 1):
            right = n - inner - left
            for lens in splits(inner, c + 1):
                for ws in product(*(all_words(k) for k in lens)):
                    p = commutator(*(NcPoly.word(w, m) for w in ws))
                    for u in all_words(left):
                        for v in all_words(right):
                            q = NcPoly.word(u, m) * p * NcPoly.word(v, m)
                            vecs.append({idx[w]: c_ for w, c_ in q.terms.items()})
    return BasisMatrix(len(words), [v for v in vecs if v])


@pytest.mark.parametrize("c,m,n", [(2, 2, 3), (2, 2, 4), (2, 2, 5), (1, 2, 3), (2, 3, 3), (3, 2, 5)])
def test_tideal_matches_brute_force(c, m, n):
    assert tideal_component(VarietySpec(c, m), n) == brute_tideal(c, m, n)


def test_tideal_examples():
    t3 = tideal_component(C2M2, 3)
    for text in ("x1*x2*x1 - x2*x1*x1 - x1*x1*x2 + x1*x2*x1", "x1*x2*x2 - 2*x2*x1*x2 + x2*x2*x1"):
        assert in_tideal(C2M2, parse_nc(text, 2))
    assert in_tideal(C2M2, commutator(*(NcPoly.letter(i, 2) for i in (1, 2, 1))))
    assert t3.dim == 2
    assert tideal_component(C2M2, 2).dim == 0
    c1 = tideal_component(VarietySpec(1, 2), 2)
    assert c1.dim == 1
    assert in_tideal(VarietySpec(1, 2), parse_nc("x1*x2 - x2*x1", 2))


def test_component_dims():
    assert relfree_component(C2M2, 2).dim == 4
    assert relfree_component(VarietySpec(1, 2), 2).dim == 3
    assert relfree_component(C2M2, 3).dim == 8 - 2
    alg = RelFreeAlgebra(C2M2)
    assert [alg.dim(n) for n in range(2, 9)] == [(n + 1) + (n - 1) for n in range(2, 9)]


def test_proper_examples():
    alg = RelFreeAlgebra(C2M2)
    assert proper_component(C2M2, 0, alg).dim == 1
    assert proper_component(C2M2, 1, alg).dim == 0
    b2 = proper_component(C2M2, 2, alg)
    assert b2.dim == 1 and b2.labels == ["[x1,x2]"]
    assert proper_component(C2M2, 3, alg).dim == 0
    assert proper_component(C2M2, 4, alg).dim == 0
    sq = commutator(NcPoly.letter(1, 2), NcPoly.letter(2, 2)) ** 2
    assert in_tideal(C2M2, sq, alg)
    assert alg.detect_n0(8) == 2


def test_mixed_basis():
    alg = RelFreeAlgebra(C2M2)
    for n in range(9):
        chk = mixed_basis_check(C2M2, n, alg)
        assert chk.ok, n
    assert mixed_basis_check(C2M2, 4, alg).size == 8
    for n in range(5):
        assert mixed_basis_check(VarietySpec(1, 3), n).ok
        assert mixed_basis_check(VarietySpec(3, 2), n).ok


def test_quotient_product_is_well_defined():
    alg = RelFreeAlgebra(C2M2)
    a = parse_nc("x1*x2", 2)
    b = parse_nc("x2*x1", 2)
    ideal_elt = commutator(*(NcPoly.letter(i, 2) for i in (1, 2, 2)))
    lhs = alg.multiply(alg.normal_form(a + NcPoly.zero(2), 2), 2, alg.normal_form(b, 2), 2)
    # adding an identity to a representative changes nothing
    shifted = alg.normal_form(a * NcPoly.letter(1, 2) + ideal_elt, 3)
    assert shifted == alg.normal_form(a * NcPoly.letter(1, 2), 3)
    assert lhs == alg.normal_form(a * b, 4)


def test_desk_case_generators():
    rep = relfree_invariant_generators(C2M2, J2, 8)
    assert rep.certified and rep.verified_degree == 8
    alg = rep._alg
    got = [alg.to_nc(g.vector, g.degree) for g in rep.generators]
    assert [g.degree for g in rep.generators] == [1, 2]
    assert alg.normal_form(got[0], 1) == alg.normal_form(parse_nc("x1", 2), 1)
    want = alg.normal_form(parse_nc("x1*x2 - x2*x1", 2), 2)
    v = alg.normal_form(got[1], 2)
    ratio = {k: v[k] / want[k] for k in want}
    assert set(v) == set(want) and len(set(ratio.values())) == 1
    assert all(r.oracle == r.kernel == r.generated for r in rep.records)


def test_commutative_case():
    rep = relfree_invariant_generators(VarietySpec(1, 2), J2, 6)
    assert rep.certified
    assert [rep._alg.to_nc(g.vector, g.degree).to_text() for g in rep.generators] == ["x1"]


def test_zero_derivation():
    rep = relfree_invariant_generators(C2M2, [[0, 0], [0, 0]], 5)
    assert rep.certified
    assert [g.degree for g in rep.generators] == [1, 1]


def test_second_desk_case():
    delta = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
    rep = relfree_invariant_generators(VarietySpec(2, 3), delta, 5)
    assert rep.certified
    assert all(r.oracle == r.kernel for r in rep.records)


def test_class_three():
    rep = relfree_invariant_generators(VarietySpec(3, 2), J2, 5)
    assert rep.certified


def test_verify_examples():
    gens = [parse_nc("x1", 2), parse_nc("x1*x2 - x2*x1", 2)]
    assert all(c.ok for c in verify_relfree_generation(gens, C2M2, J2, 6))
    checks = verify_relfree_generation(gens[:1], C2M2, J2, 6)
    assert min(c.n for c in checks if not c.ok) == 2
    with pytest.raises(NotConstantError):
        verify_relfree_generation([parse_nc("x2", 2)], C2M2, J2, 3)


def test_bad_spec():
    with pytest.raises(ValueError):
        VarietySpec(0, 2)
