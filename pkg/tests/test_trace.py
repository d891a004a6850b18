import random
from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
import sympy

from unipinv.exact import CommPoly
from unipinv.kernel import NotConstantError
from unipinv.trace import (
    GenericMatrixContext,
    UnsupportedSizeError,
    cayley_hamilton_check,
    check_cyclicity,
    check_equivariance,
    least_rotation,
    mixed_trace_component,
    nagata_higman_degree,
    necklaces,
    trace_algebra_component,
    trace_invariant_generators,
    verify_trace_generation,
)

J2 = [[0, 1], [0, 0]]


def test_necklaces():
    assert least_rotation((2, 1, 1)) == (1, 1, 2)
    assert necklaces(2, 2) == [(1, 1), (1, 2), (2, 2)]
    assert len(necklaces(2, 4)) == 6


def test_nagata_higman():
    d, cert = nagata_higman_degree(2)
    assert d == 3 and cert.ok and cert.positive and cert.negative
    with pytest.raises(UnsupportedSizeError):
        nagata_higman_degree(3)


def nil2_oracle(d, trials=40, seed=1):
    """Multilinear part of random elements u * f^2 * v of the T-ideal of x^2 (sympy)."""
    rng = random.Random(seed)
    xs = sympy.symbols(f"x1:{d + 1}", commutative=False)
    words = [w for w in product(range(d), repeat=d) if len(set(w)) == d]
    rows = []
    monos = [sympy.Integer(1)] + list(xs) + [a * b for a in xs for b in xs]
    for _ in range(trials):
        f = sum(rng.randint(-3, 3) * m for m in monos[1:])
        outer = [sympy.Integer(1)] * d + list(xs)
        u, v = rng.choice(outer), rng.choice(outer)
        expr = sympy.expand(u * f * f * v)
        coeffs = dict.fromkeys(range(len(words)), 0)
        for term in sympy.Add.make_args(expr):
            c, nc = term.args_cnc()
            factors = []
            for a in nc:
                base, exp = a.as_base_exp()
                factors += [xs.index(base)] * int(exp)
            if len(factors) == d and len(set(factors)) == d:
                coeffs[words.index(tuple(factors))] += sympy.Mul(*c)
        rows.append([coeffs[i] for i in range(len(words))])
    return sympy.Matrix(rows).rank(), len(words)


def test_nagata_higman_against_sympy():
    _, cert = nagata_higman_degree(2)
    assert nil2_oracle(2) == (cert.dims[0], 2)
    assert nil2_oracle(3) == (cert.dims[1], 6)
    assert cert.dims == (1, 6)


def eval_rank(polys, nv, points=40, seed=7):
    rng = random.Random(seed)
    rows = []
    for _ in range(points):
        pt = [Fraction(rng.randint(-9, 9)) for _ in range(nv)]
        rows.append([eval_poly(p, pt) for p in polys])
    return fraction_rank(rows)


def fraction_rank(rows):
    rows = [list(r) for r in rows]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] / rows[rank][col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def eval_poly(p, pt):
    total = Fraction(0)
    for e, c in p.terms.items():
        t = c
        for x, k in zip(pt, e):
            t *= x**k
        total += t
    return total


def trace_products(gm, deg, maxlen=3):
    syms = [w for k in range(1, maxlen + 1) for w in necklaces(gm.m, k)]
    out = []
    for r in range(1, deg + 1):
        for combo in combinations_with_replacement(syms, r):
            if sum(len(w) for w in combo) == deg:
                p = CommPoly.const(1, gm.nv)
                for w in combo:
                    p = p * gm.trace_word(w)
                out.append(p)
    return out


def test_trace_component_examples():
    assert [trace_algebra_component(2, 1, k).dim for k in range(4)] == [1, 1, 2, 2]
    gm = GenericMatrixContext(2, 1)
    t1 = trace_algebra_component(2, 1, 1)
    assert t1.contains(gm.to_vector(gm.trace_word((1,)), 1))
    # six products tr(x1)^2, tr(x1)tr(x2), tr(x2)^2, tr(x1^2), tr(x1x2), tr(x2^2) are independent
    assert trace_algebra_component(2, 2, 2).dim == 6


@pytest.mark.parametrize("m,deg", [(1, 3), (1, 4), (2, 2), (2, 3), (2, 4)])
def test_trace_component_against_evaluation(m, deg):
    gm = GenericMatrixContext(2, m)
    assert trace_algebra_component(2, m, deg).dim == eval_rank(trace_products(gm, deg), gm.nv)


def test_mixed_component_examples():
    assert mixed_trace_component(2, 1, 0).dim == 1
    assert mixed_trace_component(2, 1, 1).dim == 2
    gm = GenericMatrixContext(2, 1)
    sq = gm.matmul(gm.generic(1), gm.generic(1))
    assert mixed_trace_component(2, 1, 2, L=1).contains(gm.mat_to_vector(sq, 2))
    assert mixed_trace_component(2, 1, 2, L=1) == mixed_trace_component(2, 1, 2, L=2)


def test_identities():
    assert all(cayley_hamilton_check().values())
    assert check_cyclicity(2, 4) and check_cyclicity(3, 3)
    assert check_equivariance(2, J2)
    assert check_equivariance(3, [[0, 1, 0], [0, 0, 1], [0, 0, 0]], d=2)


def test_tr_x2_not_constant():
    gm = GenericMatrixContext(2, 2)
    from unipinv.trace import TraceEngine

    eng = TraceEngine(2, 2, J2)
    assert eng.apply(gm.trace_word((2,))) == gm.trace_word((1,))


@pytest.fixture(scope="module")
def desk():
    return trace_invariant_generators(2, 2, J2, 4)


def test_desk_case(desk):
    assert desk.certified and desk.word_length == 2
    gm = desk.gm
    assert [desk.pure_text(i) for i in range(3)] == [
        "tr(x1)",
        "tr(x1*x1)",
        "tr(x2)*tr(x1*x1) - tr(x1)*tr(x1*x2)",
    ]
    assert desk.pure_entry[0] == gm.trace_word((1,))
    assert [r.kernel for r in desk.pure_records] == [1, 2, 3, 6]
    assert [r.kernel for r in desk.mixed_records] == [1, 2, 5, 8, 14]
    assert any(m == gm.generic(1) for m in desk.mixed_entry)
    assert desk.mixed_text(0) == "I"


def test_verify_idempotent_and_drop(desk):
    v = verify_trace_generation(desk.pure_entry, desk.mixed_entry, 2, 2, J2, 4)
    assert v.ok and v.first_failure() is None
    v = verify_trace_generation(desk.pure_entry[1:], desk.mixed_entry, 2, 2, J2, 4)
    assert v.first_failure() == ("pure", 1)
    v = verify_trace_generation(desk.pure_entry, desk.mixed_entry[1:], 2, 2, J2, 4)
    assert v.first_failure() == ("mixed", 0)


def test_verify_rejects_non_constant():
    gm = GenericMatrixContext(2, 2)
    with pytest.raises(NotConstantError):
        verify_trace_generation([gm.trace_word((2,))], [], 2, 2, J2, 2)


def test_zero_derivation():
    rep = trace_invariant_generators(2, 2, [[0, 0], [0, 0]], 3)
    assert rep.certified
    texts = [rep.pure_text(i) for i in range(len(rep.pure))]
    assert texts[:2] == ["tr(x1)", "tr(x2)"]


def test_unsupported_size():
    with pytest.raises(UnsupportedSizeError):
        trace_invariant_generators(3, 2, J2, 2)
