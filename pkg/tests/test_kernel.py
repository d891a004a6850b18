import pytest

from unipinv.exact import CommPoly, parse_comm
from unipinv.kernel import (
    NotConstantError,
    kernel_component,
    minimal_generators,
    to_original,
    verify_generation,
)
from unipinv.linalg import BasisMatrix
from unipinv.nilpotent import as_matrix, cell_matrix, inverse, matmul
from unipinv.sl2 import DerivationContext, apply_delta

W1 = DerivationContext((1,))
W2 = DerivationContext((2,))
W11 = DerivationContext((1, 1))


def span(ctx, polys, n):
    return BasisMatrix(len(ctx.monomials(n)), [ctx.to_vector(p, n) for p in polys])


def derive(f, n):
    """Apply x_i -> sum_j n[j][i] x_j as a derivation, in original coordinates."""
    k = f.nvars
    out = CommPoly.zero(k)
    for exp, c in f.terms.items():
        for i, e in enumerate(exp):
            if not e:
                continue
            lower = list(exp)
            lower[i] -= 1
            for j in range(k):
                if n[j][i]:
                    out = out + CommPoly.monomial(lower, c * e * n[j][i]) * CommPoly.var(j, k)
    return out


def test_kernel_component_examples():
    assert kernel_component(W1, 3) == span(W1, [W1.var(0) ** 3], 3)
    f = parse_comm("y1^2 - 2*y0*y2", W2.names)
    assert kernel_component(W2, 2) == span(W2, [W2.var(0) ** 2, f], 2)
    assert kernel_component(W11, 0).dim == 1


def test_minimal_generators_examples():
    rep = minimal_generators(W1, 4)
    assert [W1.text(g) for g in rep.generators] == ["y0"]
    rep = minimal_generators(W2, 4)
    assert [W2.text(g) for g in rep.generators] == ["y0", "y1^2 - 2*y0*y2"]
    assert rep.certified and rep.verified_degree == 4
    rep = minimal_generators(W11, 4)
    # variables y0,y1 (first cell) and y2,y3 (second): {y0, z0, y0 z1 - y1 z0}
    gens = [parse_comm(t, W11.names) for t in ("y0", "y2", "y0*y3 - y1*y2")]
    for n in range(1, 5):
        expected = [g for g in gens if g.degree() == n]
        got = [g for g, d in zip(rep.generators, rep.degrees) if d == n]
        assert span(W11, got, n) == span(W11, expected, n)


def test_every_generator_is_constant():
    for ctx in (W1, W2, W11, DerivationContext((2, 1))):
        rep = minimal_generators(ctx, 5)
        assert rep.certified
        assert all(apply_delta(ctx, g).is_zero() for g in rep.generators)
        assert all(r.oracle == r.kernel for r in rep.records)


def test_verify_generation_examples():
    assert all(c.ok for c in verify_generation([W1.var(0)], W1, 6))
    checks = verify_generation([W1.var(0) ** 2], W1, 3)
    assert [c.n for c in checks if not c.ok] == [1, 3]
    rep = minimal_generators(W2, 4)
    assert all(c.ok for c in verify_generation(rep.generators, W2, 4))


def test_verify_rejects_non_constant():
    with pytest.raises(NotConstantError) as err:
        verify_generation([W1.var(1)], W1, 2)
    assert err.value.image == W1.var(0)


def test_zero_derivation_fast_path():
    ctx = DerivationContext((0, 0, 0))
    rep = minimal_generators(ctx, 3)
    assert [ctx.text(g) for g in rep.generators] == ["y0", "y1", "y2"]
    assert rep.certified


def test_default_degree():
    assert minimal_generators(W2).verified_degree == 6


def test_threads_do_not_change_output(monkeypatch):
    a = minimal_generators(DerivationContext((2, 1)), 5, threads=1)
    b = minimal_generators(DerivationContext((2, 1)), 5, threads=4)
    assert a.generators == b.generators and a.degrees == b.degrees


def test_conjugation_covariance():
    n = cell_matrix([2])
    p = as_matrix([[1, 0, 1], [2, 1, 0], [0, 1, 1]])
    conj = matmul(matmul(p, n), inverse(p))
    a = DerivationContext.from_matrix(n)
    b = DerivationContext.from_matrix(conj)
    ga = [to_original(a, g) for g in minimal_generators(a, 4).generators]
    gb = [to_original(b, g) for g in minimal_generators(b, 4).generators]
    # x -> P x sends constants of n to constants of P n P^-1
    xs = [CommPoly(3, {tuple(int(k == i) for k in range(3)): p[i][j] for i in range(3)}) for j in range(3)]
    pushed = [g.substitute(xs) for g in ga]
    for g in pushed:
        assert derive(g, conj).is_zero()
    assert sorted(g.degree() for g in pushed) == sorted(g.degree() for g in gb)
