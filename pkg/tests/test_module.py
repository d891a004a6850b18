import pytest

from unipinv.exact import CommPoly, parse_comm
from unipinv.kernel import minimal_generators
from unipinv.linalg import BasisMatrix
from unipinv.module import (
    ModuleContext,
    ModuleElement,
    SeedError,
    cell_constant_from_seed,
    lift_invariant,
    module_delta,
    module_generators,
    module_kernel_component,
    module_kernel_oracle,
    seed_map_bijective,
    to_vector,
    verify_module_generation,
)
from unipinv.sl2 import DerivationContext

W1 = DerivationContext((1,))
W2 = DerivationContext((2,))


def el(mc, *texts):
    return ModuleElement([parse_comm(t, mc.ctx.names) for t in texts])


def test_module_delta_examples():
    mc = ModuleContext(W1, (1,))
    assert module_delta(mc, el(mc, "1", "0")).is_zero()
    assert module_delta(mc, el(mc, "y1", "-y0")).is_zero()
    assert module_delta(mc, el(mc, "0", "1")) == el(mc, "1", "0")


def test_seed_examples():
    mc = ModuleContext(W1, (1,))
    assert cell_constant_from_seed(mc, W1.var(1), 0) == el(mc, "y1", "-y0")
    assert cell_constant_from_seed(mc, CommPoly.const(1, 2), 0) == el(mc, "1", "0")
    with pytest.raises(SeedError) as err:
        cell_constant_from_seed(mc, W1.var(1) ** 2, 0)
    assert err.value.order == 3


def test_module_generators_examples():
    mc = ModuleContext(W1, (1,))
    rep = module_generators(mc, 4)
    assert [g.to_text(mc) for g in rep.generators] == ["z0", "y1*z0 - y0*z1"]
    assert rep.certified
    mc = ModuleContext(W1, (0,))
    assert [g.to_text(mc) for g in module_generators(mc, 4).generators] == ["z0"]
    mc = ModuleContext(W2, (0, 0))
    assert [g.to_text(mc) for g in module_generators(mc, 3).generators] == ["z0", "z1"]


@pytest.mark.parametrize("yw", [(1,), (2,), (1, 1)])
@pytest.mark.parametrize("zw", [(0,), (1,), (2,), (2, 1)])
def test_generators_are_constants_and_certified(yw, zw):
    mc = ModuleContext(DerivationContext(yw), zw)
    rep = module_generators(mc, 4)
    assert rep.certified
    assert all(module_delta(mc, g).is_zero() for g in rep.generators)
    checks = verify_module_generation(rep.generators, mc, 4)
    assert all(g == k for _, g, k in checks)


def test_direct_sum_law():
    ctx = DerivationContext((1,))
    both = ModuleContext(ctx, (1, 0))
    a = module_generators(ModuleContext(ctx, (1,)), 4)
    b = module_generators(ModuleContext(ctx, (0,)), 4)
    pad = lambda g, left: ModuleElement(([CommPoly.zero(2)] * 2 + list(g.coeffs)) if left else (list(g.coeffs) + [CommPoly.zero(2)]))
    union = [pad(g, False) for g in a.generators] + [pad(g, True) for g in b.generators]
    joint = module_generators(both, 4)
    assert all(g == k for _, g, k in verify_module_generation(union, both, 4))
    assert len(joint.generators) == len(union)


def test_oracle_matches_kernel():
    for zw in [(0,), (1,), (2,), (3, 1)]:
        mc = ModuleContext(W2, zw)
        for n in range(5):
            assert module_kernel_component(mc, n).dim == module_kernel_oracle(mc, n)


def test_seed_bijection():
    for yw in [(1,), (2,), (1, 1)]:
        mc = ModuleContext(DerivationContext(yw), (0, 1, 2))
        for cell in range(3):
            for n in range(5):
                assert seed_map_bijective(mc, cell, n)


def test_lift_trivial_cases():
    mc = ModuleContext(W1, (1,))
    w = el(mc, "y1", "-y0")
    empty = BasisMatrix(len(mc.component(1)))
    assert lift_invariant(mc, empty, w) == w
    z0 = el(mc, "1", "0")
    assert lift_invariant(mc, BasisMatrix(len(mc.component(0))), z0) == z0


def test_lift_modulo_image():
    # M0 = delta(M_2); the class of y1^2 z1 ... use the highest-weight y0^2 z0 plus junk
    mc = ModuleContext(W1, (1,))
    n = 2
    size = len(mc.component(n))
    from unipinv.module import _delta_images

    m0 = BasisMatrix(size, [r for r in _delta_images(mc, n) if r])
    junk = el(mc, "y0^2 + y0*y1", "0")
    lifted = lift_invariant(mc, m0, junk, n)
    assert module_delta(mc, lifted).is_zero()
    diff = to_vector(mc, lifted - junk, n)
    assert m0.contains(diff)


def test_lift_rejects_non_constant():
    mc = ModuleContext(W1, (1,))
    with pytest.raises(ValueError):
        lift_invariant(mc, BasisMatrix(len(mc.component(0))), el(mc, "0", "1"))
