"""Constants of the free module M(Y, Z) = sum K[Y] z_j under the diagonal derivation.

The Z side is a Jordan structure of its own (cells of weight ``q_i``, with
``delta(z^(j)) = z^(j-1)``).  On one cell a constant ``sum f_j z_j`` is
determined by ``f_0``: the coefficients satisfy ``f_{j+1} = -delta(f_j)`` and
``f_0`` must be killed by ``delta^(q+1)``.  Seeds for ``f_0`` come from
products of ``d^t(h)`` over ring generators ``h`` with ``sum t <= q``.

By default each ``z_j`` has degree 0, so module degree equals coefficient
degree; contexts may give Z cells a positive degree instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Sequence

from .exact import ZERO, CommPoly, _join_terms
from .kernel import (
    DegreeRecord,
    GeneratorReport,
    NotConstantError,
    kernel_component,
    minimal_generators,
    parallel_map,
)
from .linalg import BasisMatrix, Echelon, axpy, complement, express, kernel_of_images
from .sl2 import (
    DerivationContext,
    InternalConsistencyError,
    apply_d,
    apply_delta,
    delta_power,
    level_space,
    tensor_multiplicities,
    weight_multiplicities,
)


class SeedError(ValueError):
    def __init__(self, order: int, message: str):
        super().__init__(message)
        self.order = order


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class ModuleContext:
    ctx: DerivationContext
    z_weights: tuple[int, ...]
    z_degrees: tuple[int, ...] | None = None  # one per Z cell
    z_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "z_weights", tuple(int(q) for q in self.z_weights))
        if any(q < 0 for q in self.z_weights):
            raise ValueError("cell weights must be non-negative")
        if self.z_degrees is None:
            object.__setattr__(self, "z_degrees", (0,) * len(self.z_weights))
        elif len(self.z_degrees) != len(self.z_weights):
            raise ValueError("need one degree per Z cell")
        nz = sum(q + 1 for q in self.z_weights)
        if self.z_names is None:
            object.__setattr__(self, "z_names", tuple(f"z{j}" for j in range(nz)))

    @property
    def nz(self) -> int:
        return sum(q + 1 for q in self.z_weights)

    @cached_property
    def z_cells(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, k) for i, q in enumerate(self.z_weights) for k in range(q + 1))

    @cached_property
    def z_offsets(self) -> tuple[int, ...]:
        out, off = [], 0
        for q in self.z_weights:
            out.append(off)
            off += q + 1
        return tuple(out)

    def z_degree(self, j: int) -> int:
        return self.z_degrees[self.z_cells[j][0]]

    def z_weight(self, j: int) -> int:
        i, k = self.z_cells[j]
        return self.z_weights[i] - 2 * k

    @cached_property
    def _components(self) -> dict:
        return {}

    def component(self, n: int) -> list[tuple[tuple[int, ...], int]]:
        """Basis (monomial, z index) of the degree-n component, z-major."""
        if n not in self._components:
            out = []
            for j in range(self.nz):
                k = n - self.z_degree(j)
                if k >= 0:
                    out.extend((e, j) for e in self.ctx.monomials(k))
            self._components[n] = (out, {b: i for i, b in enumerate(out)})
        return self._components[n][0]

    def component_index(self, n: int) -> dict:
        self.component(n)
        return self._components[n][1]


class ModuleElement:
    """Coefficient vector ``(f_1, ..., f_q)`` over the Z basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[CommPoly]):
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, mc: ModuleContext) -> "ModuleElement":
        return cls([CommPoly.zero(mc.ctx.nvars)] * mc.nz)

    @classmethod
    def basis(cls, mc: ModuleContext, j: int, f: CommPoly | None = None) -> "ModuleElement":
        z = [CommPoly.zero(mc.ctx.nvars)] * mc.nz
        z[j] = CommPoly.const(1, mc.ctx.nvars) if f is None else f
        return cls(z)

    def __add__(self, other: "ModuleElement"):
        if len(other.coeffs) != len(self.coeffs):
            raise ValueError("dimension mismatch")
        return ModuleElement([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleElement":
        return ModuleElement([f.scale(c) for f in self.coeffs])

    def times(self, f: CommPoly) -> "ModuleElement":
        return ModuleElement([f * g for g in self.coeffs])

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def degree(self, mc: ModuleContext) -> int:
        ds = [f.degree(mc.ctx.degrees) + mc.z_degree(j) for j, f in enumerate(self.coeffs) if not f.is_zero()]
        return max(ds, default=-1)

    def to_text(self, mc: ModuleContext) -> str:
        parts = []
        for j, f in enumerate(self.coeffs):
            for e, c in f.sorted_terms(mc.ctx.degrees):
                mono = CommPoly._raw(f.nvars, {e: Fraction(1)}).to_text(mc.ctx.names)
                z = mc.z_names[j]
                parts.append((c, z if mono == "1" else f"{mono}*{z}"))
        return _join_terms(parts)

    def __repr__(self):
        return f"ModuleElement({self.coeffs!r})"


def to_vector(mc: ModuleContext, w: ModuleElement, n: int) -> dict:
    idx = mc.component_index(n)
    out = {}
    for j, f in enumerate(w.coeffs):
        for e, c in f.terms.items():
            key = (e, j)
            if key not in idx:
                raise ValueError(f"term {e}*{mc.z_names[j]} is not of degree {n}")
            out[idx[key]] = c
    return out


def to_element(mc: ModuleContext, v: dict, n: int) -> ModuleElement:
    basis = mc.component(n)
    terms: list[dict] = [{} for _ in range(mc.nz)]
    for i, c in v.items():
        e, j = basis[i]
        terms[j][e] = c
    return ModuleElement([CommPoly._raw(mc.ctx.nvars, t) for t in terms])


def module_delta(mc: ModuleContext, w: ModuleElement) -> ModuleElement:
    """delta(sum f_j z_j) = sum delta(f_j) z_j + sum f_j delta(z_j)."""
    if len(w.coeffs) != mc.nz:
        raise ValueError(f"element has {len(w.coeffs)} coordinates, module has {mc.nz}")
    out = [apply_delta(mc.ctx, f) for f in w.coeffs]
    for j, f in enumerate(w.coeffs):
        if mc.z_cells[j][1] > 0 and not f.is_zero():
            out[j - 1] = out[j - 1] + f
    return ModuleElement(out)


def _delta_images(mc: ModuleContext, n: int) -> list[dict]:
    basis = mc.component(n)
    idx = mc.component_index(n)
    ctx = mc.ctx
    targets = ctx._delta_target
    out = []
    for e, j in basis:
        img: dict = {}
        for v, k in enumerate(e):
            t = targets[v]
            if k and t is not None:
                e2 = list(e)
                e2[v] -= 1
                e2[t] += 1
                i = idx[(tuple(e2), j)]
                img[i] = img.get(i, 0) + Fraction(k)
        if mc.z_cells[j][1] > 0:
            i = idx[(e, j - 1)]
            img[i] = img.get(i, 0) + 1
        out.append({i: c for i, c in img.items() if c})
    return out


def _weight(mc: ModuleContext, b) -> int:
    e, j = b
    return mc.ctx.weight_of(e) + mc.z_weight(j)


def module_kernel_oracle(mc: ModuleContext, n: int) -> int:
    """Sum over Z cells of m(0) + m(1) for S(U)_{n - deg} tensor W_q."""
    total = 0
    for i, q in enumerate(mc.z_weights):
        k = n - mc.z_degrees[i]
        if k < 0:
            continue
        mult = tensor_multiplicities(weight_multiplicities(mc.ctx, k), q)
        total += mult.get(0, 0) + mult.get(1, 0)
    return total


def module_kernel_component(mc: ModuleContext, n: int) -> BasisMatrix:
    """Canonical basis of the constants of degree n, oracle-checked."""
    basis = mc.component(n)
    imgs = _delta_images(mc, n)
    blocks: dict[int, list[int]] = {}
    for i, b in enumerate(basis):
        blocks.setdefault(_weight(mc, b), []).append(i)
    vectors = []
    for cols in blocks.values():
        for k in kernel_of_images([imgs[i] for i in cols]):
            vectors.append({cols[i]: c for i, c in k.items()})
    out = BasisMatrix(len(basis), vectors, basis=basis)
    oracle = module_kernel_oracle(mc, n)
    if out.dim != oracle:
        raise InternalConsistencyError(f"module degree {n}: kernel dim {out.dim} but weight oracle says {oracle}")
    return out


def cell_constant_from_seed(mc: ModuleContext, f0: CommPoly, cell: int) -> ModuleElement:
    """The constant ``sum f_j z_j`` on Z cell ``cell`` with ``f_{j+1} = -delta(f_j)``."""
    if not 0 <= cell < len(mc.z_weights):
        raise ValueError(f"no Z cell {cell}")
    r = mc.z_weights[cell]
    top = delta_power(mc.ctx, f0, r + 1)
    if not top.is_zero():
        order = r + 1
        g = top
        while not g.is_zero():
            g = apply_delta(mc.ctx, g)
            order += 1
        raise SeedError(
            order,
            f"seed not killed by delta^{r + 1}: delta^{r + 1}(f0) = {mc.ctx.text(top)} "
            f"(least t with delta^t(f0) = 0 is {order})",
        )
    coeffs = [CommPoly.zero(mc.ctx.nvars)] * mc.nz
    off = mc.z_offsets[cell]
    f = f0
    for j in range(r + 1):
        coeffs[off + j] = f
        f = -apply_delta(mc.ctx, f)
    return ModuleElement(coeffs)


def seeds_for_cell(ring_gens: Sequence[CommPoly], ring_degrees: Sequence[int], ctx: DerivationContext, r: int, max_degree: int) -> list[CommPoly]:
    """Products of ``d^t(h)`` factors (t >= 1, sum t <= r) of degree <= max_degree, with 1."""
    factors = []  # (poly, t, degree)
    for h, dh in zip(ring_gens, ring_degrees):
        g = h
        for t in range(1, r + 1):
            g = apply_d(ctx, g)
            if g.is_zero():
                break
            factors.append((g, t, dh))
    seeds = [CommPoly.const(1, ctx.nvars)]
    for size in range(1, r + 1):
        for combo in combinations_with_replacement(range(len(factors)), size):
            if sum(factors[i][1] for i in combo) > r:
                continue
            if sum(factors[i][2] for i in combo) > max_degree:
                continue
            p = CommPoly.const(1, ctx.nvars)
            for i in combo:
                p = p * factors[i][0]
            if not p.is_zero():
                seeds.append(p)
    return seeds


@dataclass
class ModuleReport:
    ring: GeneratorReport
    generators: list[ModuleElement]
    degrees: list[int]
    verified_degree: int
    records: list[DegreeRecord] = field(default_factory=list)
    candidates: int = 0

    @property
    def certified(self) -> bool:
        return self.ring.certified and all(r.ok for r in self.records)


def _ring_times(mc: ModuleContext, rows, k: int, w: ModuleElement, n: int) -> list[dict]:
    """Vectors of ``b * w`` for ``b`` in rows of the ring's degree-k component."""
    idx = mc.component_index(n)
    mons = mc.ctx.monomials(k)
    wterms = [(e, j, c) for j, f in enumerate(w.coeffs) for e, c in f.terms.items()]
    out = []
    for r in rows:
        v: dict = {}
        for i, c in r.items():
            e = mons[i]
            for we, j, wc in wterms:
                key = (tuple(a + b for a, b in zip(e, we)), j)
                p = idx[key]
                x = v.get(p, 0) + c * wc
                if x:
                    v[p] = x
                else:
                    v.pop(p, None)
        if v:
            out.append(v)
    return out


def module_span(mc: ModuleContext, gens: Sequence[tuple[ModuleElement, int]], ring_spaces: Sequence[BasisMatrix], n: int) -> Echelon:
    """K[Y]^delta-span of ``gens`` in degree n."""
    ech = Echelon(len(mc.component(n)))
    for g, e in gens:
        if e <= n and n - e < len(ring_spaces):
            for v in _ring_times(mc, ring_spaces[n - e].rows, n - e, g, n):
                ech.add(v)
    return ech


def module_generators(mc: ModuleContext, max_degree: int, ring_report: GeneratorReport | None = None, threads: int | None = None) -> ModuleReport:
    """Generators of M(Y,Z)^delta over K[Y]^delta through ``max_degree``.

    Seeds from the ring generators are pushed through the cell recursion, then
    pruned degree by degree to a canonical complement of the span of lower
    degree generators; every degree is compared with the module kernel.
    """
    D = max_degree
    if D < 0:
        raise ValueError("max degree must be non-negative")
    if ring_report is None:
        ring_report = minimal_generators(mc.ctx, max(D, 1), threads)
    ring_spaces = parallel_map(lambda k: kernel_component(mc.ctx, k), list(range(D + 1)), threads)
    candidates: dict[int, list[ModuleElement]] = {}
    count = 0
    for i, q in enumerate(mc.z_weights):
        dz = mc.z_degrees[i]
        for s in seeds_for_cell(ring_report.generators, ring_report.degrees, mc.ctx, q, D - dz):
            w = cell_constant_from_seed(mc, s, i)
            deg = s.degree(mc.ctx.degrees) + dz
            if deg <= D:
                candidates.setdefault(deg, []).append(w)
                count += 1
    kernels = parallel_map(lambda n: module_kernel_component(mc, n), list(range(D + 1)), threads)
    gens: list[tuple[ModuleElement, int]] = []
    records = []
    for n in range(D + 1):
        ech = module_span(mc, gens, ring_spaces, n)
        cand = [to_vector(mc, w, n) for w in candidates.get(n, [])]
        new = complement(ech, cand, len(mc.component(n)))
        for v in new.rows:
            gens.append((to_element(mc, v, n), n))
            ech.add(v)
        ker = kernels[n]
        inside = all(ker.contains(r) for r in ech.rows.values())
        if not inside:
            raise InternalConsistencyError(f"module degree {n}: a seed image is not a constant")
        records.append(DegreeRecord(n, module_kernel_oracle(mc, n), ker.dim, new.dim, len(ech)))
    return ModuleReport(ring_report, [g for g, _ in gens], [d for _, d in gens], D, records, count)


def check_module_constants(mc: ModuleContext, gens: Sequence[ModuleElement]) -> None:
    for g in gens:
        img = module_delta(mc, g)
        if not img.is_zero():
            raise NotConstantError(g, img, f"{g.to_text(mc)} is not a constant: delta = {img.to_text(mc)}")


def verify_module_generation(gens: Sequence[ModuleElement], mc: ModuleContext, max_degree: int) -> list[tuple[int, int, int]]:
    """(n, span dim, kernel dim) per degree for the K[Y]^delta-span of ``gens``."""
    check_module_constants(mc, gens)
    tagged = []
    for g in gens:
        if g.is_zero():
            continue
        d = g.degree(mc)
        if to_vector(mc, g, d) is None:
            raise ValueError("generator is not homogeneous")
        tagged.append((g, d))
    ring_spaces = [kernel_component(mc.ctx, k) for k in range(max_degree + 1)]
    out = []
    for n in range(max_degree + 1):
        ech = module_span(mc, tagged, ring_spaces, n)
        out.append((n, len(ech), module_kernel_component(mc, n).dim))
    return out


def cell_submodule(mc: ModuleContext, cell: int) -> ModuleContext:
    return ModuleContext(mc.ctx, (mc.z_weights[cell],), (mc.z_degrees[cell],))


def seed_map_bijective(mc: ModuleContext, cell: int, n: int) -> bool:
    """f0 -> sum f_j z_j maps the level space onto the cell's constants, injectively."""
    sub = cell_submodule(mc, cell)
    k = n - sub.z_degrees[0]
    if k < 0:
        return True
    r = sub.z_weights[0]
    level = level_space(mc.ctx, r, k)
    images = [to_vector(sub, cell_constant_from_seed(sub, mc.ctx.to_poly(v, k), 0), n) for v in level.rows]
    span = BasisMatrix(len(sub.component(n)), images)
    return span.dim == level.dim and span == module_kernel_component(sub, n)


def lift_constant(images_of: callable, m0_rows: Sequence[dict], w: dict) -> dict:
    """Solve ``delta(w + m0) = 0`` for ``m0`` in span(m0_rows); return ``w + m0``.

    ``images_of(v)`` applies delta to a coordinate vector.  Raises LiftError
    when no solution exists (the submodule has no delta-stable complement).
    """
    target = {j: -c for j, c in images_of(w).items()}
    if not target:
        return dict(w)
    coeffs = express([images_of(r) for r in m0_rows], target)
    if coeffs is None:
        raise LiftError("no constant lift exists: the submodule has no delta-stable complement in this degree")
    out = dict(w)
    for c, r in zip(coeffs, m0_rows):
        if c:
            axpy(out, -c, r)
    return out


def lift_invariant(mc: ModuleContext, m0: BasisMatrix, wbar: ModuleElement, n: int | None = None) -> ModuleElement:
    """Lift a constant of M/M0 (degree n) to a constant of M."""
    n = wbar.degree(mc) if n is None else n
    if n < 0:
        return wbar
    size = len(mc.component(n))
    images = _delta_images(mc, n)

    def apply(v):
        out: dict = {}
        for i, c in v.items():
            for j, x in images[i].items():
                y = out.get(j, 0) + c * x
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
        return out

    for r in m0.rows:
        if not m0.contains(apply(r)):
            raise ValueError("M0 is not delta-stable")
    w = to_vector(mc, wbar, n)
    if not m0.contains(apply(w)):
        raise ValueError("the element is not a constant modulo M0")
    if m0.ncols != size:
        raise ValueError("M0 lives in a different component")
    return to_element(mc, lift_constant(apply, m0.rows, w), n)
