"""Graded constants of a Weitzenböck derivation and their generators.

delta is linear, so it preserves degree; every degree is an independent exact
nullspace problem.  Each component is certified against the weight oracle
(dim ker = m(0) + m(1)).  Generators are found degree by degree as the
canonical complement of the products of lower-degree generators.  Nothing is
claimed beyond the verified degree.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import CommPoly
from .linalg import BasisMatrix, Echelon, complement, kernel_of_images
from .sl2 import (
    DerivationContext,
    InternalConsistencyError,
    _weight_blocks,
    apply_delta,
    delta_images,
    kernel_dim_oracle,
)

THREADS_ENV = "UNIPINV_THREADS"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items: Sequence, threads: int | None = None) -> list:
    """Ordered map; runs on a thread pool when more than one thread is allowed."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class NotConstantError(ValueError):
    def __init__(self, element, image, message: str):
        super().__init__(message)
        self.element = element
        self.image = image


@dataclass
class DegreeRecord:
    n: int
    oracle: int
    kernel: int
    new: int
    generated: int | None = None

    @property
    def ok(self) -> bool:
        return self.oracle == self.kernel and (self.generated is None or self.generated == self.kernel)


@dataclass
class GeneratorReport:
    generators: list[CommPoly]
    degrees: list[int]
    verified_degree: int
    records: list[DegreeRecord] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(r.ok for r in self.records)

    def by_degree(self, n: int) -> list[CommPoly]:
        return [g for g, d in zip(self.generators, self.degrees) if d == n]


def kernel_component(ctx: DerivationContext, n: int) -> BasisMatrix:
    """Canonical basis of ker delta on the degree-n monomials, oracle-checked."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    mons = ctx.monomials(n)
    if all(r == 0 for r in ctx.weights):
        out = BasisMatrix.full(len(mons), basis=mons)
    else:
        imgs = delta_images(ctx, n)
        vectors = []
        for cols in _weight_blocks(ctx, n).values():
            for k in kernel_of_images([imgs[j] for j in cols]):
                vectors.append({cols[i]: c for i, c in k.items()})
        out = BasisMatrix(len(mons), vectors, basis=mons)
    oracle = kernel_dim_oracle(ctx, n)
    if out.dim != oracle:
        raise InternalConsistencyError(f"degree {n}: kernel dim {out.dim} but weight oracle says {oracle}")
    return out


def kernel_components(ctx: DerivationContext, top: int, threads: int | None = None) -> list[BasisMatrix]:
    """Components 0..top; may run concurrently, results are in degree order."""
    return parallel_map(lambda n: kernel_component(ctx, n), list(range(top + 1)), threads)


def default_degree(weights: Sequence[int]) -> int:
    return 2 * max(weights, default=0) + 2


def multiply_rows(ctx: DerivationContext, g: CommPoly, rows, n_rows: int) -> list[dict]:
    """Vectors of ``g * row`` for rows of the degree ``n_rows`` component."""
    dg = g.degree(ctx.degrees)
    idx = ctx.index(n_rows + dg)
    mons = ctx.monomials(n_rows)
    gterms = list(g.terms.items())
    out = []
    for r in rows:
        v: dict = {}
        for j, c in r.items():
            e = mons[j]
            for ge, gc in gterms:
                k = idx[tuple(a + b for a, b in zip(e, ge))]
                x = v.get(k, 0) + c * gc
                if x:
                    v[k] = x
                else:
                    v.pop(k, None)
        if v:
            out.append(v)
    return out


def _product_span(ctx, gens: list[tuple[CommPoly, int]], spaces: list, n: int) -> Echelon:
    """span{g * b : deg g = e <= n, b in spaces[n - e]}."""
    ech = Echelon(len(ctx.monomials(n)))
    for g, e in gens:
        if 0 < e <= n and spaces[n - e] is not None:
            for v in multiply_rows(ctx, g, spaces[n - e].rows, n - e):
                ech.add(v)
    return ech


def minimal_generators(ctx: DerivationContext, max_degree: int | None = None, threads: int | None = None) -> GeneratorReport:
    """Generators of K[Y]^delta through ``max_degree``, certified per degree."""
    D = default_degree(ctx.weights) if max_degree is None else max_degree
    if D < 1:
        raise ValueError("max degree must be at least 1")
    if all(r == 0 for r in ctx.weights):
        gens = [ctx.var(i) for i in range(ctx.nvars)]
        degs = list(ctx.degrees)
        keep = [(g, d) for g, d in zip(gens, degs) if d <= D]
        recs = []
        for n in range(1, D + 1):
            oracle = kernel_dim_oracle(ctx, n)
            size = len(ctx.monomials(n))
            recs.append(DegreeRecord(n, oracle, size, sum(1 for _, d in keep if d == n), size))
        return GeneratorReport([g for g, _ in keep], [d for _, d in keep], D, recs)
    comps = kernel_components(ctx, D, threads)
    gens: list[tuple[CommPoly, int]] = []
    records = []
    for n in range(1, D + 1):
        ech = _product_span(ctx, gens, comps, n)
        new = complement(ech, comps[n].rows, len(ctx.monomials(n)))
        for v in new.rows:
            gens.append((ctx.to_poly(v, n), n))
            ech.add(v)
        if len(ech) != comps[n].dim or not all(ech.contains(r) for r in comps[n].rows):
            raise InternalConsistencyError(f"degree {n}: products plus new generators do not span the kernel")
        records.append(DegreeRecord(n, kernel_dim_oracle(ctx, n), comps[n].dim, new.dim, len(ech)))
    return GeneratorReport([g for g, _ in gens], [d for _, d in gens], D, records)


@dataclass
class GenerationCheck:
    n: int
    generated: int
    kernel: int

    @property
    def ok(self) -> bool:
        return self.generated == self.kernel


def subalgebra_components(ctx: DerivationContext, gens: Sequence[CommPoly], top: int) -> list[BasisMatrix]:
    """Degree components 0..top of the subalgebra generated by homogeneous ``gens``."""
    tagged = []
    for g in gens:
        if g.is_zero():
            continue
        if not g.is_homogeneous(ctx.degrees):
            raise ValueError(f"generator {ctx.text(g)} is not homogeneous")
        tagged.append((g, g.degree(ctx.degrees)))
    spaces: list = [BasisMatrix(1, [{0: Fraction(1)}], basis=ctx.monomials(0))]
    for n in range(1, top + 1):
        ech = _product_span(ctx, tagged, spaces, n)
        spaces.append(BasisMatrix._from_echelon(ech, ctx.monomials(n)))
    return spaces


def check_constants(ctx: DerivationContext, gens: Sequence[CommPoly]) -> None:
    for g in gens:
        img = apply_delta(ctx, g)
        if not img.is_zero():
            raise NotConstantError(g, img, f"{ctx.text(g)} is not a constant: delta = {ctx.text(img)}")


def verify_generation(gens: Sequence[CommPoly], ctx: DerivationContext, max_degree: int) -> list[GenerationCheck]:
    """Per degree n <= max_degree: does the algebra generated by ``gens`` fill ker delta?"""
    check_constants(ctx, gens)
    spaces = subalgebra_components(ctx, gens, max_degree)
    comps = kernel_components(ctx, max_degree)
    out = []
    for n in range(1, max_degree + 1):
        gen = spaces[n]
        # generated space sits inside the kernel because gens are constants
        out.append(GenerationCheck(n, gen.dim, comps[n].dim))
    return out


def to_original(ctx: DerivationContext, f: CommPoly) -> CommPoly:
    """Rewrite a polynomial in Jordan variables in the original coordinates."""
    imgs = ctx.original_images()
    if imgs is None:
        return f
    return f.substitute(imgs)
