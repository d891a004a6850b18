"""SL2 cell bases, the derivations delta and d, and weight-count oracles.

A :class:`DerivationContext` is a polynomial ring whose variables are the
canonical cell bases ``u_i^(0..r_i)`` of ``W_{r_1} + ... + W_{r_k}``,
flattened cell-major.  On a cell of weight ``r``::

    delta(u^(k)) = u^(k-1)              (u^(-1) = 0)
    d(u^(k))     = (k+1)(r-k) u^(k+1)   (u^(r+1) = 0)

and ``u^(k)`` has weight ``r - 2k``.  Both derivations extend to the ring by
the Leibniz rule; ``delta`` raises weight by 2, ``d`` lowers it by 2.

Variables may carry a grading degree other than 1 (used for formal traces,
where ``tr(x1 x2)`` has degree 2); "degree ``n`` component" always means
weighted degree.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .exact import CommPoly, monomials_of_degree
from .linalg import BasisMatrix, axpy, kernel_of_images
from .nilpotent import JordanStructure, NotNilpotentError, jordan_basis, jordan_chains


class InternalConsistencyError(AssertionError):
    """Two independent computations disagreed: an implementation bug."""


@dataclass(frozen=True)
class CellBasis:
    weight: int
    vectors: tuple  # sparse vectors u^(0), ..., u^(r)

    def delta_table(self) -> list[tuple[int, int | None]]:
        return [(k, k - 1 if k else None) for k in range(self.weight + 1)]

    def d_table(self) -> list[tuple[int, int | None, int]]:
        r = self.weight
        return [(k, k + 1 if k < r else None, (k + 1) * (r - k)) for k in range(r + 1)]


@dataclass(frozen=True)
class DerivationContext:
    weights: tuple[int, ...]
    degrees: tuple[int, ...] | None = None
    names: tuple[str, ...] | None = None
    jordan: JordanStructure | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(r) for r in self.weights))
        if any(r < 0 for r in self.weights):
            raise ValueError("cell weights must be non-negative")
        nv = sum(r + 1 for r in self.weights)
        if self.degrees is None:
            object.__setattr__(self, "degrees", (1,) * nv)
        else:
            object.__setattr__(self, "degrees", tuple(self.degrees))
            if len(self.degrees) != nv or any(g < 1 for g in self.degrees):
                raise ValueError("need one positive degree per variable")
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"y{i}" for i in range(nv)))
        elif len(self.names) != nv:
            raise ValueError("need one name per variable")

    @classmethod
    def from_matrix(cls, n, names=None) -> "DerivationContext":
        """Context for the derivation with matrix ``n`` (normalized by Jordan basis)."""
        js = jordan_basis(n)
        return cls(js.weights, names=names, jordan=js)

    @property
    def nvars(self) -> int:
        return len(self.degrees)

    @cached_property
    def cells(self) -> tuple[tuple[int, int], ...]:
        """(cell, position) per variable."""
        return tuple((i, k) for i, r in enumerate(self.weights) for k in range(r + 1))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, off = [], 0
        for r in self.weights:
            out.append(off)
            off += r + 1
        return tuple(out)

    @cached_property
    def var_weights(self) -> tuple[int, ...]:
        return tuple(self.weights[i] - 2 * k for i, k in self.cells)

    @cached_property
    def _delta_target(self) -> tuple[int | None, ...]:
        return tuple(None if k == 0 else v - 1 for v, (i, k) in enumerate(self.cells))

    @cached_property
    def _d_target(self) -> tuple[tuple[int, int] | None, ...]:
        out = []
        for v, (i, k) in enumerate(self.cells):
            r = self.weights[i]
            out.append(None if k == r else (v + 1, (k + 1) * (r - k)))
        return tuple(out)

    def monomials(self, n: int) -> list[tuple[int, ...]]:
        return _monomials(self.degrees, n)

    def index(self, n: int) -> dict[tuple[int, ...], int]:
        return _index(self.degrees, n)

    def weight_of(self, exp: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exp, self.var_weights))

    def var(self, i: int) -> CommPoly:
        return CommPoly.var(i, self.nvars)

    def text(self, f: CommPoly) -> str:
        return f.to_text(self.names, self.degrees)

    def to_vector(self, f: CommPoly, n: int) -> dict:
        idx = self.index(n)
        out = {}
        for e, c in f.terms.items():
            if e not in idx:
                raise ValueError(f"term {e} is not of degree {n}")
            out[idx[e]] = c
        return out

    def to_poly(self, v: dict, n: int) -> CommPoly:
        mons = self.monomials(n)
        return CommPoly._raw(self.nvars, {mons[j]: c for j, c in v.items()})

    def original_images(self) -> list[CommPoly] | None:
        """Images of the context variables as linear forms in the original x's."""
        if self.jordan is None:
            return None
        p = self.jordan.basis
        m = len(p)
        return [CommPoly(m, {tuple(int(a == i) for a in range(m)): p[i][j] for i in range(m)}) for j in range(m)]


@lru_cache(maxsize=None)
def _monomials(degrees: tuple[int, ...], n: int) -> list[tuple[int, ...]]:
    return monomials_of_degree(degrees, n)


@lru_cache(maxsize=None)
def _index(degrees: tuple[int, ...], n: int) -> dict:
    return {e: j for j, e in enumerate(_monomials(degrees, n))}


def context_from_json(obj) -> DerivationContext:
    """``{"weights": [...]}`` or ``{"matrix": {...}}``."""
    from .nilpotent import parse_matrix_json

    if "weights" in obj and "matrix" in obj:
        raise ValueError("give either weights or matrix, not both")
    if "weights" in obj:
        return DerivationContext(tuple(obj["weights"]))
    if "matrix" in obj:
        return DerivationContext.from_matrix(parse_matrix_json(obj["matrix"]))
    raise ValueError('context needs "weights" or "matrix"')


def _apply_linear(f: CommPoly, targets) -> CommPoly:
    """Apply the derivation sending variable v to ``targets[v]``.

    ``targets[v]`` is ``None`` or ``(w, coeff)``: v -> coeff * var w.
    """
    out: dict = {}
    for e, c in f.terms.items():
        for v, k in enumerate(e):
            if not k:
                continue
            t = targets[v]
            if t is None:
                continue
            w, a = t
            e2 = list(e)
            e2[v] -= 1
            e2[w] += 1
            e2 = tuple(e2)
            x = out.get(e2, 0) + c * k * a
            if x:
                out[e2] = x
            else:
                out.pop(e2, None)
    return CommPoly._raw(f.nvars, out)


def _check(ctx: DerivationContext, f: CommPoly):
    if f.nvars != ctx.nvars:
        raise ValueError(f"polynomial has {f.nvars} variables, context has {ctx.nvars}")


def apply_delta(ctx: DerivationContext, f: CommPoly) -> CommPoly:
    _check(ctx, f)
    return _apply_linear(f, [None if t is None else (t, 1) for t in ctx._delta_target])


def apply_d(ctx: DerivationContext, f: CommPoly) -> CommPoly:
    _check(ctx, f)
    return _apply_linear(f, ctx._d_target)


def delta_power(ctx: DerivationContext, f: CommPoly, k: int) -> CommPoly:
    for _ in range(k):
        f = apply_delta(ctx, f)
    return f


def apply_linear_derivation(f: CommPoly, images: Sequence[CommPoly]) -> CommPoly:
    """Derivation of K[x] defined by arbitrary variable images (Leibniz rule)."""
    out = CommPoly.zero(f.nvars)
    for v in range(f.nvars):
        img = images[v]
        if img.is_zero():
            continue
        partial: dict = {}
        for e, c in f.terms.items():
            k = e[v]
            if k:
                e2 = list(e)
                e2[v] -= 1
                partial[tuple(e2)] = c * k
        if partial:
            out = out + CommPoly._raw(f.nvars, partial) * img
    return out


def delta_images(ctx: DerivationContext, n: int) -> list[dict]:
    """Sparse images of the degree-n monomials under delta (column indices)."""
    return _op_images(ctx, n, [None if t is None else (t, 1) for t in ctx._delta_target])


def d_images(ctx: DerivationContext, n: int) -> list[dict]:
    return _op_images(ctx, n, ctx._d_target)


def _op_images(ctx, n, targets) -> list[dict]:
    idx = ctx.index(n)
    out = []
    for e in ctx.monomials(n):
        img: dict = {}
        for v, k in enumerate(e):
            if not k or targets[v] is None:
                continue
            w, a = targets[v]
            e2 = list(e)
            e2[v] -= 1
            e2[w] += 1
            j = idx[tuple(e2)]
            x = img.get(j, 0) + k * a
            if x:
                img[j] = Fraction(x)
            else:
                img.pop(j, None)
        out.append(img)
    return out


def weight_multiplicities(ctx: DerivationContext, n: int) -> dict[int, int]:
    """Number of degree-n monomials of each total weight (generating function)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    # table[deg][weight] = count
    table: list[dict[int, int]] = [defaultdict(int) for _ in range(n + 1)]
    table[0][0] = 1
    for g, w in zip(ctx.degrees, ctx.var_weights):
        new = [defaultdict(int) for _ in range(n + 1)]
        for deg in range(n + 1):
            for wt, cnt in table[deg].items():
                a = 0
                while deg + a * g <= n:
                    new[deg + a * g][wt + a * w] += cnt
                    a += 1
        table = new
    return {w: c for w, c in sorted(table[n].items()) if c}


def kernel_dim_oracle(ctx: DerivationContext, n: int) -> int:
    """dim ker delta on the degree-n component, as m(0) + m(1)."""
    m = weight_multiplicities(ctx, n)
    return m.get(0, 0) + m.get(1, 0)


def tensor_multiplicities(mult: dict[int, int], r: int) -> dict[int, int]:
    """Weight multiplicities of (module with ``mult``) tensor W_r."""
    out: dict[int, int] = defaultdict(int)
    for w, c in mult.items():
        for j in range(r + 1):
            out[w + r - 2 * j] += c
    return dict(out)


def _weight_blocks(ctx: DerivationContext, n: int) -> dict[int, list[int]]:
    blocks: dict[int, list[int]] = defaultdict(list)
    for j, e in enumerate(ctx.monomials(n)):
        blocks[ctx.weight_of(e)].append(j)
    return blocks


def kernel_of_power(ctx: DerivationContext, n: int, power: int) -> BasisMatrix:
    """Canonical basis of ker delta^power on the degree-n component."""
    mons = ctx.monomials(n)
    size = len(mons)
    imgs = [{j: Fraction(1)} for j in range(size)]
    step = delta_images(ctx, n)
    for _ in range(power):
        new = []
        for v in imgs:
            out: dict = {}
            for j, c in v.items():
                for i, x in step[j].items():
                    y = out.get(i, 0) + c * x
                    if y:
                        out[i] = y
                    else:
                        out.pop(i, None)
            new.append(out)
        imgs = new
    # delta^power is weight homogeneous: solve block by block
    vectors = []
    for cols in _weight_blocks(ctx, n).values():
        for k in kernel_of_images([imgs[j] for j in cols]):
            vectors.append({cols[i]: c for i, c in k.items()})
    return BasisMatrix(size, vectors, basis=mons)


def ladder_space(ctx: DerivationContext, s: int, n: int) -> BasisMatrix:
    """sum_{t <= s} d^t(ker delta) in degree n."""
    ker = kernel_of_power(ctx, n, 1)
    dimg = d_images(ctx, n)
    ladder = []
    layer = list(ker.rows)
    for _ in range(s + 1):
        ladder.extend(layer)
        nxt = []
        for v in layer:
            out: dict = {}
            for j, c in v.items():
                axpy(out, -c, dimg[j])
            if out:
                nxt.append(out)
        layer = nxt
    return BasisMatrix(ker.ncols, ladder, basis=ker.basis)


def level_space(ctx: DerivationContext, s: int, n: int) -> BasisMatrix:
    """{f of degree n : delta^(s+1) f = 0}, computed two ways and compared."""
    if s < 0 or n < 0:
        raise ValueError("s and n must be non-negative")
    direct = kernel_of_power(ctx, n, s + 1)
    via_d = ladder_space(ctx, s, n)
    if via_d != direct:
        raise InternalConsistencyError(
            f"level space mismatch at s={s}, n={n}: dim {direct.dim} (kernel of power) vs {via_d.dim} (ladder)"
        )
    return direct


def sl2_decompose(images: Sequence[dict], dim: int | None = None) -> list[CellBasis]:
    """Split a space with nilpotent operator into cells with canonical tables."""
    try:
        chains = jordan_chains(images, dim)
    except NotNilpotentError as exc:
        raise NotNilpotentError(exc.power, "operator is not nilpotent on the given space") from None
    return [CellBasis(w, tuple(vs)) for w, vs in chains]


def component_decomposition(ctx: DerivationContext, n: int) -> list[CellBasis]:
    return sl2_decompose(delta_images(ctx, n), len(ctx.monomials(n)))
