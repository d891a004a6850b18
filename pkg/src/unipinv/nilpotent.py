"""Unipotent and nilpotent matrices: log/exp, Jordan type and Jordan bases.

Matrices are tuples of row tuples of Fractions.  A matrix ``N`` acts on
column vectors, so column ``i`` holds the coordinates of ``N(e_i)``; for a
derivation of ``K[x_1..x_m]`` this reads ``delta(x_i) = sum_j N[j][i] x_j``.
Jordan cells have their 1s on the superdiagonal, so inside a cell the
operator lowers the position: ``v^(j) -> v^(j-1)``, ``v^(0) -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exact import parse_rational
from .linalg import BasisMatrix, Echelon, complement, kernel_of_images

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


class NotUnipotentError(ValueError):
    def __init__(self, power: int, message: str):
        super().__init__(message)
        self.power = power


class NotNilpotentError(ValueError):
    def __init__(self, power: int, message: str):
        super().__init__(message)
        self.power = power


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = len(rows)
    out = []
    for i, row in enumerate(rows):
        if len(row) != m:
            raise ValueError(f"row {i} has {len(row)} entries, expected {m}")
        out.append(tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in row))
    return tuple(out)


def identity(m: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m))


def zeros(m: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def madd(a: Matrix, b: Matrix, cb=1) -> Matrix:
    return tuple(tuple(x + cb * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(a: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in a)


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def mat_rank(a: Matrix) -> int:
    return BasisMatrix(len(a[0]) if a else 0, a).dim


def inverse(a: Matrix) -> Matrix:
    m = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(a)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[m:]) for row in aug)


def columns(a: Matrix) -> list[dict]:
    """Sparse column images: ``columns(a)[j] = a(e_j)``."""
    m = len(a)
    return [{i: a[i][j] for i in range(m) if a[i][j]} for j in range(m)]


def format_matrix(a: Matrix) -> dict:
    return {"size": len(a), "entries": [[str(x) for x in row] for row in a]}


def parse_matrix_json(obj) -> Matrix:
    """Read ``{"size": m, "entries": [["p/q", ...], ...]}``."""
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError('matrix object needs an "entries" field')
    entries = obj["entries"]
    size = obj.get("size", len(entries))
    if not isinstance(entries, list) or len(entries) != size:
        raise ValueError(f"expected {size} rows, found {len(entries) if isinstance(entries, list) else 'none'}")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != size:
            raise ValueError(f"row {i + 1}: expected {size} entries")
        parsed = []
        for j, x in enumerate(row):
            try:
                parsed.append(parse_rational(x if isinstance(x, str) else str(x)))
            except ValueError as exc:
                raise ValueError(f"row {i + 1}, column {j + 1}: malformed entry {x!r}") from exc
        rows.append(tuple(parsed))
    return tuple(rows)


@dataclass(frozen=True)
class UnipotentMatrix:
    entries: Matrix

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class NilpotentMatrix:
    entries: Matrix
    index: int

    @property
    def size(self) -> int:
        return len(self.entries)


def nilpotency_index(n: Matrix) -> int:
    """Least ``k`` with ``n^k = 0``; raises NotNilpotentError otherwise."""
    m = len(n)
    power = identity(m)
    prev_rank = m
    for k in range(1, m + 1):
        power = matmul(power, n)
        if is_zero(power):
            return k
        r = mat_rank(power)
        if r == prev_rank:
            raise NotNilpotentError(k, f"N^{k} has rank {r}, same as N^{k - 1}: not nilpotent")
        prev_rank = r
    if m == 0:
        return 0
    raise NotNilpotentError(m, f"N^{m} != 0: not nilpotent")


def check_nilpotent(n) -> NilpotentMatrix:
    if isinstance(n, NilpotentMatrix):
        return n
    n = as_matrix(n)
    return NilpotentMatrix(n, nilpotency_index(n) if n else 0)


def check_unipotent(g) -> UnipotentMatrix:
    if isinstance(g, UnipotentMatrix):
        return g
    g = as_matrix(g)
    m = len(g)
    a = madd(g, identity(m), -1)
    try:
        nilpotency_index(a)
    except NotNilpotentError as exc:
        raise NotUnipotentError(exc.power, f"(g - I)^{exc.power} stays nonzero: not unipotent") from None
    return UnipotentMatrix(g)


def log_unipotent(g) -> NilpotentMatrix:
    """``log g = sum_{i>=1} (-1)^(i-1) (g - I)^i / i``, a finite sum."""
    g = check_unipotent(g).entries
    m = len(g)
    a = madd(g, identity(m), -1)
    out = zeros(m)
    power = identity(m)
    for i in range(1, m + 1):
        power = matmul(power, a)
        if is_zero(power):
            break
        out = madd(out, power, Fraction((-1) ** (i - 1), i))
    return check_nilpotent(out)


def exp_nilpotent(n) -> UnipotentMatrix:
    n = check_nilpotent(n).entries
    m = len(n)
    out = identity(m)
    power = identity(m)
    for i in range(1, m + 1):
        power = matmul(power, n)
        if is_zero(power):
            break
        out = madd(out, power, Fraction(1, factorial(i)))
    return UnipotentMatrix(out)


def jordan_type(n) -> list[int]:
    """Cell weights (cell size minus one), descending, from the rank sequence."""
    nm = check_nilpotent(n)
    a = nm.entries
    m = len(a)
    ranks = [m]
    power = identity(m)
    for _ in range(nm.index):
        power = matmul(power, a)
        ranks.append(mat_rank(power))
    ranks.append(0)
    # number of cells of size >= k is ranks[k-1] - ranks[k]
    weights = []
    for k in range(nm.index, 0, -1):
        at_least = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1] if k + 1 < len(ranks) else 0
        weights.extend([k - 1] * (at_least - at_least_next))
    return weights


def _apply(images: Sequence[dict], v: dict) -> dict:
    out: dict = {}
    for j, c in v.items():
        for i, x in images[j].items():
            y = out.get(i, 0) + c * x
            if y:
                out[i] = y
            else:
                out.pop(i, None)
    return out


def jordan_chains(images: Sequence[dict], dim: int | None = None) -> list[tuple[int, list[dict]]]:
    """Jordan chains of a nilpotent operator given by basis images.

    Returns ``(weight, [u0, ..., u_weight])`` per cell, weights descending,
    with ``N(u_k) = u_{k-1}`` and ``N(u_0) = 0``.  Tops of chains of length
    ``k`` are the canonical complement of ``ker N^(k-1) + N ker N^(k+1)``
    inside ``ker N^k``.
    """
    dim = len(images) if dim is None else dim
    if dim == 0:
        return []
    # kernels of powers
    kernels = [BasisMatrix(dim)]
    power_images = [{j: Fraction(1)} for j in range(dim)]
    for k in range(1, dim + 2):
        power_images = [_apply(images, v) for v in power_images]
        ker = BasisMatrix(dim, kernel_of_images(power_images))
        kernels.append(ker)
        if ker.dim == dim:
            break
    else:
        raise NotNilpotentError(dim, "operator is not nilpotent")
    nu = len(kernels) - 1
    cells: list[tuple[int, list[dict]]] = []
    for k in range(nu, 0, -1):
        upper = kernels[min(k + 1, nu)]
        ech = kernels[k - 1].echelon()
        for r in upper.rows:
            ech.add(_apply(images, r))
        tops = complement(ech, kernels[k].rows, dim)
        for v in tops.rows:
            chain = [v]
            for _ in range(k - 1):
                chain.append(_apply(images, chain[-1]))
            chain.reverse()
            cells.append((k - 1, chain))
    return cells


@dataclass(frozen=True)
class JordanStructure:
    """Cell weights and the change of basis ``P`` (columns = new basis)."""

    weights: tuple[int, ...]
    basis: Matrix

    @property
    def size(self) -> int:
        return sum(r + 1 for r in self.weights)

    def cell_form(self) -> Matrix:
        m = self.size
        rows = [[Fraction(0)] * m for _ in range(m)]
        off = 0
        for r in self.weights:
            for j in range(1, r + 1):
                rows[off + j - 1][off + j] = Fraction(1)
            off += r + 1
        return tuple(tuple(row) for row in rows)


def jordan_basis(n) -> JordanStructure:
    nm = check_nilpotent(n)
    a = nm.entries
    m = len(a)
    cells = jordan_chains(columns(a), m)
    cols = [vec for _, chain in cells for vec in chain]
    p = tuple(tuple(col.get(i, Fraction(0)) for col in cols) for i in range(m))
    return JordanStructure(tuple(w for w, _ in cells), p)


def cell_matrix(weights: Sequence[int]) -> Matrix:
    return JordanStructure(tuple(weights), identity(sum(r + 1 for r in weights))).cell_form()
