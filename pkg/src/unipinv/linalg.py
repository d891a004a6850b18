"""Exact linear algebra on sparse rational vectors.

Vectors are ``dict[int, Fraction]`` with no stored zeros.  Everything here
is built on one incremental reduced-row-echelon structure, :class:`Echelon`,
whose pivot of a row is its smallest column index.  Because rows are kept
fully reduced, reducing a vector against it touches only the pivot columns
the vector actually hits.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Vector = dict  # int -> Fraction


def axpy(target: dict, c: Fraction, row: Mapping[int, Fraction]) -> None:
    """In place ``target -= c * row``."""
    for j, v in row.items():
        x = target.get(j)
        x = -c * v if x is None else x - c * v
        if x:
            target[j] = x
        else:
            del target[j]


def as_vector(v) -> dict:
    if isinstance(v, dict):
        return {j: (c if isinstance(c, Fraction) else Fraction(c)) for j, c in v.items() if c}
    return {j: Fraction(c) for j, c in enumerate(v) if c}


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int, vectors: Iterable | None = None):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}
        if vectors is not None:
            for v in vectors:
                self.add(v)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping[int, Fraction]) -> dict:
        r = dict(v)
        rows = self.rows
        for p in [j for j in r if j in rows]:
            c = r.get(p)
            if c:
                axpy(r, c, rows[p])
        return r

    def add(self, v: Mapping[int, Fraction]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        self._insert(r)
        return True

    def _insert(self, r: dict) -> int:
        p = min(r)
        inv = 1 / r[p]
        if inv != 1:
            r = {j: x * inv for j, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                axpy(row, c, r)
        self.rows[p] = r
        return p

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def basis(self) -> "BasisMatrix":
        return BasisMatrix._from_echelon(self)


class BasisMatrix:
    """Canonical (reduced echelon) basis of a subspace of Q^ncols.

    ``basis`` optionally records the ambient labels (monomials, words) of the
    columns.  Two instances are equal iff they span the same subspace.
    """

    __slots__ = ("ncols", "rows", "pivots", "basis")

    def __init__(self, ncols: int, vectors: Iterable = (), basis: Sequence | None = None):
        ech = Echelon(ncols)
        for v in vectors:
            ech.add(as_vector(v))
        self._set(ech, basis)

    def _set(self, ech: Echelon, basis):
        self.ncols = ech.ncols
        self.pivots = tuple(sorted(ech.rows))
        self.rows = tuple(ech.rows[p] for p in self.pivots)
        self.basis = tuple(basis) if basis is not None else None

    @classmethod
    def _from_echelon(cls, ech: Echelon, basis=None) -> "BasisMatrix":
        b = cls.__new__(cls)
        b._set(ech, basis)
        return b

    @classmethod
    def full(cls, ncols: int, basis=None) -> "BasisMatrix":
        return cls(ncols, ({j: Fraction(1)} for j in range(ncols)), basis)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def echelon(self) -> Echelon:
        ech = Echelon(self.ncols)
        ech.rows = {p: dict(r) for p, r in zip(self.pivots, self.rows)}
        return ech

    def reduce(self, v) -> dict:
        r = as_vector(v)
        for p, row in zip(self.pivots, self.rows):
            c = r.get(p)
            if c:
                axpy(r, c, row)
        return r

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def contains_space(self, other: "BasisMatrix") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, BasisMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.pivots == other.pivots and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.pivots))

    def dense(self) -> list[list[Fraction]]:
        out = []
        for r in self.rows:
            row = [Fraction(0)] * self.ncols
            for j, c in r.items():
                row[j] = c
            out.append(row)
        return out

    def __add__(self, other: "BasisMatrix") -> "BasisMatrix":
        if other.ncols != self.ncols:
            raise ValueError("dimension mismatch")
        ech = self.echelon()
        for r in other.rows:
            ech.add(r)
        return BasisMatrix._from_echelon(ech, self.basis)

    def __repr__(self):
        return f"BasisMatrix(dim={self.dim}, ncols={self.ncols})"


def rank(vectors: Iterable, ncols: int) -> int:
    return BasisMatrix(ncols, vectors).dim


def kernel_of_images(images: Sequence[Mapping[int, Fraction]], ncols_target: int | None = None) -> list[dict]:
    """Kernel of the linear map sending basis vector ``j`` to ``images[j]``.

    Returns kernel vectors (over the domain) in no particular canonical form;
    wrap them in :class:`BasisMatrix` for the canonical basis.
    """
    rows: dict[int, tuple[dict, dict]] = {}
    kernel = []
    for j, img in enumerate(images):
        r = dict(img)
        combo = {j: Fraction(1)}
        for p in [k for k in r if k in rows]:
            c = r.get(p)
            if c:
                prow, pcombo = rows[p]
                axpy(r, c, prow)
                axpy(combo, c, pcombo)
        if not r:
            kernel.append(combo)
            continue
        p = min(r)
        inv = 1 / r[p]
        if inv != 1:
            r = {k: x * inv for k, x in r.items()}
            combo = {k: x * inv for k, x in combo.items()}
        for q, (qrow, qcombo) in rows.items():
            c = qrow.get(p)
            if c:
                axpy(qrow, c, r)
                axpy(qcombo, c, combo)
        rows[p] = (r, combo)
    return kernel


def nullspace(M, ncols: int | None = None) -> BasisMatrix:
    """Canonical basis of ``{v : M v = 0}``.

    ``M`` is a :class:`BasisMatrix` or a sequence of rows (dense lists or
    sparse dicts); for raw rows ``ncols`` is required when ``M`` is empty.
    """
    if isinstance(M, BasisMatrix):
        rows, n = M.rows, M.ncols
    else:
        rows = [as_vector(r) for r in M]
        if ncols is None:
            if not M:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(M[0]) if not isinstance(M[0], dict) else max((max(r, default=-1) for r in rows), default=-1) + 1
        n = ncols
    images: list[dict] = [dict() for _ in range(n)]
    for i, r in enumerate(rows):
        for j, c in r.items():
            images[j][i] = c
    return BasisMatrix(n, kernel_of_images(images))


def span_membership(S: BasisMatrix, v) -> list[Fraction] | None:
    """Coordinates of ``v`` in the canonical rows of ``S``, or ``None``.

    For the reduced echelon basis the coordinate on row ``i`` is simply the
    entry of ``v`` at that row's pivot.
    """
    if isinstance(v, (list, tuple)) and len(v) != S.ncols:
        raise ValueError(f"dimension mismatch: vector of length {len(v)}, ambient dimension {S.ncols}")
    v = as_vector(v)
    if v and max(v) >= S.ncols:
        raise ValueError("dimension mismatch")
    coords = [v.get(p, Fraction(0)) for p in S.pivots]
    acc: dict = {}
    for c, row in zip(coords, S.rows):
        if c:
            axpy(acc, -c, row)
    return coords if acc == v else None


def express(vectors: Sequence[Mapping[int, Fraction]], target: Mapping[int, Fraction]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target`` or ``None``.

    Deterministic: free coefficients (dependent vectors) are set to zero.
    """
    rows: dict[int, tuple[dict, dict]] = {}
    for j, vec in enumerate(vectors):
        r = dict(vec)
        combo = {j: Fraction(1)}
        for p in [k for k in r if k in rows]:
            c = r.get(p)
            if c:
                axpy(r, c, rows[p][0])
                axpy(combo, c, rows[p][1])
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        combo = {k: x * inv for k, x in combo.items()}
        for q, (qrow, qcombo) in rows.items():
            c = qrow.get(p)
            if c:
                axpy(qrow, c, r)
                axpy(qcombo, c, combo)
        rows[p] = (r, combo)
    r = dict(target)
    out: dict = {}
    for p in [k for k in r if k in rows]:
        c = r.get(p)
        if c:
            axpy(r, c, rows[p][0])
            axpy(out, -c, rows[p][1])
    if r:
        return None
    return [out.get(j, Fraction(0)) for j in range(len(vectors))]


def complement(sub: BasisMatrix | Echelon, vectors: Iterable[Mapping[int, Fraction]], ncols: int) -> BasisMatrix:
    """Canonical complement of ``sub`` inside ``sub + span(vectors)``.

    Each vector is reduced modulo ``sub``; the reduced echelon form of the
    residues is returned.  The result depends only on the two spans.
    """
    ech = Echelon(ncols)
    for v in vectors:
        r = sub.reduce(v)
        if r:
            ech.add(r)
    # residues are already zero on the pivots of ``sub``; re-reduce the final
    # rows so the output is canonical regardless of insertion order
    return BasisMatrix._from_echelon(ech)


def intersection(a: BasisMatrix, b: BasisMatrix) -> BasisMatrix:
    """Intersection of two subspaces of the same ambient space."""
    if a.ncols != b.ncols:
        raise ValueError("dimension mismatch")
    # kernel of (x, y) -> x*A - y*B restricted to the a-coordinates
    images = [dict(r) for r in a.rows] + [{j: -c for j, c in r.items()} for r in b.rows]
    out = []
    for k in kernel_of_images(images):
        v: dict = {}
        for i, c in k.items():
            if i < a.dim:
                axpy(v, -c, a.rows[i])
        if v:
            out.append(v)
    return BasisMatrix(a.ncols, out)
