"""Generic matrices, formal traces, and constants of the trace algebras.

Everything is evaluated inside the commutative ring of matrix entries
``a^(i)_st``.  The pure trace algebra ``C`` is the image of the polynomial
algebra on formal traces (one symbol per necklace of length at most the
Nagata-Higman degree), and the mixed algebra ``T`` is spanned over ``C`` by
words in the generic matrices.  Constants are produced on the formal side by
the kernel and module engines and pushed through evaluation; the result is
certified degree by degree against nullspaces in the entry ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Sequence

from .exact import CommPoly, NcPoly, _join_terms, monomials_of_degree
from .kernel import DegreeRecord, GenerationCheck, NotConstantError, kernel_component, minimal_generators, to_original
from .linalg import BasisMatrix, Echelon, complement, kernel_of_images
from .module import ModuleContext, module_generators
from .nilpotent import JordanStructure, Matrix, as_matrix, check_nilpotent, jordan_chains
from .sl2 import DerivationContext, InternalConsistencyError, apply_linear_derivation

NAGATA_HIGMAN = {1: 1, 2: 3}


class UnsupportedSizeError(ValueError):
    pass


def least_rotation(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def necklaces(m: int, length: int) -> list[tuple[int, ...]]:
    return sorted({least_rotation(w) for w in product(range(1, m + 1), repeat=length)})


def word_text(w: Sequence[int]) -> str:
    return "*".join(f"x{a}" for a in w) if w else "1"


@lru_cache(maxsize=None)
def _entry_monomials(nv: int, deg: int) -> tuple[list, dict]:
    mons = monomials_of_degree((1,) * nv, deg)
    return mons, {e: i for i, e in enumerate(mons)}


@dataclass(frozen=True)
class NHCertificate:
    n: int
    degree: int
    positive: bool  # x1...x_d in the multilinear component of the T-ideal
    negative: bool  # x1...x_{d-1} not in the previous one
    dims: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.positive and self.negative


def _nil2_multilinear(d: int) -> BasisMatrix:
    """Multilinear degree-d component of the T-ideal generated by x^2.

    Substituting a sum of monomials into x^2 and keeping multilinear parts
    leaves u (v w + w v) u' with disjoint monomials u, v, w, u'.
    """
    letters = tuple(range(1, d + 1))
    words = [w for w in product(letters, repeat=d) if len(set(w)) == d]
    index = {w: i for i, w in enumerate(words)}
    vecs = []
    for w in words:
        for a in range(d):
            for b in range(a + 1, d):
                for c in range(b + 1, d + 1):
                    u, v, x, u2 = w[:a], w[a:b], w[b:c], w[c:]
                    vec = {index[w]: Fraction(1)}
                    other = index[u + x + v + u2]
                    vec[other] = vec.get(other, 0) + 1
                    vecs.append(vec)
    return BasisMatrix(len(words), vecs, basis=words)


def nagata_higman_degree(n: int = 2) -> tuple[int, NHCertificate]:
    if n not in NAGATA_HIGMAN or n != 2:
        raise UnsupportedSizeError(f"the nilpotency degree is only certified for n = 2, not n = {n}")
    d = NAGATA_HIGMAN[n]
    top = _nil2_multilinear(d)
    low = _nil2_multilinear(d - 1)
    pos = top.contains({top.basis.index(tuple(range(1, d + 1))): Fraction(1)})
    neg = not low.contains({low.basis.index(tuple(range(1, d))): Fraction(1)})
    return d, NHCertificate(n, d, pos, neg, (low.dim, top.dim))


class GenericMatrixContext:
    """Generic n x n matrices x_1..x_m over the ring of their entries."""

    def __init__(self, n: int, m: int):
        if n < 1 or m < 1:
            raise ValueError("matrix size and variable count must be positive")
        self.n = n
        self.m = m
        self.nv = n * n * m

    def entry(self, i: int, s: int, t: int) -> int:
        """Index of a^(i)_st, with i 1-based and s, t 0-based."""
        return (i - 1) * self.n * self.n + s * self.n + t

    @cached_property
    def entry_names(self) -> tuple[str, ...]:
        return tuple(
            f"a{i}_{s + 1}{t + 1}" for i in range(1, self.m + 1) for s in range(self.n) for t in range(self.n)
        )

    def generic(self, i: int) -> list[list[CommPoly]]:
        return [[CommPoly.var(self.entry(i, s, t), self.nv) for t in range(self.n)] for s in range(self.n)]

    def identity(self) -> list[list[CommPoly]]:
        return [[CommPoly.const(int(s == t), self.nv) for t in range(self.n)] for s in range(self.n)]

    def matmul(self, a, b):
        n = self.n
        return [[sum((a[s][k] * b[k][t] for k in range(n)), CommPoly.zero(self.nv)) for t in range(n)] for s in range(n)]

    def word_matrix(self, w: tuple[int, ...]):
        return self._word(tuple(w))

    @lru_cache(maxsize=None)
    def _word(self, w: tuple[int, ...]):
        if not w:
            return self.identity()
        return self.matmul(self._word(w[:-1]), self.generic(w[-1]))

    def trace(self, mat) -> CommPoly:
        return sum((mat[s][s] for s in range(self.n)), CommPoly.zero(self.nv))

    @lru_cache(maxsize=None)
    def trace_word(self, w: tuple[int, ...]) -> CommPoly:
        return self.trace(self._word(tuple(w)))

    def delta_images(self, delta: Matrix) -> list[CommPoly]:
        """delta(a^(i)_st) = sum_j N[j][i] a^(j)_st."""
        out = []
        for i in range(1, self.m + 1):
            for s in range(self.n):
                for t in range(self.n):
                    f = CommPoly.zero(self.nv)
                    for j in range(1, self.m + 1):
                        c = delta[j - 1][i - 1]
                        if c:
                            f = f + CommPoly.var(self.entry(j, s, t), self.nv).scale(c)
                    out.append(f)
        return out

    # -- vectors in the entry ring ----------------------------------------

    def to_vector(self, f: CommPoly, deg: int) -> dict:
        _, idx = _entry_monomials(self.nv, deg)
        return {idx[e]: c for e, c in f.terms.items()}

    def to_poly(self, v: dict, deg: int) -> CommPoly:
        mons, _ = _entry_monomials(self.nv, deg)
        return CommPoly._raw(self.nv, {mons[j]: c for j, c in v.items() if c})

    def size(self, deg: int) -> int:
        return len(_entry_monomials(self.nv, deg)[0])

    def mat_to_vector(self, mat, deg: int) -> dict:
        size = self.size(deg)
        out = {}
        for p in range(self.n * self.n):
            for j, c in self.to_vector(mat[p // self.n][p % self.n], deg).items():
                out[p * size + j] = c
        return out

    def vector_to_mat(self, v: dict, deg: int):
        size = self.size(deg)
        parts: list[dict] = [{} for _ in range(self.n * self.n)]
        for j, c in v.items():
            parts[j // size][j % size] = c
        return [[self.to_poly(parts[s * self.n + t], deg) for t in range(self.n)] for s in range(self.n)]


def _linear_images(words: Sequence[tuple[int, ...]], delta: Matrix, canon) -> list[dict]:
    """delta on the span of ``words`` by Leibniz over positions."""
    index = {w: i for i, w in enumerate(words)}
    m = len(delta)
    out = []
    for w in words:
        img: dict = {}
        for pos, a in enumerate(w):
            for b in range(1, m + 1):
                c = delta[b - 1][a - 1]
                if c:
                    j = index[canon(w[:pos] + (b,) + w[pos + 1:])]
                    img[j] = img.get(j, 0) + c
        out.append({j: c for j, c in img.items() if c})
    return out


@dataclass
class GradedJordan:
    """Jordan basis of delta on a graded span of words, block by length."""

    words: list[tuple[int, ...]]
    weights: tuple[int, ...]
    degrees: tuple[int, ...]  # one per cell
    basis: Matrix  # columns = cell vectors in word coordinates


def graded_jordan(blocks: Sequence[list[tuple[int, ...]]], delta: Matrix, canon) -> GradedJordan:
    words = [w for b in blocks for w in b]
    total = len(words)
    weights, degrees, cols = [], [], []
    off = 0
    for b in blocks:
        if not b:
            continue
        for r, chain in jordan_chains(_linear_images(b, delta, canon), len(b)):
            weights.append(r)
            degrees.append(len(b[0]))
            for v in chain:
                cols.append({off + j: c for j, c in v.items()})
        off += len(b)
    basis = tuple(tuple(col.get(i, Fraction(0)) for col in cols) for i in range(total))
    return GradedJordan(words, tuple(weights), tuple(degrees), basis)


class FormalTraceAlphabet:
    """One symbol per necklace of length 1..d, with the induced delta."""

    def __init__(self, m: int, d: int, delta: Matrix):
        self.m = m
        self.d = d
        self.delta = delta
        self.blocks = [necklaces(m, k) for k in range(1, d + 1)]
        self.symbols = [w for b in self.blocks for w in b]
        self.jordan = graded_jordan(self.blocks, delta, least_rotation)
        self.names = tuple(f"tr({word_text(w)})" for w in self.symbols)
        var_degrees = tuple(g for r, g in zip(self.jordan.weights, self.jordan.degrees) for _ in range(r + 1))
        self.ctx = DerivationContext(
            self.jordan.weights,
            degrees=var_degrees,
            names=tuple(f"y{i}" for i in range(len(self.symbols))),
            jordan=JordanStructure(self.jordan.weights, self.jordan.basis),
        )

    def symbol_images(self) -> list[dict]:
        return _linear_images(self.symbols, self.delta, least_rotation)

    def in_symbols(self, f: CommPoly) -> CommPoly:
        """Rewrite a polynomial in Jordan variables over the necklace symbols."""
        return to_original(self.ctx, f)

    @property
    def symbol_degrees(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.symbols)

    def text(self, g: CommPoly) -> str:
        return g.to_text(self.names, self.symbol_degrees)


@dataclass
class TraceReport:
    n: int
    m: int
    delta: Matrix
    verified_degree: int
    word_length: int
    alphabet: FormalTraceAlphabet
    gm: GenericMatrixContext
    pure: list[tuple[CommPoly, int]]  # generators over necklace symbols
    pure_entry: list[CommPoly]
    mixed: list[tuple[list[tuple[CommPoly, tuple[int, ...]]], int]]  # sum of (trace poly, word)
    mixed_entry: list[list[list[CommPoly]]]
    pure_records: list[DegreeRecord] = field(default_factory=list)
    mixed_records: list[DegreeRecord] = field(default_factory=list)
    escalation: list[tuple[int, bool]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(r.ok for r in self.pure_records) and all(r.ok for r in self.mixed_records)

    def pure_text(self, i: int) -> str:
        return self.alphabet.text(self.pure[i][0])

    def mixed_text(self, i: int) -> str:
        parts = []
        for f, w in self.mixed[i][0]:
            for e, c in f.sorted_terms(self.alphabet.symbol_degrees):
                mono = CommPoly._raw(f.nvars, {e: Fraction(1)}).to_text(self.alphabet.names)
                if mono == "1":
                    parts.append((c, word_text(w) if w else "I"))
                else:
                    parts.append((c, mono if not w else f"{mono}*{word_text(w)}"))
        return _join_terms(parts)


class TraceEngine:
    """Components of C and T inside the entry ring, with delta acting on them."""

    def __init__(self, n: int, m: int, delta):
        if n != 2:
            raise UnsupportedSizeError(f"trace algebras are supported for n = 2 only, not n = {n}")
        self.delta = check_nilpotent(as_matrix(delta)).entries
        if len(self.delta) != m:
            raise ValueError(f"delta is {len(self.delta)}x{len(self.delta)} but there are {m} matrices")
        self.n, self.m = n, m
        self.d = NAGATA_HIGMAN[n]
        self.gm = GenericMatrixContext(n, m)
        self.images = self.gm.delta_images(self.delta)
        self._pure: dict[int, BasisMatrix] = {}

    def apply(self, f: CommPoly) -> CommPoly:
        return apply_linear_derivation(f, self.images)

    def apply_mat(self, mat):
        return [[self.apply(x) for x in row] for row in mat]

    def trace_product(self, mono: Sequence[tuple[int, ...]]) -> CommPoly:
        out = CommPoly.const(1, self.gm.nv)
        for w in mono:
            out = out * self.gm.trace_word(w)
        return out

    def pure_component(self, deg: int) -> BasisMatrix:
        """Span of products of traces of words of length <= d, total degree deg."""
        if deg not in self._pure:
            syms = [w for k in range(1, self.d + 1) for w in necklaces(self.m, k)]
            lens = tuple(len(w) for w in syms)
            vecs = []
            for e in monomials_of_degree(lens, deg):
                mono = [w for w, k in zip(syms, e) for _ in range(k)]
                vecs.append(self.gm.to_vector(self.trace_product(mono), deg))
            self._pure[deg] = BasisMatrix(self.gm.size(deg), vecs)
        return self._pure[deg]

    def mixed_component(self, deg: int, L: int) -> BasisMatrix:
        """Span of (pure component) x (word of length <= L), degree deg."""
        vecs = []
        for k in range(0, min(L, deg) + 1):
            pure = self.pure_component(deg - k)
            for w in product(range(1, self.m + 1), repeat=k):
                wm = self.gm.word_matrix(w)
                for r in pure.rows:
                    f = self.gm.to_poly(r, deg - k)
                    vecs.append(self.gm.mat_to_vector([[f * x for x in row] for row in wm], deg))
        return BasisMatrix(self.gm.n * self.gm.n * self.gm.size(deg), vecs)

    def pure_constants(self, deg: int) -> BasisMatrix:
        comp = self.pure_component(deg)
        imgs = [self.gm.to_vector(self.apply(self.gm.to_poly(r, deg)), deg) for r in comp.rows]
        return _kernel_inside(comp, imgs, self.gm.size(deg))

    def mixed_constants(self, deg: int, L: int) -> BasisMatrix:
        comp = self.mixed_component(deg, L)
        imgs = [self.gm.mat_to_vector(self.apply_mat(self.gm.vector_to_mat(r, deg)), deg) for r in comp.rows]
        return _kernel_inside(comp, imgs, comp.ncols)


def _kernel_inside(comp: BasisMatrix, images: list[dict], ncols: int) -> BasisMatrix:
    out = []
    for k in kernel_of_images(images):
        v: dict = {}
        for i, c in k.items():
            for j, x in comp.rows[i].items():
                v[j] = v.get(j, 0) + c * x
        out.append({j: c for j, c in v.items() if c})
    return BasisMatrix(ncols, out)


def trace_algebra_component(n: int, m: int, deg: int) -> BasisMatrix:
    if deg < 0:
        raise ValueError("degree must be non-negative")
    zero = [[0] * m for _ in range(m)]
    return TraceEngine(n, m, zero).pure_component(deg)


def mixed_trace_component(n: int, m: int, deg: int, L: int = 2) -> BasisMatrix:
    if deg < 0:
        raise ValueError("degree must be non-negative")
    zero = [[0] * m for _ in range(m)]
    return TraceEngine(n, m, zero).mixed_component(deg, L)


def choose_word_length(eng: TraceEngine, D: int, start: int | None = None) -> tuple[int, list[tuple[int, bool]]]:
    """Smallest L >= start with T_deg(L) = T_deg(L + 2) for all deg <= D."""
    L = eng.d - 1 if start is None else start
    log = []
    while True:
        if L >= D:
            log.append((L, True))
            return L, log
        stable = all(eng.mixed_component(k, L).dim == eng.mixed_component(k, L + 2).dim for k in range(D + 1))
        log.append((L, stable))
        if stable:
            return L, log
        L += 1


def _eval_symbols(eng: TraceEngine, alpha: FormalTraceAlphabet, f: CommPoly) -> CommPoly:
    """Evaluate a polynomial over necklace symbols in the entry ring."""
    return f.substitute([eng.gm.trace_word(w) for w in alpha.symbols])


def _scalar_times(f: CommPoly, mat):
    return [[f * x for x in row] for row in mat]


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def trace_invariant_generators(n: int, m: int, delta, max_degree: int, word_length: int | None = None, threads: int | None = None) -> TraceReport:
    D = max_degree
    if D < 1:
        raise ValueError("max degree must be at least 1")
    eng = TraceEngine(n, m, delta)
    gm = eng.gm
    L, esc = choose_word_length(eng, D, word_length)
    alpha = FormalTraceAlphabet(m, eng.d, eng.delta)
    ctx = alpha.ctx

    # C^delta: ring generators on the formal side, evaluated and pruned
    ring = minimal_generators(ctx, D, threads)
    cands: dict[int, list[CommPoly]] = {}
    for g, e in zip(ring.generators, ring.degrees):
        cands.setdefault(e, []).append(alpha.in_symbols(g))
    pure: list[tuple[CommPoly, int]] = []
    pure_entry: list[CommPoly] = []
    spaces = [BasisMatrix(1, [{0: Fraction(1)}])]
    pure_records = []
    for k in range(1, D + 1):
        ech = Echelon(gm.size(k))
        for g, e in zip(pure_entry, [d for _, d in pure]):
            for r in spaces[k - e].rows:
                ech.add(gm.to_vector(g * gm.to_poly(r, k - e), k))
        evals = [(f, _eval_symbols(eng, alpha, f)) for f in cands.get(k, [])]
        vecs = [gm.to_vector(v, k) for _, v in evals]
        new = complement(ech, vecs, gm.size(k))
        for row in new.rows:
            # keep a formal preimage: the first candidate that is new at this point
            for (f, v), vec in zip(evals, vecs):
                if vec and not ech.contains(vec):
                    lead = 1 / f.sorted_terms(alpha.symbol_degrees)[0][1]
                    pure.append((f.scale(lead), k))
                    pure_entry.append(v.scale(lead))
                    ech.add(vec)
                    break
        spaces.append(BasisMatrix._from_echelon(ech))
        ker = eng.pure_constants(k)
        # oracle: the formal kernel pushed through evaluation
        formal = kernel_component(ctx, k)
        pushed = BasisMatrix(gm.size(k), [gm.to_vector(_eval_symbols(eng, alpha, alpha.in_symbols(ctx.to_poly(r, k))), k) for r in formal.rows])
        if not ker.contains_space(spaces[k]):
            raise InternalConsistencyError(f"degree {k}: an evaluated constant is not a constant")
        pure_records.append(DegreeRecord(k, pushed.dim, ker.dim, new.dim, spaces[k].dim))

    # T^delta: module generators over C^delta with Z = words of length <= L
    zwords = [[w for w in product(range(1, m + 1), repeat=k)] for k in range(L + 1)]
    zj = graded_jordan(zwords, eng.delta, lambda w: w)
    mc = ModuleContext(ctx, zj.weights, zj.degrees)
    mrep = module_generators(mc, D, ring_report=ring, threads=threads)
    zmats = []
    for j in range(len(zj.words)):
        mat = [[CommPoly.zero(gm.nv)] * n for _ in range(n)]
        for i, w in enumerate(zj.words):
            c = zj.basis[i][j]
            if c:
                mat = _mat_add(mat, _scalar_times(CommPoly.const(c, gm.nv), gm.word_matrix(w)))
        zmats.append(mat)
    mcands: dict[int, list] = {}
    for g, deg in zip(mrep.generators, mrep.degrees):
        formal_terms = []
        mat = [[CommPoly.zero(gm.nv)] * n for _ in range(n)]
        for j, f in enumerate(g.coeffs):
            if f.is_zero():
                continue
            fs = alpha.in_symbols(f)
            for i, w in enumerate(zj.words):
                c = zj.basis[i][j]
                if c:
                    formal_terms.append((fs.scale(c), w))
            mat = _mat_add(mat, _scalar_times(_eval_symbols(eng, alpha, fs), zmats[j]))
        mcands.setdefault(deg, []).append((_merge_terms(formal_terms), mat))

    mixed, mixed_entry, mixed_records = [], [], []
    for k in range(0, D + 1):
        size = n * n * gm.size(k)
        ech = Echelon(size)
        for (terms, e), mat in zip(mixed, mixed_entry):
            for r in spaces[k - e].rows:
                ech.add(gm.mat_to_vector(_scalar_times(gm.to_poly(r, k - e), mat), k))
        cl = mcands.get(k, [])
        vecs = [gm.mat_to_vector(mat, k) for _, mat in cl]
        new = complement(ech, vecs, size)
        for _ in new.rows:
            for (terms, mat), vec in zip(cl, vecs):
                if vec and not ech.contains(vec):
                    lead = 1 / terms[0][0].sorted_terms(alpha.symbol_degrees)[0][1]
                    mixed.append(([(f.scale(lead), w) for f, w in terms], k))
                    mixed_entry.append(_scalar_times(CommPoly.const(lead, gm.nv), mat))
                    ech.add(vec)
                    break
        ker = eng.mixed_constants(k, L)
        gen = BasisMatrix._from_echelon(ech)
        if not ker.contains_space(gen):
            raise InternalConsistencyError(f"degree {k}: an evaluated module element is not a constant")
        pushed = _pushed_module_dim(eng, alpha, mc, zmats, k)
        mixed_records.append(DegreeRecord(k, pushed, ker.dim, new.dim, gen.dim))

    return TraceReport(
        n, m, eng.delta, D, L, alpha, gm, pure, pure_entry, mixed, mixed_entry, pure_records, mixed_records, esc
    )


def _pushed_module_dim(eng, alpha, mc, zmats, k) -> int:
    """dim of the image of the formal module constants of degree k."""
    from .module import module_kernel_component, to_element

    gm = eng.gm
    n = gm.n
    vecs = []
    for r in module_kernel_component(mc, k).rows:
        el = to_element(mc, r, k)
        mat = [[CommPoly.zero(gm.nv)] * n for _ in range(n)]
        for j, f in enumerate(el.coeffs):
            if not f.is_zero():
                mat = _mat_add(mat, _scalar_times(_eval_symbols(eng, alpha, alpha.in_symbols(f)), zmats[j]))
        vecs.append(gm.mat_to_vector(mat, k))
    return BasisMatrix(n * n * gm.size(k), vecs).dim


def _merge_terms(terms):
    acc: dict = {}
    for f, w in terms:
        acc[w] = acc[w] + f if w in acc else f
    return [(f, w) for w, f in sorted(acc.items(), key=lambda t: (-len(t[0]), t[0])) if not f.is_zero()]


def cayley_hamilton_check(gm: GenericMatrixContext | None = None) -> dict[str, bool]:
    """x^2 - tr(x) x + (tr(x)^2 - tr(x^2))/2 = 0 for x = x1, x2, x1 + x2."""
    gm = gm or GenericMatrixContext(2, 2)
    if gm.n != 2:
        raise UnsupportedSizeError("the identity is checked for 2 x 2 matrices")
    cases = {"x1": gm.generic(1)}
    if gm.m >= 2:
        cases["x2"] = gm.generic(2)
        cases["x1+x2"] = _mat_add(gm.generic(1), gm.generic(2))
    out = {}
    for name, x in cases.items():
        x2 = gm.matmul(x, x)
        t = gm.trace(x)
        half = (t * t - gm.trace(x2)).scale(Fraction(1, 2))
        res = _mat_add(_mat_add(x2, _scalar_times(-t, x)), _scalar_times(half, gm.identity()))
        out[name] = all(f.is_zero() for row in res for f in row)
    return out


def check_equivariance(m: int, delta, d: int = 3, n: int = 2) -> bool:
    """delta(tr(w)) computed in the entry ring equals the formal Leibniz image."""
    eng = TraceEngine(n, m, delta)
    syms = [w for k in range(1, d + 1) for w in necklaces(m, k)]
    imgs = _linear_images(syms, eng.delta, least_rotation)
    for w, img in zip(syms, imgs):
        formal = sum((eng.gm.trace_word(syms[j]).scale(c) for j, c in img.items()), CommPoly.zero(eng.gm.nv))
        if eng.apply(eng.gm.trace_word(w)) != formal:
            return False
    return True


def check_cyclicity(m: int, max_len: int = 4, n: int = 2) -> bool:
    gm = GenericMatrixContext(n, m)
    for k in range(1, max_len + 1):
        for w in product(range(1, m + 1), repeat=k):
            if gm.trace_word(w) != gm.trace_word(least_rotation(w)):
                return False
    return True


@dataclass
class TraceVerification:
    pure: list[GenerationCheck]
    mixed: list[GenerationCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.pure) and all(c.ok for c in self.mixed)

    def first_failure(self) -> tuple[str, int] | None:
        for tag, checks in (("pure", self.pure), ("mixed", self.mixed)):
            for c in checks:
                if not c.ok:
                    return tag, c.n
        return None


def verify_trace_generation(
    pure_gens: Sequence[CommPoly],
    mixed_gens: Sequence,
    n: int,
    m: int,
    delta,
    max_degree: int,
    word_length: int = 2,
) -> TraceVerification:
    """Check entry-ring generators: pure ones generate C^delta, mixed ones T^delta over it.

    ``pure_gens`` are homogeneous entry polynomials, ``mixed_gens`` are n x n
    matrices of them.
    """
    eng = TraceEngine(n, m, delta)
    gm = eng.gm
    D = max_degree
    tagged = []
    for g in pure_gens:
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise ValueError("pure generators must be homogeneous")
        img = eng.apply(g)
        if not img.is_zero():
            raise NotConstantError(g, img, f"{g.to_text(gm.entry_names)} is not a constant")
        tagged.append((g, g.degree()))
    spaces = [BasisMatrix(1, [{0: Fraction(1)}])]
    pure_checks = []
    for k in range(1, D + 1):
        ech = Echelon(gm.size(k))
        for g, e in tagged:
            if e <= k:
                for r in spaces[k - e].rows:
                    ech.add(gm.to_vector(g * gm.to_poly(r, k - e), k))
        spaces.append(BasisMatrix._from_echelon(ech))
        pure_checks.append(GenerationCheck(k, spaces[k].dim, eng.pure_constants(k).dim))
    mtag = []
    for mat in mixed_gens:
        entries = [f for row in mat for f in row if not f.is_zero()]
        if not entries:
            continue
        degs = {f.degree() for f in entries}
        if len(degs) != 1 or not all(f.is_homogeneous() for f in entries):
            raise ValueError("mixed generators must be homogeneous")
        img = eng.apply_mat(mat)
        if any(not f.is_zero() for row in img for f in row):
            raise NotConstantError(mat, img, "a mixed generator is not a constant")
        mtag.append((mat, degs.pop()))
    mixed_checks = []
    for k in range(0, D + 1):
        ech = Echelon(n * n * gm.size(k))
        for mat, e in mtag:
            if e <= k:
                for r in spaces[k - e].rows:
                    ech.add(gm.mat_to_vector(_scalar_times(gm.to_poly(r, k - e), mat), k))
        mixed_checks.append(GenerationCheck(k, len(ech), eng.mixed_constants(k, word_length).dim))
    return TraceVerification(pure_checks, mixed_checks)
