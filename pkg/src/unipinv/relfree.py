"""Relatively free algebras of Lie nilpotent varieties and their constants.

The variety of class ``c`` is cut out by the left-normed commutator
``[x_1, ..., x_{c+1}] = 0``.  Its T-ideal is multihomogeneous, so every graded
component is handled one multidegree block at a time; inside a block the
T-ideal component is kept in reduced echelon form over the words (ascending
lexicographic order), and the non-pivot words give canonical coordinates of
the quotient ``F_m(V)``.

Constants are assembled layer by layer along the filtration by proper
polynomials:

* ``I_0 = F``, and for ``k >= 1`` ``I_k`` is the ideal generated by the proper
  components ``B^(j)``, ``j >= max(k, 2)``.  ``I_0/I_1`` is ``K[X]`` and
  ``I_k/I_{k+1}`` is free over ``K[X]`` on ``B^(k)``.
* Layer 0 uses the commutative kernel engine; layer ``k`` uses the module
  engine with ``Z = B^(k)``.  Every layer constant is lifted to a constant
  of ``F`` by solving a linear system in the next filtration step.
* Finally the collected elements are pruned degree by degree and the
  subalgebra they generate is compared with the kernel of delta on ``F_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from .exact import CommPoly, NcPoly, _join_terms, commutator
from .kernel import DegreeRecord, GenerationCheck, minimal_generators, to_original
from .linalg import BasisMatrix, Echelon, axpy, complement, express, kernel_of_images
from .module import LiftError, ModuleContext, lift_constant, module_generators, module_kernel_oracle
from .nilpotent import Matrix, as_matrix, check_nilpotent, jordan_basis
from .sl2 import DerivationContext, InternalConsistencyError, kernel_dim_oracle


@dataclass(frozen=True)
class VarietySpec:
    c: int
    m: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("nilpotency class must be at least 1")
        if self.m < 1:
            raise ValueError("need at least one variable")


def content(word: Sequence[int], m: int) -> tuple[int, ...]:
    out = [0] * m
    for a in word:
        out[a - 1] += 1
    return tuple(out)


def ordered_word(exp: Sequence[int]) -> tuple[int, ...]:
    """x1^p1 x2^p2 ... as a word."""
    return tuple(i + 1 for i, p in enumerate(exp) for _ in range(p))


def _expand_commutator(args: Sequence[tuple[int, ...]]) -> dict:
    """Left-normed commutator of words, as a word -> int map."""
    cur = {args[0]: 1}
    for b in args[1:]:
        nxt: dict = {}
        for a, c in cur.items():
            nxt[a + b] = nxt.get(a + b, 0) + c
            nxt[b + a] = nxt.get(b + a, 0) - c
        cur = {w: c for w, c in nxt.items() if c}
    return cur


def _compositions(n: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``n``."""
    for cuts in combinations(range(1, n), parts - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def _proper_shapes(k: int):
    """Ordered compositions of k into parts >= 2, fewest parts first."""
    out = []

    def rec(left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for p in range(2, left + 1):
            acc.append(p)
            rec(left - p, acc)
            acc.pop()

    rec(k, [])
    out.sort(key=lambda s: (len(s), s))
    return out


@dataclass
class _Block:
    words: list
    index: dict
    ideal: Echelon
    normal: list  # local indices of non-pivot words


@dataclass
class ProperSpace:
    k: int
    labels: list[str]
    vectors: list[dict]  # F_k coordinates of the chosen basis elements
    reps: list[NcPoly]
    candidates: int = 0

    @property
    def dim(self) -> int:
        return len(self.vectors)


@dataclass
class MixedCheck:
    n: int
    size: int
    rank: int
    dim: int

    @property
    def ok(self) -> bool:
        return self.size == self.rank == self.dim


class RelFreeAlgebra:
    """Graded components of ``K<X>/T`` for the Lie nilpotent variety of class c."""

    def __init__(self, spec: VarietySpec):
        self.spec = spec
        self.c = spec.c
        self.m = spec.m
        self._blocks: dict[tuple[int, ...], _Block] = {}
        self._normals: dict[int, tuple[list, dict]] = {}
        self._proper: dict[int, ProperSpace] = {}

    # -- T-ideal ---------------------------------------------------------

    def block(self, alpha: tuple[int, ...]) -> _Block:
        if alpha in self._blocks:
            return self._blocks[alpha]
        m = self.m
        n = sum(alpha)
        letters = []
        for i, a in enumerate(alpha):
            letters.extend([i + 1] * a)
        words = sorted(set(_perms(tuple(letters))))
        index = {w: j for j, w in enumerate(words)}
        ech = Echelon(len(words))
        if n >= self.c + 1:
            # the ideal part: x_i * T + T * x_i
            for i in range(m):
                if alpha[i] == 0:
                    continue
                beta = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
                sub = self.block(beta)
                for row in sub.ideal.rows.values():
                    left: dict = {}
                    right: dict = {}
                    for j, c in row.items():
                        w = sub.words[j]
                        left[index[(i + 1,) + w]] = c
                        right[index[w + (i + 1,)]] = c
                    ech.add(left)
                    ech.add(right)
            # substitutions of words into the generator; the last argument
            # can be a letter because [u, ab] = [u, a] b + a [u, b]
            for last in range(m):
                if alpha[last] == 0:
                    continue
                rest = list(letters)
                rest.remove(last + 1)
                for w in set(_perms(tuple(rest))):
                    for shape in _compositions(n - 1, self.c):
                        args, pos = [], 0
                        for s in shape:
                            args.append(w[pos:pos + s])
                            pos += s
                        args.append((last + 1,))
                        vec = {index[u]: Fraction(c) for u, c in _expand_commutator(args).items()}
                        if vec:
                            ech.add(vec)
        normal = [j for j in range(len(words)) if j not in ech.rows]
        blk = _Block(words, index, ech, normal)
        self._blocks[alpha] = blk
        return blk

    def words(self, n: int) -> list[tuple[int, ...]]:
        return [tuple(w) for w in product(range(1, self.m + 1), repeat=n)]

    def tideal_component(self, n: int) -> BasisMatrix:
        words = self.words(n)
        gidx = {w: j for j, w in enumerate(words)}
        vectors = []
        for alpha in _contents(self.m, n):
            blk = self.block(alpha)
            for row in blk.ideal.rows.values():
                vectors.append({gidx[blk.words[j]]: c for j, c in row.items()})
        return BasisMatrix(len(words), vectors, basis=words)

    def normal_words(self, n: int) -> list[tuple[int, ...]]:
        return self._normal(n)[0]

    def _normal(self, n: int):
        if n not in self._normals:
            out = []
            for alpha in _contents(self.m, n):
                blk = self.block(alpha)
                out.extend(blk.words[j] for j in blk.normal)
            out.sort()
            self._normals[n] = (out, {w: i for i, w in enumerate(out)})
        return self._normals[n]

    def dim(self, n: int) -> int:
        return len(self.normal_words(n))

    def reduce_words(self, terms: dict, n: int) -> dict:
        """Normal-form coordinates in F_n of a degree-n word combination."""
        _, nidx = self._normal(n)
        byblock: dict = {}
        for w, c in terms.items():
            if len(w) != n:
                raise ValueError(f"word {w} is not of degree {n}")
            byblock.setdefault(content(w, self.m), {})[w] = c
        out: dict = {}
        for alpha, part in byblock.items():
            blk = self.block(alpha)
            vec = {blk.index[w]: c for w, c in part.items()}
            vec = blk.ideal.reduce(vec)
            for j, c in vec.items():
                out[nidx[blk.words[j]]] = c
        return out

    def normal_form(self, p: NcPoly, n: int | None = None) -> dict:
        if p.is_zero():
            return {}
        if n is None:
            if not p.is_homogeneous():
                raise ValueError("element is not homogeneous")
            n = p.degree()
        return self.reduce_words(p.terms, n)

    def to_nc(self, v: dict, n: int) -> NcPoly:
        words = self.normal_words(n)
        return NcPoly._raw(self.m, {words[j]: c for j, c in v.items() if c})

    def multiply(self, a: dict, na: int, b: dict, nb: int) -> dict:
        wa, wb = self.normal_words(na), self.normal_words(nb)
        terms: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                w = wa[i] + wb[j]
                terms[w] = terms.get(w, 0) + x * y
        return self.reduce_words({w: c for w, c in terms.items() if c}, na + nb)

    # -- proper polynomials ---------------------------------------------

    def proper_component(self, k: int) -> ProperSpace:
        if k in self._proper:
            return self._proper[k]
        if k == 0:
            sp = ProperSpace(0, ["1"], [{0: Fraction(1)}] if self.dim(0) else [], [NcPoly.const(1, self.m)])
            self._proper[k] = sp
            return sp
        ech = Echelon(self.dim(k))
        labels, vectors, reps = [], [], []
        count = 0
        letters = [NcPoly.letter(i, self.m) for i in range(1, self.m + 1)]
        for shape in _proper_shapes(k):
            for idx in product(range(self.m), repeat=k):
                pos, factors, names = 0, [], []
                for s in shape:
                    part = idx[pos:pos + s]
                    pos += s
                    factors.append(commutator(*(letters[i] for i in part)))
                    names.append("[" + ",".join(f"x{i + 1}" for i in part) + "]")
                count += 1
                rep = factors[0]
                for f in factors[1:]:
                    rep = rep * f
                vec = self.normal_form(rep, k)
                if vec and ech.add(vec):
                    labels.append("*".join(names))
                    vectors.append(vec)
                    reps.append(rep)
        sp = ProperSpace(k, labels, vectors, reps, count)
        self._proper[k] = sp
        return sp

    def mixed_elements(self, n: int, min_layer: int = 0) -> list[tuple[tuple[int, ...], int, int]]:
        """(exponent, k, proper index) for ordered monomial times proper basis elements."""
        out = []
        for k in range(0, n + 1):
            if k == 1 or k < min_layer:
                continue
            sp = self.proper_component(k)
            for e in _exponents(self.m, n - k):
                for i in range(sp.dim):
                    out.append((e, k, i))
        return out

    def mixed_vector(self, e: tuple[int, ...], k: int, i: int) -> dict:
        sp = self.proper_component(k)
        d = sum(e)
        left = self.reduce_words({ordered_word(e): Fraction(1)}, d)
        return self.multiply(left, d, sp.vectors[i], k)

    def mixed_label(self, e: tuple[int, ...], k: int, i: int) -> str:
        parts = []
        for j, p in enumerate(e):
            if p == 1:
                parts.append(f"x{j + 1}")
            elif p > 1:
                parts.append(f"x{j + 1}^{p}")
        if k:
            parts.append(self.proper_component(k).labels[i])
        return "*".join(parts)

    def mixed_basis_check(self, n: int) -> MixedCheck:
        elems = self.mixed_elements(n)
        vecs = [self.mixed_vector(*el) for el in elems]
        return MixedCheck(n, len(vecs), BasisMatrix(self.dim(n), vecs).dim, self.dim(n))

    def layer(self, k: int, n: int) -> BasisMatrix:
        """(I_k)_n in F_n coordinates (I_0 = F; I_1 = I_2)."""
        if k <= 0:
            return BasisMatrix.full(self.dim(n))
        lo = max(k, 2)
        vecs = [self.mixed_vector(*el) for el in self.mixed_elements(n, lo) if el[1] >= lo]
        return BasisMatrix(self.dim(n), vecs)

    def express_mixed(self, v: dict, n: int) -> list[tuple[str, Fraction]]:
        elems = self.mixed_elements(n)
        coords = express([self.mixed_vector(*el) for el in elems], v)
        if coords is None:
            raise InternalConsistencyError(f"degree {n}: element outside the span of the mixed basis")
        return [(self.mixed_label(*el), c) for el, c in zip(elems, coords) if c]

    def mixed_text(self, v: dict, n: int) -> str:
        parts = []
        for label, c in self.express_mixed(v, n):
            parts.append((c, label))
        return _join_terms(parts)

    def detect_n0(self, top: int) -> int:
        """Least k with B^(j) = 0 for all k < j <= top."""
        n0 = 0
        for k in range(top, -1, -1):
            if self.proper_component(k).dim:
                n0 = k
                break
        return n0


def _perms(letters: tuple[int, ...]):
    """Distinct permutations of a multiset, generated directly."""
    if not letters:
        yield ()
        return
    seen = set()
    for i, a in enumerate(letters):
        if a in seen:
            continue
        seen.add(a)
        for rest in _perms(letters[:i] + letters[i + 1:]):
            yield (a,) + rest


def _contents(m: int, n: int) -> list[tuple[int, ...]]:
    out = []

    def rec(i, left, acc):
        if i == m - 1:
            out.append(tuple(acc + [left]))
            return
        for a in range(left, -1, -1):
            rec(i + 1, left - a, acc + [a])

    if m == 0:
        return [()] if n == 0 else []
    rec(0, n, [])
    return out


def _exponents(m: int, n: int) -> list[tuple[int, ...]]:
    return sorted(_contents(m, n), reverse=True)


# -- delta on F --------------------------------------------------------


class RelFreeDerivation:
    """The linear derivation with ``delta(x_i) = sum_j N[j][i] x_j`` acting on F."""

    def __init__(self, alg: RelFreeAlgebra, n_matrix):
        self.alg = alg
        self.matrix: Matrix = check_nilpotent(as_matrix(n_matrix)).entries
        if len(self.matrix) != alg.m:
            raise ValueError(f"delta is {len(self.matrix)}x{len(self.matrix)} but there are {alg.m} variables")
        self._letter = [
            [(j + 1, self.matrix[j][i]) for j in range(alg.m) if self.matrix[j][i]] for i in range(alg.m)
        ]
        self._images: dict[int, list[dict]] = {}

    def on_words(self, terms: dict) -> dict:
        out: dict = {}
        for w, c in terms.items():
            for pos, a in enumerate(w):
                for b, x in self._letter[a - 1]:
                    u = w[:pos] + (b,) + w[pos + 1:]
                    y = out.get(u, 0) + c * x
                    if y:
                        out[u] = y
                    else:
                        out.pop(u, None)
        return out

    def images(self, n: int) -> list[dict]:
        if n not in self._images:
            words = self.alg.normal_words(n)
            self._images[n] = [self.alg.reduce_words(self.on_words({w: Fraction(1)}), n) for w in words]
        return self._images[n]

    def apply(self, v: dict, n: int) -> dict:
        imgs = self.images(n)
        out: dict = {}
        for j, c in v.items():
            axpy(out, -c, imgs[j])
        return out

    def kernel(self, n: int) -> BasisMatrix:
        return BasisMatrix(self.alg.dim(n), kernel_of_images(self.images(n)))

    def on_nc(self, p: NcPoly) -> NcPoly:
        return NcPoly(self.alg.m, self.on_words(p.terms))


# -- generator assembly ------------------------------------------------


@dataclass
class RelFreeGenerator:
    degree: int
    vector: dict  # F_degree coordinates
    origin: str  # "ring" or "layer k"


@dataclass
class RelFreeReport:
    spec: VarietySpec
    generators: list[RelFreeGenerator]
    verified_degree: int
    n0: int
    records: list[DegreeRecord] = field(default_factory=list)
    proper_dims: dict[int, int] = field(default_factory=dict)
    tideal_dims: dict[int, int] = field(default_factory=dict)
    quotient_dims: dict[int, int] = field(default_factory=dict)
    filtration: dict[int, list[int]] = field(default_factory=dict)
    mixed: list[MixedCheck] = field(default_factory=list)
    layer_generators: dict[int, int] = field(default_factory=dict)
    ring_generators: int = 0

    @property
    def certified(self) -> bool:
        return all(r.ok for r in self.records) and all(mc.ok for mc in self.mixed)


def _ordered_lift(alg: RelFreeAlgebra, f: CommPoly, n: int) -> dict:
    """Image in F_n of a commutative polynomial via ordered monomials."""
    terms: dict = {}
    for e, c in f.terms.items():
        if sum(e) != n:
            raise ValueError("polynomial is not homogeneous of the expected degree")
        w = ordered_word(e)
        terms[w] = terms.get(w, 0) + c
    return alg.reduce_words(terms, n)


def subalgebra_spaces(alg: RelFreeAlgebra, gens: Sequence[tuple[dict, int]], top: int) -> list[BasisMatrix]:
    """Components 0..top of the subalgebra of F generated by homogeneous elements."""
    spaces = [BasisMatrix(alg.dim(0), [{0: Fraction(1)}])]
    for n in range(1, top + 1):
        ech = Echelon(alg.dim(n))
        for g, e in gens:
            if 0 < e <= n:
                for r in spaces[n - e].rows:
                    prod_ = alg.multiply(g, e, r, n - e)
                    if prod_:
                        ech.add(prod_)
        spaces.append(BasisMatrix._from_echelon(ech))
    return spaces


def relfree_invariant_generators(spec: VarietySpec, delta, max_degree: int, threads: int | None = None) -> RelFreeReport:
    D = max_degree
    if D < 1:
        raise ValueError("max degree must be at least 1")
    alg = RelFreeAlgebra(spec)
    der = RelFreeDerivation(alg, delta)
    ctx = DerivationContext.from_matrix(der.matrix, names=tuple(f"x{i + 1}" for i in range(spec.m)))
    ring = minimal_generators(ctx, D, threads)
    n0 = alg.detect_n0(D)
    candidates: dict[int, list[tuple[dict, str]]] = {}

    def lift(v: dict, n: int, k: int) -> dict:
        m0 = alg.layer(k, n)
        try:
            return lift_constant(lambda x: der.apply(x, n), m0.rows, v)
        except LiftError as exc:
            raise InternalConsistencyError(f"degree {n}, layer {k}: {exc}") from None

    # layer 0: K[X]^delta lifted through I_1
    for f, e in zip(ring.generators, ring.degrees):
        v = _ordered_lift(alg, to_original(ctx, f), e)
        candidates.setdefault(e, []).append((lift(v, e, 1), "ring"))

    # layers k >= 2: module constants over K[X]^delta with Z = B^(k)
    layer_mcs: dict[int, ModuleContext] = {}
    layer_counts: dict[int, int] = {}
    for k in range(2, min(n0, D) + 1):
        sp = alg.proper_component(k)
        if not sp.dim:
            continue
        cols = []
        for vec in sp.vectors:
            img = der.apply(vec, k)
            coords = express(sp.vectors, img)
            if coords is None:
                raise InternalConsistencyError(f"B^({k}) is not delta-stable")
            cols.append(coords)
        dmat = tuple(tuple(cols[j][i] for j in range(sp.dim)) for i in range(sp.dim))
        js = jordan_basis(dmat)
        zvecs = []
        for j in range(sp.dim):
            z: dict = {}
            for i in range(sp.dim):
                if js.basis[i][j]:
                    axpy(z, -js.basis[i][j], sp.vectors[i])
            zvecs.append(z)
        mc = ModuleContext(ctx, js.weights)
        layer_mcs[k] = mc
        mrep = module_generators(mc, D - k, ring_report=ring, threads=threads)
        layer_counts[k] = len(mrep.generators)
        for g, d in zip(mrep.generators, mrep.degrees):
            n = d + k
            v: dict = {}
            for j, fj in enumerate(g.coeffs):
                if fj.is_zero():
                    continue
                left = _ordered_lift(alg, to_original(ctx, fj), d)
                axpy(v, -1, alg.multiply(left, d, zvecs[j], k))
            candidates.setdefault(n, []).append((lift(v, n, k + 1), f"layer {k}"))

    # prune degreewise and certify against ker delta on F_n
    gens: list[RelFreeGenerator] = []
    spaces = [BasisMatrix(alg.dim(0), [{0: Fraction(1)}])]
    records = []
    for n in range(1, D + 1):
        ech = Echelon(alg.dim(n))
        for g in gens:
            for r in spaces[n - g.degree].rows:
                p = alg.multiply(g.vector, g.degree, r, n - g.degree)
                if p:
                    ech.add(p)
        cand = candidates.get(n, [])
        new = complement(ech, [v for v, _ in cand], alg.dim(n))
        for v in new.rows:
            origin = next((o for w, o in cand if w and not ech.contains(w)), "combined")
            gens.append(RelFreeGenerator(n, v, origin))
            ech.add(v)
        spaces.append(BasisMatrix._from_echelon(ech))
        ker = der.kernel(n)
        if not all(ker.contains(r) for r in spaces[n].rows):
            raise InternalConsistencyError(f"degree {n}: a generated element is not a constant")
        oracle = kernel_dim_oracle(ctx, n) + sum(
            module_kernel_oracle(mc, n - k) for k, mc in layer_mcs.items() if n - k >= 0
        )
        records.append(DegreeRecord(n, oracle, ker.dim, new.dim, spaces[n].dim))

    report = RelFreeReport(spec, gens, D, n0, records)
    report.ring_generators = len(ring.generators)
    report.layer_generators = layer_counts
    for n in range(D + 1):
        report.tideal_dims[n] = alg.tideal_component(n).dim
        report.quotient_dims[n] = alg.dim(n)
        report.proper_dims[n] = alg.proper_component(n).dim
        report.filtration[n] = [alg.layer(k, n).dim for k in range(0, n0 + 2)]
    report.mixed = [alg.mixed_basis_check(n) for n in range(D + 1)]
    report._alg = alg  # type: ignore[attr-defined]
    report._der = der  # type: ignore[attr-defined]
    return report


def verify_relfree_generation(gens: Sequence[NcPoly], spec: VarietySpec, delta, max_degree: int) -> list[GenerationCheck]:
    """Per degree: does the subalgebra generated by ``gens`` equal ker delta on F_n?"""
    from .kernel import NotConstantError

    alg = RelFreeAlgebra(spec)
    der = RelFreeDerivation(alg, delta)
    tagged = []
    for g in gens:
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise ValueError(f"generator {g.to_text()} is not homogeneous")
        n = g.degree()
        v = alg.normal_form(g, n)
        img = der.apply(v, n)
        if img:
            raise NotConstantError(g, alg.to_nc(img, n), f"{g.to_text()} is not a constant: delta = {alg.to_nc(img, n).to_text()}")
        tagged.append((v, n))
    spaces = subalgebra_spaces(alg, tagged, max_degree)
    return [GenerationCheck(n, spaces[n].dim, der.kernel(n).dim) for n in range(1, max_degree + 1)]


def expected_quotient_dim(spec: VarietySpec, alg: RelFreeAlgebra, n: int) -> int:
    """dim F_n predicted by the mixed basis: sum_k dim K[X]_{n-k} * dim B^(k)."""
    m = spec.m
    return sum(comb(n - k + m - 1, m - 1) * alg.proper_component(k).dim for k in range(n + 1) if k != 1)


@dataclass
class RelFreeComponent:
    n: int
    words: list[tuple[int, ...]]
    tideal: BasisMatrix
    normal_words: list[tuple[int, ...]]

    @property
    def dim(self) -> int:
        return len(self.normal_words)


def tideal_component(spec: VarietySpec, n: int, alg: RelFreeAlgebra | None = None) -> BasisMatrix:
    if n < 0:
        raise ValueError("degree must be non-negative")
    return (alg or RelFreeAlgebra(spec)).tideal_component(n)


def relfree_component(spec: VarietySpec, n: int, alg: RelFreeAlgebra | None = None) -> RelFreeComponent:
    if n < 0:
        raise ValueError("degree must be non-negative")
    alg = alg or RelFreeAlgebra(spec)
    return RelFreeComponent(n, alg.words(n), alg.tideal_component(n), alg.normal_words(n))


def proper_component(spec: VarietySpec, k: int, alg: RelFreeAlgebra | None = None) -> ProperSpace:
    if k < 0:
        raise ValueError("degree must be non-negative")
    return (alg or RelFreeAlgebra(spec)).proper_component(k)


def mixed_basis_check(spec: VarietySpec, n: int, alg: RelFreeAlgebra | None = None) -> MixedCheck:
    return (alg or RelFreeAlgebra(spec)).mixed_basis_check(n)


def in_tideal(spec: VarietySpec, p: NcPoly, alg: RelFreeAlgebra | None = None) -> bool:
    """Membership of a polynomial in the T-ideal, degree by degree."""
    alg = alg or RelFreeAlgebra(spec)
    if p.m != spec.m:
        raise ValueError(f"polynomial has {p.m} letters, variety has {spec.m}")
    by_deg: dict = {}
    for w, c in p.terms.items():
        by_deg.setdefault(len(w), {})[w] = c
    return all(not alg.reduce_words(t, n) for n, t in by_deg.items())
