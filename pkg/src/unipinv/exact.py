"""Exact rational scalars and polynomial arithmetic.

Scalars are :class:`fractions.Fraction` throughout.  Two polynomial types are
provided: :class:`CommPoly` (commutative, keyed by exponent vectors) and
:class:`NcPoly` (free associative algebra, keyed by words over ``1..m``).

Canonical term order, used both for printing and for the column order of
every graded component: higher degree first, then ascending exponent vector
(resp. ascending word).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    if not _RATIONAL.fullmatch(text.strip()):
        raise ValueError(f"malformed rational {text!r} (expected p or p/q)")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(x)


def _coeff_prefix(c: Fraction, first: bool) -> tuple[str, str]:
    sign = "-" if c < 0 else "+"
    a = -c if c < 0 else c
    if first:
        sign = "-" if c < 0 else ""
    return sign, ("" if a == 1 else str(a))


def _join_terms(parts: list[tuple[Fraction, str]]) -> str:
    if not parts:
        return "0"
    out = []
    for i, (c, mono) in enumerate(parts):
        sign, mag = _coeff_prefix(c, i == 0)
        if not mono:
            body = str(-c if c < 0 else c)
        elif mag:
            body = f"{mag}*{mono}"
        else:
            body = mono
        if i == 0:
            out.append(f"{sign}{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def comm_key(exp: tuple[int, ...], degrees: Sequence[int] | None = None):
    deg = sum(exp) if degrees is None else sum(e * g for e, g in zip(exp, degrees))
    return (-deg, exp)


def word_key(word: tuple[int, ...]):
    return (-len(word), word)


class CommPoly:
    """Multivariate commutative polynomial over Q in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "CommPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars: int) -> "CommPoly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, c, nvars: int) -> "CommPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "CommPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): ONE})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "CommPoly":
        return cls(len(exp), {tuple(exp): coeff})

    def _check(self, other: "CommPoly"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "CommPoly":
        if isinstance(other, CommPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CommPoly.const(other, self.nvars)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CommPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CommPoly":
        c = Fraction(c)
        if not c:
            return CommPoly.zero(self.nvars)
        return CommPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return CommPoly._raw(self.nvars, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = CommPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CommPoly.const(other, self.nvars)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def degree(self, degrees: Sequence[int] | None = None) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if degrees is None:
            return max(sum(e) for e in self.terms)
        return max(sum(a * g for a, g in zip(e, degrees)) for e in self.terms)

    def is_homogeneous(self, degrees: Sequence[int] | None = None) -> bool:
        if degrees is None:
            return len({sum(e) for e in self.terms}) <= 1
        return len({sum(a * g for a, g in zip(e, degrees)) for e in self.terms}) <= 1

    def sorted_terms(self, degrees=None) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: comm_key(t[0], degrees))

    def substitute(self, images: Sequence["CommPoly"]) -> "CommPoly":
        """Replace variable i by ``images[i]`` (all images share one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return self
        n = images[0].nvars
        out = CommPoly.zero(n)
        cache: dict[tuple[int, int], CommPoly] = {}
        for e, c in self.terms.items():
            term = CommPoly.const(c, n)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def to_text(self, names: Sequence[str] | None = None, degrees=None) -> str:
        if names is None:
            names = [f"y{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms(degrees):
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            parts.append((c, "*".join(factors)))
        return _join_terms(parts)

    def __repr__(self):
        return f"CommPoly({self.to_text()})"


class NcPoly:
    """Element of the free associative algebra on letters ``1..m``."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[Sequence[int], object] | None = None):
        self.m = m
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                if any(not 1 <= a <= m for a in w):
                    raise ValueError(f"word {w} uses letters outside 1..{m}")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    v = clean.get(w, ZERO) + c
                    if v:
                        clean[w] = v
                    else:
                        clean.pop(w, None)
        self.terms = clean

    @classmethod
    def _raw(cls, m: int, terms: dict) -> "NcPoly":
        p = cls.__new__(cls)
        p.m = m
        p.terms = terms
        return p

    @classmethod
    def zero(cls, m: int) -> "NcPoly":
        return cls._raw(m, {})

    @classmethod
    def const(cls, c, m: int) -> "NcPoly":
        return cls(m, {(): c})

    @classmethod
    def letter(cls, i: int, m: int) -> "NcPoly":
        if not 1 <= i <= m:
            raise ValueError(f"letter {i} outside 1..{m}")
        return cls._raw(m, {(i,): ONE})

    @classmethod
    def word(cls, w: Sequence[int], m: int, coeff=1) -> "NcPoly":
        return cls(m, {tuple(w): coeff})

    def _coerce(self, other):
        if isinstance(other, NcPoly):
            if other.m != self.m:
                raise ValueError(f"alphabet mismatch: {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return NcPoly.const(other, self.m)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, ZERO) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NcPoly._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._raw(self.m, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NcPoly":
        c = Fraction(c)
        if not c:
            return NcPoly.zero(self.m)
        return NcPoly._raw(self.m, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w, ZERO) + c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NcPoly._raw(self.m, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = NcPoly.const(1, self.m)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NcPoly.const(other, self.m)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def substitute(self, images: Sequence["NcPoly"]) -> "NcPoly":
        """Algebra endomorphism sending letter i to ``images[i-1]``."""
        if len(images) != self.m:
            raise ValueError("need one image per letter")
        m2 = images[0].m if images else self.m
        out = NcPoly.zero(m2)
        for w, c in self.terms.items():
            term = NcPoly.const(c, m2)
            for a in w:
                term = term * images[a - 1]
            out = out + term
        return out

    def to_text(self, prefix: str = "x") -> str:
        parts = [(c, "*".join(f"{prefix}{a}" for a in w)) for w, c in self.sorted_terms()]
        return _join_terms(parts)

    def __repr__(self):
        return f"NcPoly({self.to_text()})"


def commutator(*args: NcPoly) -> NcPoly:
    """Left-normed commutator ``[a, b, c, ...] = [[a, b], c, ...]``."""
    if len(args) < 2:
        raise ValueError("a commutator needs at least two arguments")
    out = args[0]
    for b in args[1:]:
        out = out * b - b * out
    return out


# -- text form parsing -----------------------------------------------------

_POWER = re.compile(r"(.+?)\^(\d+)")


def _split_top_level(text: str, seps: str) -> list[tuple[str, str]]:
    """Split ``text`` on characters in ``seps`` outside brackets.

    Returns ``(separator, chunk)`` pairs; the first separator is ``""``.
    """
    out = []
    depth = 0
    cur = []
    sep = ""
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in seps:
            # a leading sign or a sign right after '^' / '/' is not a separator
            prev = "".join(cur).strip()
            if ch in "+-" and (not prev or prev[-1] in "^/*"):
                cur.append(ch)
                continue
            out.append((sep, "".join(cur)))
            sep = ch
            cur = []
            continue
        cur.append(ch)
    out.append((sep, "".join(cur)))
    return out


def _parse_terms(text: str) -> list[tuple[Fraction, list[tuple[str, int]]]]:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text == "0":
        return []
    terms = []
    for sep, chunk in _split_top_level(text, "+-"):
        chunk = chunk.strip()
        if not chunk:
            if sep == "":
                continue
            raise ValueError(f"malformed polynomial text {text!r}")
        sign = -1 if sep == "-" else 1
        if chunk.startswith("-"):
            sign = -sign
            chunk = chunk[1:].strip()
        elif chunk.startswith("+"):
            chunk = chunk[1:].strip()
        coeff = Fraction(sign)
        factors = []
        for _, f in _split_top_level(chunk, "*"):
            f = f.strip()
            if not f:
                raise ValueError(f"malformed term {chunk!r}")
            if re.fullmatch(r"\d+(/\d+)?", f):
                coeff *= Fraction(f)
                continue
            mt = _POWER.fullmatch(f)
            if mt:
                factors.append((mt.group(1).strip(), int(mt.group(2))))
            else:
                factors.append((f, 1))
        terms.append((coeff, factors))
    return terms


def parse_comm(text: str, names: Sequence[str]) -> CommPoly:
    """Parse the canonical text form, e.g. ``"y1^2 - 2*y0*y2"``."""
    index = {n: i for i, n in enumerate(names)}
    nv = len(names)
    out: dict = {}
    for coeff, factors in _parse_terms(text):
        e = [0] * nv
        for name, k in factors:
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            e[index[name]] += k
        e = tuple(e)
        out[e] = out.get(e, ZERO) + coeff
    return CommPoly(nv, out)


def parse_nc(text: str, m: int, prefix: str = "x") -> NcPoly:
    """Parse ``"x1*x2 - x2*x1"``; ``^`` is allowed as repeated letters."""
    out: dict = {}
    pat = re.compile(re.escape(prefix) + r"(\d+)")
    for coeff, factors in _parse_terms(text):
        w: list[int] = []
        for name, k in factors:
            mt = pat.fullmatch(name)
            if not mt:
                raise ValueError(f"unknown letter {name!r}")
            w.extend([int(mt.group(1))] * k)
        w = tuple(w)
        out[w] = out.get(w, ZERO) + coeff
    return NcPoly(m, out)


def monomials_of_degree(degrees: tuple[int, ...], n: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree ``n`` in canonical order."""
    nv = len(degrees)
    out: list[tuple[int, ...]] = []

    def rec(i, left, acc):
        if i == nv:
            if left == 0:
                out.append(tuple(acc))
            return
        g = degrees[i]
        for k in range(left // g + 1):
            acc.append(k)
            rec(i + 1, left - k * g, acc)
            acc.pop()

    if nv == 0:
        return [()] if n == 0 else []
    rec(0, n, [])
    out.sort()
    return out


def words_of_length(m: int, n: int) -> list[tuple[int, ...]]:
    from itertools import product

    return [tuple(w) for w in product(range(1, m + 1), repeat=n)]


def dense_vector(v: Mapping[int, Fraction], n: int) -> list[Fraction]:
    out = [ZERO] * n
    for j, c in v.items():
        out[j] = c
    return out


def sparse_vector(values: Iterable) -> dict[int, Fraction]:
    return {j: Fraction(c) for j, c in enumerate(values) if c}
