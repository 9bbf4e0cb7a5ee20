"""Exact sparse multivariate polynomials over Q.

A monomial is packed into one Python int.  Variable ``k`` of a ring with
field width ``W`` occupies bits ``[W*k, W*k+W)``; the total degree sits in
the field above the last variable.  Integer comparison of packed monomials is
therefore graded-lex order, with later variables weighing more, and monomial
multiplication is integer addition.  The top bit of each field is a guard bit
kept clear so that divisibility tests can be done with one subtraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple

from gmpy2 import mpq

from . import kernels as K

_KIND_RANK = {"hbar": 0, "gamma": 1, "root": 2, "beta": 3, "spectral": 4, "mode": 5, "tau": 6}


@dataclass(frozen=True)
class VarId:
    """Variable label.  ``kind`` is hbar, gamma, root, beta, spectral, mode or tau."""

    kind: str
    idx: tuple = ()

    def sort_key(self):
        return (_KIND_RANK[self.kind], tuple(str(x) if isinstance(x, str) else x for x in self.idx))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "hbar":
            return "h"
        if self.kind == "spectral":
            return self.idx[0]
        if self.kind == "gamma":
            return "g%d_%d" % self.idx
        if self.kind == "root":
            return "r%d_%d" % self.idx
        if self.kind == "beta":
            return "b%d_%d" % self.idx
        if self.kind == "mode":
            i, j, r = self.idx
            return "g%d%d^%d" % (i, j, r)
        if self.kind == "tau":
            i, j, r = self.idx
            return "t%d%d^%d" % (i, j, r)
        return "%s%s" % (self.kind, self.idx)


HBAR = VarId("hbar")


def gamma(i, k):
    return VarId("gamma", (i, k))


def root(i, k):
    return VarId("root", (i, k))


def spectral(name):
    return VarId("spectral", (name,))


def beta(i, k):
    return VarId("beta", (i, k))


def Q(x, d=1):
    return mpq(x, d)


class Ring:
    """Fixed variable set and packing layout shared by a family of polynomials."""

    def __init__(self, variables: Iterable, width: int = 10):
        vs = sorted(set(variables))
        self.vars: Tuple = tuple(vs)
        self.index: Dict = {v: i for i, v in enumerate(vs)}
        self.n = len(vs)
        self.W = width
        self.mask = (1 << width) - 1
        self.dshift = width * self.n
        self.guard = sum(1 << (width * k + width - 1) for k in range(self.n + 1))
        self.maxdeg = (1 << (width - 1)) - 1
        self._pow_cache: Dict = {}
        self._sub_cache: Dict = {}

    def __repr__(self):
        return "Ring(%s)" % ", ".join(str(v) for v in self.vars)

    def mono(self, exps: Mapping[int, int]) -> int:
        m = 0
        d = 0
        for i, e in exps.items():
            if e:
                m |= e << (self.W * i)
                d += e
        return m | (d << self.dshift)

    def var_mono(self, i: int, e: int = 1) -> int:
        return (e << (self.W * i)) + (e << self.dshift)

    def exps(self, m: int):
        W, mask = self.W, self.mask
        return [(m >> (W * k)) & mask for k in range(self.n)]

    def exp(self, m: int, i: int) -> int:
        return (m >> (self.W * i)) & self.mask

    def degree(self, m: int) -> int:
        return m >> self.dshift

    def divides(self, a: int, b: int) -> bool:
        """True when monomial a divides monomial b."""
        g = self.guard
        return ((b | g) - a) & g == g

    def has(self, v) -> bool:
        return v in self.index

    # constructors
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {0: mpq(1)})

    def const(self, c) -> "MultiPoly":
        c = mpq(c)
        return MultiPoly(self, {0: c} if c else {})

    def var(self, v) -> "MultiPoly":
        return MultiPoly(self, {self.var_mono(self.index[v]): mpq(1)})

    def from_terms(self, terms: Mapping[Tuple, object]) -> "MultiPoly":
        """Build from {(exponent per variable in ring order): coefficient}."""
        out = {}
        for ex, c in terms.items():
            c = mpq(c)
            if c:
                out[self.mono(dict(enumerate(ex)))] = c
        return MultiPoly(self, out)


class MultiPoly:
    __slots__ = ("ring", "t", "_h")

    def __init__(self, ring: Ring, terms: Dict[int, object]):
        self.ring = ring
        self.t = terms
        self._h = None

    # basic protocol
    def __bool__(self):
        return bool(self.t)

    def is_zero(self) -> bool:
        return not self.t

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.t == other.t
        if not self.t:
            return other == 0
        return len(self.t) == 1 and self.t.get(0) == other

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self.t.items()))
        return self._h

    def __len__(self):
        return len(self.t)

    def is_const(self) -> bool:
        return not self.t or (len(self.t) == 1 and 0 in self.t)

    def const_value(self):
        return self.t.get(0, mpq(0))

    def total_degree(self) -> int:
        if not self.t:
            return -1
        return max(self.t) >> self.ring.dshift

    def leading(self):
        m = max(self.t)
        return m, self.t[m]

    def variables(self):
        R = self.ring
        seen = 0
        for m in self.t:
            seen |= m
        return [i for i in range(R.n) if (seen >> (R.W * i)) & R.mask]

    def degree_in(self, i: int) -> int:
        if not self.t:
            return -1
        R = self.ring
        sh, mask = R.W * i, R.mask
        return max((m >> sh) & mask for m in self.t)

    # arithmetic
    def _coerce(self, o):
        if isinstance(o, MultiPoly):
            return o.t
        try:
            o = mpq(o)
        except TypeError:
            return None
        return {0: o} if o else {}

    def __add__(self, o):
        t = self._coerce(o)
        return NotImplemented if t is None else MultiPoly(self.ring, K.padd(self.t, t))

    __radd__ = __add__

    def __sub__(self, o):
        t = self._coerce(o)
        return NotImplemented if t is None else MultiPoly(self.ring, K.psub(self.t, t))

    def __rsub__(self, o):
        t = self._coerce(o)
        return NotImplemented if t is None else MultiPoly(self.ring, K.psub(t, self.t))

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.t.items()})

    def __mul__(self, o):
        if isinstance(o, MultiPoly):
            return MultiPoly(self.ring, K.pmul(self.t, o.t))
        try:
            o = mpq(o)
        except TypeError:
            return NotImplemented
        return MultiPoly(self.ring, K.pscale(self.t, o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        try:
            o = mpq(o)
        except TypeError:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("zero divisor")
        return MultiPoly(self.ring, K.pscale(self.t, 1 / o))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def cached_pow(self, e: int) -> "MultiPoly":
        if e == 1:
            return self
        key = (self, e)
        cache = self.ring._pow_cache
        p = cache.get(key)
        if p is None:
            p = self.cached_pow(e - 1) * self
            cache[key] = p
        return p

    # structure in one variable
    def coeffs_in(self, i: int) -> Dict[int, "MultiPoly"]:
        R = self.ring
        sh, mask, dsh = R.W * i, R.mask, R.dshift
        out: Dict[int, dict] = {}
        for m, c in self.t.items():
            e = (m >> sh) & mask
            if e:
                m = m - (e << sh) - (e << dsh)
            out.setdefault(e, {})[m] = c
        return {e: MultiPoly(R, d) for e, d in out.items()}

    @staticmethod
    def from_coeffs(ring: Ring, i: int, coeffs: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        acc: dict = {}
        for e, p in coeffs.items():
            if p.t:
                K.paccum(acc, p.t, ring.var_mono(i, e) if e else 0, mpq(1))
        return MultiPoly(ring, {m: c for m, c in acc.items() if c})

    def subst(self, mapping: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        """Simultaneous substitution var_index -> polynomial."""
        if not self.t or not mapping:
            return self
        R = self.ring
        W, mask, dsh = R.W, R.mask, R.dshift
        idxs = [i for i in mapping]
        groups: Dict[tuple, dict] = {}
        for m, c in self.t.items():
            es = []
            rest = m
            tot = 0
            for i in idxs:
                e = (m >> (W * i)) & mask
                es.append(e)
                if e:
                    rest -= e << (W * i)
                    tot += e
            if tot:
                rest -= tot << dsh
            groups.setdefault(tuple(es), {})[rest] = c
        acc: dict = {}
        one = mpq(1)
        for es, rest in groups.items():
            fac = None
            for i, e in zip(idxs, es):
                if e:
                    p = mapping[i].cached_pow(e).t
                    fac = p if fac is None else K.pmul(fac, p)
            if fac is None:
                K.paccum(acc, rest, 0, one)
            else:
                prod = K.pmul(rest, fac)
                K.paccum(acc, prod, 0, one)
        return MultiPoly(R, {m: c for m, c in acc.items() if c})

    def derivative(self, i: int) -> "MultiPoly":
        R = self.ring
        sh, mask = R.W * i, R.mask
        step = R.var_mono(i)
        out = {}
        for m, c in self.t.items():
            e = (m >> sh) & mask
            if e:
                out[m - step] = c * e
        return MultiPoly(R, out)

    def leading_var(self) -> int:
        """Index of the heaviest variable occurring in the leading monomial."""
        m, _ = self.leading()
        ex = self.ring.exps(m)
        for i in range(self.ring.n - 1, -1, -1):
            if ex[i]:
                return i
        return -1

    def div_linear(self, atom: "MultiPoly") -> Optional["MultiPoly"]:
        """Exact quotient by a monic linear atom x + L, or None if it does not divide."""
        R = self.ring
        x = atom.leading_var()
        lt = R.var_mono(x)
        if atom.t.get(lt) != 1:
            return None
        L = MultiPoly(R, {m: c for m, c in atom.t.items() if m != lt})
        cs = self.coeffs_in(x)
        d = max(cs)
        if d == 0:
            return None
        q: Dict[int, MultiPoly] = {}
        carry = cs[d]
        for j in range(d - 1, -1, -1):
            q[j] = carry
            nxt = cs.get(j)
            carry = (nxt - L * carry) if nxt is not None else -(L * carry)
        if carry.t:
            return None
        return MultiPoly.from_coeffs(R, x, q)

    def content_normalize(self):
        """Split off the leading coefficient: returns (c, monic) with self = c * monic."""
        m, c = self.leading()
        if c == 1:
            return mpq(1), self
        inv = 1 / c
        return c, MultiPoly(self.ring, {k: v * inv for k, v in self.t.items()})

    def evaluate(self, values: Mapping[int, object]):
        """Exact evaluation at rational values for every variable that occurs."""
        R = self.ring
        total = mpq(0)
        for m, c in self.t.items():
            v = c
            for i, e in enumerate(R.exps(m)):
                if e:
                    v = v * values[i] ** e
            total += v
        return total

    def __repr__(self):
        return "MultiPoly(%s)" % self.to_str()

    def to_str(self) -> str:
        if not self.t:
            return "0"
        R = self.ring
        parts = []
        for m in sorted(self.t, reverse=True):
            c = self.t[m]
            ex = R.exps(m)
            mon = "*".join(
                (str(R.vars[i]) if e == 1 else "%s^%d" % (R.vars[i], e))
                for i, e in enumerate(ex) if e
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append("%s*%s" % (c, mon))
        return " + ".join(parts).replace("+ -", "- ")
