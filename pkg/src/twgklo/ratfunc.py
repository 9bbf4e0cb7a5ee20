"""Exact rational functions in factored form.

A value is ``num * prod(atom ** e)`` with ``num`` an expanded polynomial and
each atom a monic nonconstant polynomial (monic in its graded-lex leading
term).  Exponents are nonzero integers of either sign.  Nothing here relies
on atoms being irreducible or coprime: sums are formed over the pointwise
minimum of exponents and zero-testing only looks at ``num``.  Trial division
by linear atoms is available for size control.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Tuple

from gmpy2 import mpq

from .poly import MultiPoly, Ring, VarId


class ZeroDivisor(ZeroDivisionError):
    pass


def _merge(fa: Mapping, fb: Mapping, sign: int = 1) -> dict:
    out = dict(fa)
    for a, e in fb.items():
        v = out.get(a, 0) + sign * e
        if v:
            out[a] = v
        else:
            out.pop(a, None)
    return out


class RatFunc:
    __slots__ = ("ring", "num", "fac")

    def __init__(self, ring: Ring, num: MultiPoly, fac: Optional[dict] = None):
        self.ring = ring
        self.num = num
        self.fac = fac if (fac and num.t) else {}

    # constructors
    @classmethod
    def const(cls, ring: Ring, c) -> "RatFunc":
        return cls(ring, ring.const(c))

    @classmethod
    def poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p.ring, p)

    @classmethod
    def var(cls, ring: Ring, v: VarId) -> "RatFunc":
        return cls.from_factors(ring, 1, [(ring.var(v), 1)])

    @classmethod
    def from_factors(cls, ring: Ring, c, factors: Iterable[Tuple[MultiPoly, int]]) -> "RatFunc":
        """c * prod(p ** e); each p is normalized into an atom."""
        c = mpq(c)
        fac: Dict[MultiPoly, int] = {}
        for p, e in factors:
            if not e:
                continue
            if p.is_zero():
                if e < 0:
                    raise ZeroDivisor("zero divisor")
                return cls(ring, ring.zero())
            if p.is_const():
                c *= p.const_value() ** e
                continue
            lc, a = p.content_normalize()
            c *= lc ** e
            v = fac.get(a, 0) + e
            if v:
                fac[a] = v
            else:
                fac.pop(a)
        return cls(ring, ring.const(c), fac)

    # predicates
    def is_zero(self) -> bool:
        return not self.num.t

    def __bool__(self):
        return bool(self.num.t)

    def is_polynomial(self) -> bool:
        return all(e > 0 for e in self.fac.values())

    def den_atoms(self):
        return [a for a, e in self.fac.items() if e < 0]

    # conversions
    def numerator(self) -> MultiPoly:
        """num times the positive-exponent atoms, expanded."""
        p = self.num
        for a, e in self.fac.items():
            if e > 0:
                p = p * a.cached_pow(e)
        return p

    def denominator(self) -> MultiPoly:
        p = self.ring.one()
        for a, e in self.fac.items():
            if e < 0:
                p = p * a.cached_pow(-e)
        return p

    def expand(self) -> Tuple[MultiPoly, MultiPoly]:
        return self.numerator(), self.denominator()

    # arithmetic
    def _lift(self, o) -> "RatFunc":
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, MultiPoly):
            return RatFunc(o.ring, o)
        return RatFunc(self.ring, self.ring.const(o))

    def __neg__(self):
        return RatFunc(self.ring, -self.num, self.fac)

    def __mul__(self, o):
        if not isinstance(o, (RatFunc, MultiPoly)):
            return RatFunc(self.ring, self.num * o, self.fac)
        o = self._lift(o)
        num = self.num * o.num
        if not num.t:
            return RatFunc(self.ring, num)
        return RatFunc(self.ring, num, _merge(self.fac, o.fac))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num.t:
            raise ZeroDivisor("zero divisor")
        fac = {a: -e for a, e in self.fac.items()}
        if self.num.is_const():
            return RatFunc(self.ring, self.ring.const(1 / self.num.const_value()), fac)
        lc, a = self.num.content_normalize()
        fac[a] = fac.get(a, 0) - 1
        if not fac[a]:
            del fac[a]
        return RatFunc(self.ring, self.ring.const(1 / lc), fac)

    def __truediv__(self, o):
        if not isinstance(o, (RatFunc, MultiPoly)):
            o = mpq(o)
            if not o:
                raise ZeroDivisor("zero divisor")
            return RatFunc(self.ring, self.num * (1 / o), self.fac)
        o = self._lift(o)
        if o.is_zero():
            raise ZeroDivisor("zero divisor")
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __add__(self, o):
        o = self._lift(o)
        if not o.num.t:
            return self
        if not self.num.t:
            return o
        fa, fb = self.fac, o.fac
        if not fa and not fb:
            return RatFunc(self.ring, self.num + o.num)
        common = {}
        na = self.num
        nb = o.num
        for a in fa.keys() | fb.keys():
            ea = fa.get(a, 0)
            eb = fb.get(a, 0)
            m = ea if ea < eb else eb
            if m:
                common[a] = m
            if ea > m:
                na = na * a.cached_pow(ea - m)
            if eb > m:
                nb = nb * a.cached_pow(eb - m)
        num = na + nb
        if not num.t:
            return RatFunc(self.ring, num)
        return RatFunc(self.ring, num, common)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) + (-self)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.ring, self.num ** e, {a: k * e for a, k in self.fac.items()})

    def __eq__(self, o):
        if not isinstance(o, (RatFunc, MultiPoly, int, type(mpq(0)))):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    # simplification
    def reduce(self) -> "RatFunc":
        """Cancel linear denominator atoms that divide the numerator."""
        if not self.num.t:
            return self
        num = self.num
        fac = dict(self.fac)
        changed = False
        for a, e in list(fac.items()):
            if e >= 0 or a.total_degree() != 1:
                continue
            while e < 0:
                q = num.div_linear(a)
                if q is None:
                    break
                num = q
                e += 1
                changed = True
            if e:
                fac[a] = e
            else:
                del fac[a]
        if not changed:
            return self
        return RatFunc(self.ring, num, fac)

    # substitution
    def subst(self, mapping: Mapping[int, MultiPoly]) -> "RatFunc":
        """Simultaneous substitution of polynomials for variables (by index)."""
        if not self.num.t or not mapping:
            return self
        R = self.ring
        key = tuple(sorted((i, p) for i, p in mapping.items()))
        keyvars = set(mapping)
        num = self.num.subst(mapping)
        if not num.t:
            return RatFunc(R, num)
        c = mpq(1)
        fac: Dict[MultiPoly, int] = {}
        cache = R._sub_cache
        for a, e in self.fac.items():
            if keyvars.isdisjoint(a.variables()):
                fac[a] = fac.get(a, 0) + e
                continue
            hit = cache.get((a, key))
            if hit is None:
                p = a.subst(mapping)
                if p.is_zero():
                    hit = (mpq(0), None)
                elif p.is_const():
                    hit = (p.const_value(), None)
                else:
                    hit = p.content_normalize()
                cache[(a, key)] = hit
            lc, b = hit
            if not lc:
                if e < 0:
                    raise ZeroDivisor("substituted denominator vanishes")
                return RatFunc(R, R.zero())
            c *= lc ** e
            if b is not None:
                v = fac.get(b, 0) + e
                if v:
                    fac[b] = v
                else:
                    fac.pop(b)
        fac = {a: e for a, e in fac.items() if e}
        return RatFunc(R, num * c if c != 1 else num, fac)

    def involves(self, i: int) -> bool:
        if i in self.num.variables():
            return True
        return any(i in a.variables() for a in self.fac)

    def degree_in(self, i: int) -> int:
        """Degree in x_i at infinity (numerator degree minus denominator degree)."""
        d = max(self.num.degree_in(i), 0)
        for a, e in self.fac.items():
            d += e * max(a.degree_in(i), 0)
        return d

    def derivative(self, i: int) -> "RatFunc":
        """d/dx_i by the logarithmic-derivative rule on atoms."""
        R = self.ring
        out = RatFunc(R, self.num.derivative(i), self.fac)
        for a, e in self.fac.items():
            da = a.derivative(i)
            if da.t:
                out = out + RatFunc(R, self.num * da * e, _merge(self.fac, {a: -1}))
        return out

    def evaluate(self, values: Mapping[int, object]):
        v = self.num.evaluate(values)
        for a, e in self.fac.items():
            av = a.evaluate(values)
            if not av:
                raise ZeroDivisor("pole at evaluation point")
            v *= av ** e
        return v

    def __repr__(self):
        return "RatFunc(%s)" % self.to_str()

    def to_str(self) -> str:
        s = "(%s)" % self.num.to_str()
        for a, e in sorted(self.fac.items(), key=lambda kv: (kv[1], kv[0].to_str())):
            s += "*(%s)^%d" % (a.to_str(), e)
        return s


# --------------------------------------------------------------------------
# operations named in the public contract

def rf_arith(op: str, a: RatFunc, b: Optional[RatFunc] = None) -> RatFunc:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "div":
        return a / b
    raise ValueError("unknown op %r" % op)


def rf_is_zero(a: RatFunc) -> bool:
    return a.is_zero()


def shift_substitute(a: RatFunc, assignments) -> RatFunc:
    R = a.ring
    return a.subst({R.index[v]: p for v, p in assignments})


def _split(a: RatFunc, i: int):
    """a = C * N / D with C free of x_i, N and D polynomials (D factored as atoms)."""
    R = a.ring
    cfac = {}
    dfac = {}
    N = a.num
    for at, e in a.fac.items():
        if i in at.variables():
            if e > 0:
                N = N * at.cached_pow(e)
            else:
                dfac[at] = e
        else:
            cfac[at] = e
    C = RatFunc(R, R.one(), cfac)
    # N may still involve x_i in its free part; that is fine.
    return C, N, dfac


def principal_part(a: RatFunc, var: VarId) -> RatFunc:
    """a minus its polynomial part in ``var``."""
    R = a.ring
    if not a.num.t or var not in R.index:
        return RatFunc(R, R.zero())
    i = R.index[var]
    C, N, dfac = _split(a, i)
    if not dfac:
        return RatFunc(R, R.zero())
    D = R.one()
    for at, e in dfac.items():
        D = D * at.cached_pow(-e)
    dc = D.coeffs_in(i)
    q = max(dc)
    lc = dc[q]
    nc = N.coeffs_in(i)
    p = max(nc)
    if p < q:
        return a
    # pseudo-remainder of N by D in x_i
    scale_pow = 0
    rem = dict(nc)
    lc_const = lc.is_const()
    lc_inv = 1 / lc.const_value() if lc_const else None
    for deg in range(p, q - 1, -1):
        top = rem.pop(deg, None)
        if top is None or not top.t:
            continue
        if lc_const:
            f = top * lc_inv
        else:
            for k in list(rem):
                rem[k] = rem[k] * lc
            f = top
            scale_pow += 1
        for k, dk in dc.items():
            if k == q:
                continue
            j = deg - q + k
            prev = rem.get(j)
            sub = f * dk
            rem[j] = (prev - sub) if prev is not None else -sub
    Rm = MultiPoly.from_coeffs(R, i, rem)
    out = RatFunc(R, Rm, dict(dfac))
    if scale_pow:
        out = out / RatFunc(R, lc ** scale_pow)
    return C * out


def laurent_coefficient(a: RatFunc, var: VarId, r: int) -> RatFunc:
    """Coefficient of var^(-r) in the expansion of a at var = infinity."""
    R = a.ring
    if not a.num.t:
        return a
    if var not in R.index:
        return a if r == 0 else RatFunc(R, R.zero())
    i = R.index[var]
    if not a.involves(i):
        return a if r == 0 else RatFunc(R, R.zero())
    C, N, dfac = _split(a, i)
    D = R.one()
    for at, e in dfac.items():
        D = D * at.cached_pow(-e)
    nc = N.coeffs_in(i)
    dc = D.coeffs_in(i)
    p, q = max(nc), max(dc)
    k = p - q + r
    if k < 0:
        return RatFunc(R, R.zero())
    lc = RatFunc(R, dc[q])
    inv_lc = lc.inverse()
    cs = []
    for s in range(k + 1):
        acc = RatFunc(R, nc[p - s]) if (p - s) in nc else RatFunc(R, R.zero())
        for j in range(1, s + 1):
            dj = dc.get(q - j)
            if dj is not None and cs[s - j].num.t:
                acc = acc - cs[s - j] * dj
        cs.append(acc * inv_lc)
    return C * cs[k]
