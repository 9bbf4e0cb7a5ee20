"""Normal-form arithmetic in the localized difference-operator algebra.

An element is a finite sum ``f_e(γ, ħ, roots, spectral) β^e`` with the
rational coefficient written to the LEFT of the shift monomial.  The only
commutation rule is ``β^e f(γ) = f(γ + e ħ) β^e``; spectral variables,
roots and ħ are central.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .poly import HBAR, MultiPoly, Ring, VarId, gamma
from .ratfunc import RatFunc, laurent_coefficient, principal_part

Exps = Tuple[int, ...]


class DiffAlgebra:
    """Ring plus the ordered list of shift slots (i, k)."""

    def __init__(self, ring: Ring, slots: Sequence[Tuple[int, int]]):
        self.ring = ring
        self.slots = tuple(slots)
        self.slot_index = {s: a for a, s in enumerate(self.slots)}
        self.gidx = [ring.index[gamma(i, k)] for (i, k) in self.slots]
        self.hbar = ring.var(HBAR)
        self.zero_exps: Exps = (0,) * len(self.slots)
        self._shift_maps: Dict[Exps, dict] = {}

    def shift_map(self, e: Exps) -> dict:
        mp = self._shift_maps.get(e)
        if mp is None:
            R = self.ring
            h = self.hbar
            mp = {}
            for a, k in enumerate(e):
                if k:
                    gi = self.gidx[a]
                    mp[gi] = R.var(R.vars[gi]) + h * k
            self._shift_maps[e] = mp
        return mp

    def unit_exps(self, i: int, k: int, power: int = 1) -> Exps:
        e = [0] * len(self.slots)
        e[self.slot_index[(i, k)]] = power
        return tuple(e)

    # constructors
    def zero(self) -> "DiffOp":
        return DiffOp(self, {})

    def one(self) -> "DiffOp":
        return self.scalar(RatFunc.const(self.ring, 1))

    def scalar(self, f) -> "DiffOp":
        if not isinstance(f, RatFunc):
            if isinstance(f, MultiPoly):
                f = RatFunc(self.ring, f)
            else:
                f = RatFunc.const(self.ring, f)
        return DiffOp(self, {self.zero_exps: f} if f.num.t else {})

    def beta(self, i: int, k: int, power: int = 1) -> "DiffOp":
        return DiffOp(self, {self.unit_exps(i, k, power): RatFunc.const(self.ring, 1)})

    def monomial(self, f: RatFunc, e: Exps) -> "DiffOp":
        return DiffOp(self, {tuple(e): f} if f.num.t else {})


def _sum(fs: List[RatFunc]) -> RatFunc:
    """Pairwise summation keeps intermediate numerators balanced."""
    while len(fs) > 1:
        nxt = []
        for a in range(0, len(fs) - 1, 2):
            nxt.append(fs[a] + fs[a + 1])
        if len(fs) % 2:
            nxt.append(fs[-1])
        fs = nxt
    return fs[0]


class DiffOp:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: DiffAlgebra, terms: Dict[Exps, RatFunc]):
        self.alg = alg
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def support(self):
        return sorted(self.terms)

    def coeff(self, e: Exps) -> RatFunc:
        f = self.terms.get(tuple(e))
        return f if f is not None else RatFunc.const(self.alg.ring, 0)

    def _lift(self, o) -> "DiffOp":
        if isinstance(o, DiffOp):
            return o
        return self.alg.scalar(o)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for e, f in o.terms.items():
            g = out.get(e)
            if g is None:
                out[e] = f
            else:
                s = g + f
                if s.num.t:
                    out[e] = s
                else:
                    del out[e]
        return DiffOp(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.alg, {e: -f for e, f in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) + (-self)

    def __mul__(self, o):
        if isinstance(o, DiffOp):
            return op_mul(self, o)
        o = self._lift(o)
        return op_mul(self, o)

    def __rmul__(self, o):
        return op_mul(self._lift(o), self)

    def scale(self, f: RatFunc) -> "DiffOp":
        """Left multiplication by a coefficient (no shift needed on the left)."""
        out = {}
        for e, g in self.terms.items():
            p = f * g
            if p.num.t:
                out[e] = p
        return DiffOp(self.alg, out)

    def rscale(self, f: RatFunc) -> "DiffOp":
        """Right multiplication by a coefficient: x * f."""
        A = self.alg
        out = {}
        for e, g in self.terms.items():
            p = g * f.subst(A.shift_map(e))
            if p.num.t:
                out[e] = p
        return DiffOp(A, out)

    def map_coeffs(self, fn) -> "DiffOp":
        out = {}
        for e, f in self.terms.items():
            g = fn(f)
            if g.num.t:
                out[e] = g
        return DiffOp(self.alg, out)

    def subst(self, mapping: Mapping[VarId, MultiPoly]) -> "DiffOp":
        """Substitute central variables (spectral, roots, ħ) in every coefficient."""
        R = self.alg.ring
        mp = {R.index[v]: p for v, p in mapping.items() if v in R.index}
        for v in mapping:
            if v.kind == "gamma":
                raise ValueError("gamma is not central; substitute through op_mul")
        return self.map_coeffs(lambda f: f.subst(mp))

    def reduce(self) -> "DiffOp":
        return self.map_coeffs(lambda f: f.reduce())

    def __eq__(self, o):
        if not isinstance(o, DiffOp):
            o = self._lift(o)
        return (self - o).is_zero()

    __hash__ = None

    def first_nonzero(self):
        """Deterministic witness: smallest exponent vector and its numerator."""
        if not self.terms:
            return None
        e = min(self.terms)
        return e, self.terms[e]

    def __repr__(self):
        if not self.terms:
            return "DiffOp(0)"
        parts = []
        for e in sorted(self.terms):
            parts.append("%s*beta%s" % (self.terms[e].to_str(), list(e)))
        return "DiffOp(" + " + ".join(parts) + ")"


# --------------------------------------------------------------------------
# contract operations

def op_mul(x: DiffOp, y: DiffOp) -> DiffOp:
    A = x.alg
    acc: Dict[Exps, List[RatFunc]] = {}
    for ex, fx in x.terms.items():
        mp = A.shift_map(ex) if any(ex) else None
        for ey, fy in y.terms.items():
            g = fy.subst(mp) if mp else fy
            p = fx * g
            if not p.num.t:
                continue
            e = tuple(a + b for a, b in zip(ex, ey))
            acc.setdefault(e, []).append(p)
    out = {}
    for e, fs in acc.items():
        s = _sum(fs)
        if s.num.t:
            out[e] = s
    return DiffOp(A, out)


def op_commutator(x: DiffOp, y: DiffOp, anti: bool = False) -> DiffOp:
    A = x.alg
    acc: Dict[Exps, List[RatFunc]] = {}
    sign = 1 if anti else -1
    for a, b, s in ((x, y, 1), (y, x, sign)):
        for ea, fa in a.terms.items():
            mp = A.shift_map(ea) if any(ea) else None
            for eb, fb in b.terms.items():
                g = fb.subst(mp) if mp else fb
                p = fa * g
                if not p.num.t:
                    continue
                if s < 0:
                    p = -p
                e = tuple(i + j for i, j in zip(ea, eb))
                acc.setdefault(e, []).append(p)
    out = {}
    for e, fs in acc.items():
        s = _sum(fs)
        if s.num.t:
            out[e] = s
    return DiffOp(A, out)


def current_mode(x: DiffOp, var: VarId, r: int) -> DiffOp:
    return x.map_coeffs(lambda f: laurent_coefficient(f, var, r))


def op_principal_part(x: DiffOp, var: VarId) -> DiffOp:
    return x.map_coeffs(lambda f: principal_part(f, var))


def op_sym(x: DiffOp, a: VarId, b: VarId) -> DiffOp:
    R = x.alg.ring
    pa, pb = R.var(a), R.var(b)
    return x + x.subst({a: pb, b: pa})


def op_invert(x: DiffOp) -> DiffOp:
    A = x.alg
    if not x.terms:
        raise ZeroDivisionError("zero divisor")
    if set(x.terms) != {A.zero_exps}:
        raise ValueError("not invertible in normal form")
    return A.scalar(x.terms[A.zero_exps].inverse())


def op_sum(xs: Iterable[DiffOp], alg: DiffAlgebra) -> DiffOp:
    acc: Dict[Exps, List[RatFunc]] = {}
    for x in xs:
        for e, f in x.terms.items():
            acc.setdefault(e, []).append(f)
    out = {}
    for e, fs in acc.items():
        s = _sum(fs)
        if s.num.t:
            out[e] = s
    return DiffOp(alg, out)
