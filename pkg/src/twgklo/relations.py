"""LHS − RHS builders for the defining relations of the twisted Yangian.

Each builder takes a ``GKLO`` image set and node indices and returns a
``DiffOp`` that must vanish.  Spectral arguments are the ring variables
u, v, t, u1, u2.
"""
from __future__ import annotations

from typing import List, Tuple

from .diffop import DiffOp, op_commutator, op_mul, op_principal_part, op_sum, op_sym
from .gklo import GKLO
from .poly import spectral
from .ratfunc import RatFunc

DEFINING = ("z-even", "h-h", "h-b", "b-b-far", "b-b-same", "b-b-adjacent", "serre")


def _c(G: GKLO, c, factors) -> RatFunc:
    return G.F(c, factors)


def z_even(G: GKLO, i: int) -> DiffOp:
    u = G.shape.sp("u")
    return G.z_from_h(i, u) - G.z_from_h(i, -u)


def h_h(G: GKLO, i: int, j: int) -> DiffOp:
    return op_commutator(G.hcur(i, "u"), G.hcur(j, "v"))


def h_b(G: GKLO, i: int, j: int) -> DiffOp:
    S = G.shape
    u, v, h = S.sp("u"), S.sp("v"), S.h
    half = h / 2
    hu = G.hcur(i, u)
    lhs = op_commutator(hu, G.b(j, v))
    rhs = []
    if i == j:
        rhs.append(op_mul(G.b(i, u + half) - G.b(i, v), hu).scale(_c(G, 1, [(h, 1), (u - v + half, -1)])))
        rhs.append(op_mul(hu, G.b(i, v) - G.b(i, -u - half)).scale(_c(G, 1, [(h, 1), (u + v + half, -1)])))
    if i == j + 1:
        rhs.append(op_mul(hu, G.b(j, -u) - G.b(j, v)).scale(_c(G, 1, [(h, 1), (u + v, -1)])))
        rhs.append(op_mul(G.b(j, v) - G.b(j, u), hu).scale(_c(G, 1, [(h, 1), (u - v, -1)])))
    return lhs - op_sum(rhs, G.A)


def b_b_far(G: GKLO, i: int, j: int) -> DiffOp:
    return op_commutator(G.b(i, "u"), G.b(j, "v"))


def b_b_same(G: GKLO, i: int) -> DiffOp:
    S = G.shape
    u, v, h = S.sp("u"), S.sp("v"), S.h
    bu, bv = G.b(i, u), G.b(i, v)
    lhs = op_commutator(bu, bv)
    d = bv - bu
    t1 = op_mul(d, d).scale(_c(G, 1, [(h, 1), (v - u, -1)]))
    t2 = (G.zhat(i, v) - G.zhat(i, u)).scale(_c(G, 1, [(h, 1), (u + v, -1)]))
    return lhs - t1 - t2


def b_mode0(G: GKLO, i: int) -> DiffOp:
    """u^{-1} coefficient of the b_i image, Σ_k κ_{i,k} + κ′_{i,k}."""
    parts = []
    for k in range(1, G.shape.mi(i) + 1):
        parts += [G.kappa(i, k), G.kappa_prime(i, k)]
    return op_sum(parts, G.A)


def b_b_adjacent(G: GKLO, i: int) -> DiffOp:
    S = G.shape
    u, v, h = S.sp("u"), S.sp("v"), S.h
    bu, bv = G.b(i, u), G.b(i + 1, v)
    lhs = op_commutator(bu, bv).scale(_c(G, 1, [(u - v, 1)]))
    rhs = op_commutator(bu, bv, anti=True).scale(_c(G, -1, [(h / 2, 1)]))
    rhs = rhs + op_commutator(b_mode0(G, i), bv) + op_commutator(b_mode0(G, i + 1), bu)
    return lhs - rhs


def serre_lhs(G: GKLO, i: int, j: int) -> DiffOp:
    """(u1+u2) Sym [b_i(u1), [b_i(u2), b_j(t)]]."""
    S = G.shape
    u1, u2, t = S.sp("u1"), S.sp("u2"), S.sp("t")
    inner = op_commutator(G.b(i, u2), G.b(j, t))
    outer = op_commutator(G.b(i, u1), inner)
    return op_sym(outer, spectral("u1"), spectral("u2")).scale(_c(G, 1, [(u1 + u2, 1)]))


def serre_rhs(G: GKLO, i: int, j: int) -> DiffOp:
    """Sum over u = u1, u2 of the u- and t-principal parts of
    4ħ u ((t−ħ) z_i(u) b_j(t) − (t+ħ) b_j(t) z_i(u)) / (4u² − ħ²).

    z_i is the full image here.  For μ = 0 the u-principal part is a no-op.
    """
    S = G.shape
    u, t, h = S.sp("u"), S.sp("t"), S.h
    U = spectral("u")
    bt = G.b(j, t)
    zu = G.A.scalar(G.z_closed(i, u))
    den = [(2 * u - h, -1), (2 * u + h, -1), (u, 1)]
    f = op_mul(zu, bt).scale(_c(G, 4, [(h, 1), (t - h, 1)] + den)) + \
        op_mul(bt, zu).scale(_c(G, -4, [(h, 1), (t + h, 1)] + den))
    g = op_principal_part(op_principal_part(f, spectral("t")), U)
    return g.subst({U: S.sp("u1")}) + g.subst({U: S.sp("u2")})


def serre(G: GKLO, i: int, j: int) -> DiffOp:
    return serre_lhs(G, i, j) - serre_rhs(G, i, j)


def cases(shape, tag: str) -> List[Tuple[int, ...]]:
    n = shape.n
    if tag == "z-even":
        return [(i,) for i in range(1, n)]
    if tag == "h-h":
        return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    if tag == "h-b":
        return [(i, j) for i in range(1, n + 1) for j in range(1, n)]
    if tag == "b-b-far":
        return [(i, j) for i in range(1, n) for j in range(1, n) if abs(i - j) > 1]
    if tag == "b-b-same":
        return [(i,) for i in range(1, n)]
    if tag == "b-b-adjacent":
        return [(i,) for i in range(1, n - 1)]
    if tag == "serre":
        return [(i, j) for i in range(1, n) for j in range(1, n) if abs(i - j) == 1]
    raise KeyError(tag)


BUILDERS = {
    "z-even": z_even,
    "h-h": h_h,
    "h-b": h_b,
    "b-b-far": b_b_far,
    "b-b-same": b_b_same,
    "b-b-adjacent": b_b_adjacent,
    "serre": serre,
}


def serre_rhs_literal(G: GKLO, i: int, j: int, zfun=None) -> DiffOp:
    """Right-hand side summed over u1, u2 with no principal parts taken."""
    S = G.shape
    u1, u2, t, h = S.sp("u1"), S.sp("u2"), S.sp("t"), S.h
    bt = G.b(j, t)
    zfun = zfun or G.zhat
    out = []
    for x in (u1, u2):
        zx = zfun(i, x)
        den = [(2 * x - h, -1), (2 * x + h, -1), (x, 1)]
        out.append(op_mul(zx, bt).scale(_c(G, 4, [(h, 1), (t - h, 1)] + den)))
        out.append(op_mul(bt, zx).scale(_c(G, -4, [(h, 1), (t + h, 1)] + den)))
    return op_sum(out, G.A)
