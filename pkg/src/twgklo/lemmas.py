"""Operator identities among the κ, κ′ themselves.

Every builder yields ``(name, indices, difference)`` triples; the identity
holds when the difference is the zero operator.
"""
from __future__ import annotations

from typing import Iterator, Tuple

from gmpy2 import mpq

from .diffop import DiffOp, op_commutator, op_mul
from .gklo import GKLO

Item = Tuple[str, tuple, DiffOp]


def cartan(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def _slots(G: GKLO):
    return list(G.A.slots)


def _mul3(a, b, c):
    return op_mul(op_mul(a, b), c)


def aux_five(G: GKLO) -> Iterator[Item]:
    """The κ–γ, κκ, κ′κ′, κκ′ exchange relations and the two κκ′ products."""
    S, h = G.shape, G.shape.h
    half = h / 2
    slots = _slots(G)
    for (i, k) in slots:
        x, xp = G.kappa(i, k), G.kappa_prime(i, k)
        for (j, l) in slots:
            d = 1 if (i, k) == (j, l) else 0
            gop = G.gamma_op(j, l)
            yield "kappa-gamma", (i, k, j, l), op_commutator(x, gop) + x.scale(G.F(d, [(h, 1)]))
            yield "kappa'-gamma", (i, k, j, l), op_commutator(xp, gop) - xp.scale(G.F(d, [(h, 1)]))
    for (i, k) in slots:
        gi = S.g(i, k)
        for (j, l) in slots:
            if (i, k) == (j, l):
                continue
            a = cartan(i, j)
            gj = S.g(j, l)
            x_i, x_j = G.kappa(i, k), G.kappa(j, l)
            p_i, p_j = G.kappa_prime(i, k), G.kappa_prime(j, l)
            c = G.F(a, [(half, 1), (gi - gj, -1)])
            yield "kappa-kappa", (i, k, j, l), \
                op_commutator(x_i, x_j) - op_commutator(x_j, x_i, anti=True).scale(c)
            yield "kappa'-kappa'", (i, k, j, l), \
                op_commutator(p_i, p_j) + op_commutator(p_j, p_i, anti=True).rscale(c)
            c2 = G.F(a, [(half, 1), (gi + gj + h, -1)])
            yield "kappa-kappa'", (i, k, j, l), \
                op_commutator(x_i, p_j) - op_commutator(x_i, p_j, anti=True).scale(c2)
    for (i, k) in slots:
        g = S.g(i, k)
        xi = g + h
        fs3 = G.R_factors(i, g)
        fs4 = G.R_factors(i, xi)
        for j in (i - 1, i + 1):
            for l in range(1, S.mi(j) + 1):
                gj = S.g(j, l) + half
                fs3 += [(g - gj, 1), (g + gj, 1)]
                fs4 += [(xi - gj, 1), (xi + gj, 1)]
        fs3 += [(g - half, -1), (g + half, -1)]
        fs4 += [(xi - half, -1), (xi + half, -1)]
        for l in range(1, S.mi(i) + 1):
            if l != k:
                gl = S.g(i, l)
                xl = gl + h
                fs3 += [(g - gl, -1), (g + gl, -1), (g - xl, -1), (g + xl, -1)]
                fs4 += [(xi - gl, -1), (xi + gl, -1), (xi - xl, -1), (xi + xl, -1)]
        x, xp = G.kappa(i, k), G.kappa_prime(i, k)
        yield "kappa*kappa'", (i, k), op_mul(x, xp) - G.A.scalar(G.F(mpq(1, 4), fs3))
        yield "kappa'*kappa", (i, k), op_mul(xp, x) - G.A.scalar(G.F(mpq(1, 4), fs4))


def aux_reformulated(G: GKLO) -> Iterator[Item]:
    S, h = G.shape, G.shape.h
    half = h / 2
    slots = _slots(G)
    for (i, k) in slots:
        gi = S.g(i, k)
        for (j, l) in slots:
            a = cartan(i, j)
            gj = S.g(j, l)
            x_i, x_j = G.kappa(i, k), G.kappa(j, l)
            p_i, p_j = G.kappa_prime(i, k), G.kappa_prime(j, l)
            if (i, k) != (j, l):
                yield "nxx1", (i, k, j, l), \
                    op_mul(x_i, x_j).scale(G.F(1, [(gi - gj - half * a, 1)])) - \
                    op_mul(x_j, x_i).scale(G.F(1, [(gi - gj + half * a, 1)]))
                yield "nxx2", (i, k, j, l), \
                    op_mul(p_i, p_j).rscale(G.F(1, [(gi - gj + half * a, 1)])) - \
                    op_mul(p_j, p_i).rscale(G.F(1, [(gi - gj - half * a, 1)]))
                yield "nxx3", (i, k, j, l), \
                    op_mul(x_i, p_j).scale(G.F(1, [(gi + gj + h - half * a, 1)])) - \
                    op_mul(p_j, x_i).scale(G.F(1, [(gi + gj + h + half * a, 1)]))


def aux_mixed3(G: GKLO) -> Iterator[Item]:
    """Double commutators of two node-i operators with one node-(i+1) operator."""
    S, h = G.shape, G.shape.h
    half = h / 2
    C = op_commutator
    for i in range(1, S.n - 1):
        for m in range(1, S.mi(i + 1) + 1):
            gm = S.g(i + 1, m)
            xm, pm = G.kappa(i + 1, m), G.kappa_prime(i + 1, m)
            for k in range(1, S.mi(i) + 1):
                xk = G.kappa(i, k)
                yield "mixed3-1", (i, k, m), C(xk, C(xk, pm))
                gk = S.g(i, k)
                for l in range(1, S.mi(i) + 1):
                    if l == k:
                        continue
                    gl = S.g(i, l)
                    xl, pl, pk = G.kappa(i, l), G.kappa_prime(i, l), G.kappa_prime(i, k)
                    c2 = G.F(-1, [(h, 2), (gk + gl + 2 * gm + 2 * h, 1), (gk + gm + half, -1),
                                  (gl + gm + half, -1), (gk - gl + h, -1)])
                    yield "mixed3-2", (i, k, l, m), C(xk, C(xl, pm)) - _mul3(xk, xl, pm).scale(c2)
                    c3 = G.F(1, [(h, 2), (gl - gk + 2 * gm + h, 1), (gm - gk + half, -1),
                                 (gl + gk + 2 * h, -1), (gm + gl + 3 * half, -1)])
                    yield "mixed3-3", (i, k, l, m), C(xk, C(pl, xm)) - _mul3(xk, pl, xm).scale(c3)
                    c4 = G.F(-1, [(h, 2), (gk - gl + 2 * gm + h, 1), (gm - gl + half, -1),
                                  (gl + gk, -1), (gm + gk + 3 * half, -1)])
                    yield "mixed3-4", (i, k, l, m), C(pk, C(xl, xm)) - _mul3(pk, xl, xm).scale(c4)


def st_pair(G: GKLO, i: int, k: int, j: int, l: int, literal: bool = False):
    """S_{i,k}^{j,l} and T_{i,k}^{j,l}, both β-free.

    T is built with ξ² − (γ_{j,l}+½ħ)² in the denominator; ``literal`` uses
    ξ_{j,l} there instead, which breaks the T-identities.
    """
    S, h = G.shape, G.shape.h
    half = h / 2
    g, gj = S.g(i, k), S.g(j, l)
    xi, xj = g + h, gj + h
    x, xp = G.kappa(i, k), G.kappa_prime(i, k)
    s = op_mul(x, xp).scale(G.F(4, [(g - half, 1), (g + half, 1),
                                    (g - gj - half, -1), (g + gj + half, -1)]))
    yj = xj if literal else gj
    t = op_mul(xp, x).scale(G.F(4, [(xi - half, 1), (xi + half, 1),
                                    (xi - yj - half, -1), (xi + yj + half, -1)]))
    return s, t


def aux_xxx_st(G: GKLO, literal: bool = False) -> Iterator[Item]:
    """The four cubic identities in S and T; T-identities carry a minus sign."""
    S, h = G.shape, G.shape.h
    half = h / 2
    for i in range(1, S.n - 1):
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            x, xp = G.kappa(i, k), G.kappa_prime(i, k)
            for l in range(1, S.mi(i + 1) + 1):
                s, t = st_pair(G, i, k, i + 1, l, literal)
                pre = G.F(1, [(half, 1), (g + half, -1)])
                tpre = pre if literal else G.F(-1, [(half, 1), (g + half, -1)])
                for name, a, b, w, y in (("st-1", x, xp, s, G.kappa(i + 1, l)),
                                         ("st-2", xp, x, t, G.kappa(i + 1, l)),
                                         ("st-3", x, xp, s, G.kappa_prime(i + 1, l)),
                                         ("st-4", xp, x, t, G.kappa_prime(i + 1, l))):
                    lhs = _mul3(a, b, y) - _mul3(a, y, b).scale(G.F(2, [])) + _mul3(y, a, b)
                    c = tpre if w is t else pre
                    yield name, (i, k, l), lhs - op_mul(w, y).scale(c)


AUX = {
    "aux-five": aux_five,
    "aux-reformulated": aux_reformulated,
    "aux-mixed3": aux_mixed3,
    "aux-xxxST": aux_xxx_st,
}
