"""Relations among the ABCD currents under Φ (μ = 0), without D.

Dotted currents are read as Ȧ(u) = Ã(u), Ḃ(u) = B̃(u), Ċ(u) = −C̃(−u).
With the sign-and-reflection on C this is the reading under which the
symmetry pair holds; Ã is even so the reflection on A is invisible.
"""
from __future__ import annotations

from typing import Iterator, Tuple

from .diffop import DiffOp, op_commutator, op_mul
from .gklo import GKLO
from .ratfunc import RatFunc

Item = Tuple[str, tuple, DiffOp]


class Dotted:
    def __init__(self, G: GKLO, i: int):
        self.G, self.i = G, i
        self._cache = {}

    def _get(self, key, build):
        d = self._cache.get(key)
        if d is None:
            d = self._cache[key] = build()
        return d

    def A(self, x):
        return self._get(("A", x), lambda: self.G.A_tilde(self.i, x))

    def B(self, x):
        return self._get(("B", x), lambda: self.G.B_tilde(self.i, x))

    def C(self, x):
        return self._get(("C", x), lambda: -self.G.C_tilde(self.i, -x))


def _f(G: GKLO, c, fs) -> RatFunc:
    return G.F(c, fs)


def abcd_relations(G: GKLO, i: int) -> Iterator[Item]:
    S = G.shape
    u, v, h = S.sp("u"), S.sp("v"), S.h
    X = Dotted(G, i)
    A, B, C, M = X.A, X.B, X.C, op_mul
    P = _f(G, 1, [(h, 1), (u + v, 1)])
    Q = _f(G, 1, [(h, 1), (u - v, 1)])
    H2 = _f(G, 1, [(h, 2)])
    UV = _f(G, 1, [(u - v, 1), (u + v, 1)])

    yield "A-even", (i,), A(-u) - A(u)
    yield "A-A", (i,), op_commutator(A(u), A(v))

    lhs = op_commutator(A(u), B(v)).scale(UV)
    rhs = (M(A(u), B(v)) - M(A(v), B(u))).scale(P) \
        - (M(A(u), B(v)) - M(A(v), C(u))).scale(Q) \
        + (M(A(u), B(v)) - M(A(v), B(u))).scale(H2)
    yield "A-B", (i,), lhs - rhs

    # products read right-to-left, commutator included
    lhs = op_commutator(C(v), A(u)).scale(UV)
    rhs = (M(C(v), A(u)) - M(C(u), A(v))).scale(P) \
        - (M(C(v), A(u)) - M(B(u), A(v))).scale(Q) \
        + (M(C(v), A(u)) - M(C(u), A(v))).scale(H2)
    yield "A-C", (i,), lhs - rhs

    k = _f(G, 1, [(h, 1), (2 * u, -1)])
    yield "B-C-sym", (i,), B(-u) - C(u) - (C(u) - C(-u)).scale(k)
    yield "C-B-sym", (i,), C(-u) - B(u) - (B(u) - B(-u)).scale(k)


def abcd_literal(G: GKLO, i: int) -> Iterator[Item]:
    """A–C and the symmetry pair under the plain reading Ẋ(u) = X̃(−u)."""
    S = G.shape
    u, v, h = S.sp("u"), S.sp("v"), S.h
    A = lambda x: G.A_tilde(i, -x)
    B = lambda x: G.B_tilde(i, -x)
    C = lambda x: G.C_tilde(i, -x)
    M = op_mul
    P = _f(G, 1, [(h, 1), (u + v, 1)])
    Q = _f(G, 1, [(h, 1), (u - v, 1)])
    H2 = _f(G, 1, [(h, 2)])
    UV = _f(G, 1, [(u - v, 1), (u + v, 1)])
    lhs = op_commutator(A(u), C(v)).scale(UV)
    rhs = (M(A(u), C(v)) - M(A(v), C(u))).scale(P) \
        - (M(A(u), C(v)) - M(A(v), B(u))).scale(Q) \
        + (M(A(u), C(v)) - M(A(v), C(u))).scale(H2)
    yield "A-C", (i,), lhs - rhs
    k = _f(G, 1, [(h, 1), (2 * u, -1)])
    yield "B-C-sym", (i,), B(-u) - C(u) - (C(u) - C(-u)).scale(k)
    yield "C-B-sym", (i,), C(-u) - B(u) - (B(u) - B(-u)).scale(k)


def z_reconstruction(G: GKLO, i: int) -> DiffOp:
    """Φ(z_i(u)) against Ã_{i+1}Ã_{i−1}/(Ã_i(u−½ħ)Ã_i(u+½ħ)) times the twist
    R_i(u) u^{2(m_{i−1}+m_{i+1})} (u² − ¼ħ²)^{−2m_i}."""
    S = G.shape
    u, h = S.sp("u"), S.h
    z0 = G.A.zero_exps

    def at(j, x):
        if not 1 <= j <= S.n - 1:
            return RatFunc.const(G.R, 1)
        return G.A_tilde(j, x).terms[z0]

    ratio = at(i + 1, u) * at(i - 1, u) / (at(i, u - h / 2) * at(i, u + h / 2))
    twist = G.F(1, G.R_factors(i, u) + [(u, 2 * (S.mi(i - 1) + S.mi(i + 1))),
                                         (u - h / 2, -2 * S.mi(i)), (u + h / 2, -2 * S.mi(i))])
    return G.A.scalar(G.z_closed(i, u) - ratio * twist)
