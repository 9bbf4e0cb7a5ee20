"""Shapes and the twisted GKLO images of the currents."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .diffop import DiffAlgebra, DiffOp, op_invert, op_mul, op_principal_part, op_sum
from .poly import HBAR, MultiPoly, Ring, VarId, gamma, root, spectral
from .ratfunc import RatFunc

SPECTRAL = ("u", "v", "t", "u1", "u2")
MUTATIONS = ("drop-R-in-kappa-prime", "flip-sign-kappa", "shift-denominator")


class ShapeError(ValueError):
    pass


def solve_m(n: int, diff: Sequence[int]) -> List[Fraction]:
    """Solve (λ−μ)_i = 2 m_i − m_{i−1} − m_{i+1} over Q (type A Cartan matrix)."""
    size = n - 1
    if size == 0:
        return []
    # Thomas algorithm on the tridiagonal system
    a = [Fraction(-1)] * size
    b = [Fraction(2)] * size
    c = [Fraction(-1)] * size
    d = [Fraction(x) for x in diff]
    for k in range(1, size):
        w = a[k] / b[k - 1]
        b[k] -= w * c[k - 1]
        d[k] -= w * d[k - 1]
    m = [Fraction(0)] * size
    m[-1] = d[-1] / b[-1]
    for k in range(size - 2, -1, -1):
        m[k] = (d[k] - c[k] * m[k + 1]) / b[k]
    return m


@dataclass(frozen=True)
class Shape:
    n: int
    lam: Tuple[int, ...]
    mu: Tuple[int, ...]
    m: Tuple[int, ...]
    roots: Union[str, Tuple[Tuple[mpq, ...], ...]] = "symbolic"
    ring: Ring = field(compare=False, repr=False, default=None)
    alg: DiffAlgebra = field(compare=False, repr=False, default=None)

    def mi(self, i: int) -> int:
        """m_i with m_0 = m_n = 0."""
        return self.m[i - 1] if 1 <= i <= self.n - 1 else 0

    def lami(self, i: int) -> int:
        return self.lam[i - 1] if 1 <= i <= self.n - 1 else 0

    @property
    def nodes(self) -> range:
        return range(1, self.n)

    @property
    def slots(self):
        return self.alg.slots

    def top_power(self, i: int) -> int:
        """Leading u-power of h_i: 2(Σ_{j<i} λ_j + m_i − m_{i−1}) − 4 m_1."""
        return 2 * (sum(self.lam[: i - 1]) + self.mi(i) - self.mi(i - 1)) - 4 * self.mi(1)

    def summary(self) -> str:
        return "n=%d lambda=%s mu=%s m=%s" % (self.n, list(self.lam), list(self.mu), list(self.m))

    def var(self, v: VarId) -> MultiPoly:
        return self.ring.var(v)

    def g(self, i: int, k: int) -> MultiPoly:
        return self.ring.var(gamma(i, k))

    @property
    def h(self) -> MultiPoly:
        return self.ring.var(HBAR)

    def sp(self, name: str) -> MultiPoly:
        return self.ring.var(spectral(name))

    def root_value(self, i: int, k: int) -> MultiPoly:
        if self.roots == "symbolic":
            return self.ring.var(root(i, k))
        return self.ring.const(self.roots[i - 1][k - 1])

    @property
    def is_unshifted(self) -> bool:
        return all(x == 0 for x in self.mu)


def build_shape(n: int, lam: Sequence[int], mu: Optional[Sequence[int]] = None, roots="symbolic") -> Shape:
    if n is None:
        raise ShapeError("n required")
    if n < 2:
        raise ShapeError("n must be at least 2")
    lam = tuple(int(x) for x in lam)
    mu = tuple(int(x) for x in (mu if mu is not None else [0] * (n - 1)))
    if len(lam) != n - 1 or len(mu) != n - 1:
        raise ShapeError("lambda and mu need n-1 coordinates")
    if any(x < 0 for x in lam) or any(x < 0 for x in mu):
        raise ShapeError("coordinates must be nonnegative (dominant)")
    ms = solve_m(n, [a - b for a, b in zip(lam, mu)])
    if any(x.denominator != 1 or x < 0 for x in ms):
        raise ShapeError("mu not ≤ lambda")
    m = tuple(int(x) for x in ms)
    for i in range(1, n):
        left = m[i - 2] if i >= 2 else 0
        right = m[i] if i <= n - 2 else 0
        assert lam[i - 1] - mu[i - 1] == 2 * m[i - 1] - left - right
    if roots != "symbolic":
        rr = []
        for i in range(1, n):
            row = tuple(mpq(Fraction(str(x))) for x in roots[i - 1])
            if len(row) != lam[i - 1]:
                raise ShapeError("node %d needs %d roots, got %d" % (i, lam[i - 1], len(row)))
            rr.append(row)
        roots = tuple(rr)
    slots = [(i, k) for i in range(1, n) for k in range(1, m[i - 1] + 1)]
    variables = [HBAR] + [gamma(i, k) for (i, k) in slots] + [spectral(s) for s in SPECTRAL]
    if roots == "symbolic":
        variables += [root(i, k) for i in range(1, n) for k in range(1, lam[i - 1] + 1)]
    ring = Ring(variables, width=10)
    alg = DiffAlgebra(ring, slots)
    return Shape(n, lam, mu, m, roots, ring, alg)


def shape_from_key(key) -> Shape:
    n, lam, mu = key
    return build_shape(n, lam, mu)


# --------------------------------------------------------------------------

class GKLO:
    """Images of the currents for one shape, optionally with a deliberate defect."""

    def __init__(self, shape: Shape, mutation: Optional[str] = None, literal_prefactor: bool = False):
        if mutation is not None and mutation not in MUTATIONS:
            raise ValueError("unknown mutation %r" % mutation)
        self.shape = shape
        self.mutation = mutation
        # h_i carries (x − (i−1)ħ/2)^(−4 m_1); with literal_prefactor it is x^(−4 m_1)
        self.literal_prefactor = literal_prefactor
        self.R = shape.ring
        self.A = shape.alg
        self._kap: Dict = {}

    # small helpers
    def F(self, c, factors) -> RatFunc:
        return RatFunc.from_factors(self.R, c, factors)

    def R_factors(self, i: int, x: MultiPoly, e: int = 1):
        """Factors of R_i(x) = Π_k (x − r)(x + r)."""
        S = self.shape
        out = []
        for k in range(1, S.lami(i) + 1):
            r = S.root_value(i, k)
            out += [(x - r, e), (x + r, e)]
        return out

    def R_poly(self, i: int, x: MultiPoly) -> RatFunc:
        return self.F(1, self.R_factors(i, x))

    # κ operators
    def kappa_coeff(self, i: int, k: int) -> RatFunc:
        S, h = self.shape, self.shape.h
        g = S.g(i, k)
        half = h / 2
        fs = []
        for l in range(1, S.mi(i + 1) + 1):
            gn = S.g(i + 1, l)
            fs += [(g - gn - half, 1), (g + gn + half, 1)]
        for l in range(1, S.mi(i - 1) + 1):
            fs.append((g + S.g(i - 1, l) + half, 1))
        if self.mutation == "shift-denominator":
            fs.append((g + half, -1))
        else:
            fs.append((g - half, -1))
        for l in range(1, S.mi(i) + 1):
            if l != k:
                gl = S.g(i, l)
                fs += [(g - gl, -1), (g + gl, -1)]
        c = mpq(1, 2)
        if self.mutation == "flip-sign-kappa":
            c = -c
        return self.F(c, fs)

    def kappa_prime_coeff(self, i: int, k: int) -> RatFunc:
        S, h = self.shape, self.shape.h
        g = S.g(i, k)
        xi = g + h
        half = h / 2
        fs = []
        if self.mutation != "drop-R-in-kappa-prime":
            fs += self.R_factors(i, xi)
        for l in range(1, S.mi(i - 1) + 1):
            fs.append((xi - S.g(i - 1, l) - half, 1))
        fs.append((g + 3 * half, -1))
        for l in range(1, S.mi(i) + 1):
            if l != k:
                xl = S.g(i, l) + h
                fs += [(xi - xl, -1), (xi + xl, -1)]
        return self.F(mpq(1, 2), fs)

    def kappa(self, i: int, k: int) -> DiffOp:
        key = ("k", i, k)
        if key not in self._kap:
            self._kap[key] = self.A.monomial(self.kappa_coeff(i, k), self.A.unit_exps(i, k, -1))
        return self._kap[key]

    def kappa_prime(self, i: int, k: int) -> DiffOp:
        key = ("kp", i, k)
        if key not in self._kap:
            self._kap[key] = self.A.monomial(self.kappa_prime_coeff(i, k), self.A.unit_exps(i, k, 1))
        return self._kap[key]

    def gamma_op(self, i: int, k: int) -> DiffOp:
        return self.A.scalar(self.shape.g(i, k))

    # currents; ``x`` is the argument as a polynomial (e.g. u, −u, u + ħ/2)
    def arg(self, x) -> MultiPoly:
        return self.shape.sp(x) if isinstance(x, str) else x

    def b(self, i: int, x="u") -> DiffOp:
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        parts = []
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            parts.append(self.kappa(i, k).scale(self.F(1, [(x - g, -1)])))
            parts.append(self.kappa_prime(i, k).scale(self.F(1, [(x + g + h, -1)])))
        return op_sum(parts, self.A)

    def b_term(self, i: int, k: int, x="u") -> DiffOp:
        """Contribution of slot (i, k) to b_i(x)."""
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        g = S.g(i, k)
        return self.kappa(i, k).scale(self.F(1, [(x - g, -1)])) + \
            self.kappa_prime(i, k).scale(self.F(1, [(x + g + h, -1)]))

    def h_coeff(self, i: int, x="u") -> RatFunc:
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        half = h / 2
        if self.literal_prefactor:
            fs = [(x, -4 * S.mi(1))]
        else:
            fs = [(x - half * (i - 1), -4 * S.mi(1))]
        for j in range(1, i):
            fs += self.R_factors(j, x - half * (i - 1 - j))
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            fs += [(x - g - half, 1), (x + g + half, 1)]
        for l in range(1, S.mi(i - 1) + 1):
            g = S.g(i - 1, l)
            fs += [(x - g, -1), (x + g + h, -1)]
        return self.F(1, fs)

    def hcur(self, i: int, x="u") -> DiffOp:
        return self.A.scalar(self.h_coeff(i, x))

    def htilde(self, i: int, x="u") -> DiffOp:
        return op_invert(self.hcur(i, x))

    def z_closed(self, i: int, x="u") -> RatFunc:
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        half = h / 2
        fs = self.R_factors(i, x)
        for j in (i - 1, i + 1):
            for k in range(1, S.mi(j) + 1):
                g = S.g(j, k)
                fs += [(x - g - half, 1), (x + g + half, 1)]
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            fs += [(x - g, -1), (x + g, -1), (x - g - h, -1), (x + g + h, -1)]
        return self.F(1, fs)

    def z_from_h(self, i: int, x="u") -> DiffOp:
        x = self.arg(x)
        half = self.shape.h / 2
        return op_mul(self.htilde(i, x - half), self.hcur(i + 1, x))

    def z(self, i: int, x="u") -> DiffOp:
        """z_i image; both constructions are formed and must agree."""
        closed = self.A.scalar(self.z_closed(i, x))
        other = self.z_from_h(i, x)
        if not (closed - other).is_zero():
            raise AssertionError("z image mismatch at node %d" % i)
        return closed

    def zhat(self, i: int, x="u") -> DiffOp:
        """Principal part in u of z_i(u), then evaluated at the argument x."""
        u = spectral("u")
        pp = op_principal_part(self.A.scalar(self.z_closed(i, "u")), u)
        x = self.arg(x)
        if x == self.shape.sp("u"):
            return pp
        return pp.subst({u: x})

    # ABCD currents (μ = 0)
    def _need_unshifted(self):
        if not self.shape.is_unshifted:
            raise ValueError("ABCD images are only available for mu = 0")

    def A_tilde(self, i: int, x="u") -> DiffOp:
        self._need_unshifted()
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        half = h / 2
        fs = [(x, -2 * S.mi(i))]
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            fs += [(x - g - half, 1), (x + g + half, 1)]
        return self.A.scalar(self.F(1, fs))

    def _others(self, i: int, k: int, x: MultiPoly):
        S, h = self.shape, self.shape.h
        half = h / 2
        fs = [(x, -2 * S.mi(i))]
        for l in range(1, S.mi(i) + 1):
            if l != k:
                g = S.g(i, l)
                fs += [(x - g - half, 1), (x + g + half, 1)]
        return fs

    def B_tilde(self, i: int, x="u") -> DiffOp:
        self._need_unshifted()
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        half = h / 2
        parts = []
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            base = self._others(i, k, x)
            parts.append(self.kappa(i, k).scale(self.F(-1, base + [(x - g - half, 1)])))
            parts.append(self.kappa_prime(i, k).scale(self.F(-1, base + [(x + g + half, 1)])))
        return op_sum(parts, self.A)

    def C_tilde(self, i: int, x="u") -> DiffOp:
        self._need_unshifted()
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        half = h / 2
        parts = []
        for k in range(1, S.mi(i) + 1):
            g = S.g(i, k)
            base = self._others(i, k, x)
            parts.append(self.kappa(i, k).rscale(self.F(1, base + [(x - g - half, 1)])))
            parts.append(self.kappa_prime(i, k).rscale(self.F(1, base + [(x + g + half, 1)])))
        return op_sum(parts, self.A)

    def central(self, x="u", step=None) -> DiffOp:
        """Π_i h_i(x − (i−1)·step), step = ħ/2 by default (see ``phi_central``)."""
        self._need_unshifted()
        S, h = self.shape, self.shape.h
        x = self.arg(x)
        step = h / 2 if step is None else step
        f = RatFunc.const(self.R, 1)
        for i in range(1, S.n + 1):
            f = f * self.h_coeff(i, x - step * (i - 1))
        return self.A.scalar(f)


# --------------------------------------------------------------------------
# contract-level wrappers

def build_kappas(shape: Shape, i: int, k: int) -> Tuple[DiffOp, DiffOp]:
    if not (1 <= i <= shape.n - 1 and 1 <= k <= shape.mi(i)):
        raise IndexError("kappa index out of range")
    G = GKLO(shape)
    return G.kappa(i, k), G.kappa_prime(i, k)


def phi_b(shape: Shape, i: int) -> DiffOp:
    return GKLO(shape).b(i)


def phi_h_z(shape: Shape, i: int):
    G = GKLO(shape)
    hz = G.hcur(i)
    z = G.z(i) if i <= shape.n - 1 else None
    return hz, z


def phi_abc(shape: Shape, i: int):
    G = GKLO(shape)
    return G.A_tilde(i), G.B_tilde(i), G.C_tilde(i)


def phi_central(shape: Shape) -> DiffOp:
    return GKLO(shape).central()
