import pytest
from hypothesis import given
from hypothesis import strategies as st

from twgklo.diffop import (DiffOp, current_mode, op_commutator, op_invert, op_mul, op_sym)
from twgklo.gklo import GKLO, build_shape
from twgklo.poly import HBAR, gamma, spectral
from twgklo.ratfunc import RatFunc

S = build_shape(2, [4])          # two shift slots (1,1), (1,2)
A = S.alg
Rg = S.ring
h = S.h
g1, g2 = S.g(1, 1), S.g(1, 2)
u1, u2 = spectral("u1"), spectral("u2")
P = RatFunc.poly


def coeff_strategy():
    lin = st.sampled_from([g1 - g2, g1 + g2 + h, g1 - h / 2, g2 + 3 * h / 2])
    num = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1),
                             st.integers(-3, 3).filter(bool)), min_size=1, max_size=3)
    def build(terms, dens):
        p = Rg.zero()
        for a, b, c, k in terms:
            p = p + g1 ** a * g2 ** b * h ** c * k
        f = P(p)
        for d in dens:
            f = f / P(d)
        return f
    return st.builds(build, num, st.lists(lin, max_size=2))


EXPS = st.tuples(st.integers(-1, 1), st.integers(-1, 1))
OPS = st.dictionaries(EXPS, coeff_strategy(), min_size=1, max_size=3).map(
    lambda d: DiffOp(A, {e: f for e, f in d.items() if not f.is_zero()}))


def gop(x):
    return A.scalar(P(x))


def test_beta_moves_past_gamma():
    b = A.beta(1, 1)
    assert op_mul(b, gop(g1)) == op_mul(gop(g1 + h), b)


def test_identity():
    x = A.beta(1, 2).scale(P(g1 * g2))
    assert op_mul(A.one(), x) == x
    assert op_mul(x, A.one()) == x


def test_conjugation_by_beta_shifts_back():
    got = op_mul(op_mul(A.beta(1, 1, -1), gop(g1 * g1)), A.beta(1, 1))
    # hand application of the shift rule: β^{-1} f(γ) = f(γ − ħ) β^{-1}
    assert got == gop((g1 - h) ** 2)
    assert got == gop(g1 * g1 - 2 * g1 * h + h * h)


def test_commutator_examples():
    assert op_commutator(gop(g1), gop(g2)).is_zero()
    x = A.beta(1, 1).scale(P(g2 + 1))
    assert op_commutator(x, x).is_zero()
    assert op_commutator(A.beta(1, 1), gop(g1)) == A.beta(1, 1).scale(P(h))


def test_anticommutator():
    b = A.beta(1, 1)
    assert op_commutator(b, gop(g1), anti=True) == op_mul(gop(2 * g1 + h), b)


def test_current_mode_examples():
    S2 = build_shape(2, [2])
    G = GKLO(S2)
    U = spectral("u")
    assert current_mode(G.b(1), U, 1) == G.kappa(1, 1) + G.kappa_prime(1, 1)
    assert current_mode(G.A.scalar(P(S2.g(1, 1) + S2.h)), U, 1).is_zero()
    assert current_mode(G.hcur(1), U, -S2.top_power(1)) == G.A.one()


def test_op_sym_examples():
    u, v = Rg.var(u1), Rg.var(u2)
    assert op_sym(A.scalar(P(u)), u1, u2) == A.scalar(P(u + v))
    assert op_sym(A.scalar(P(u * v)), u1, u2) == A.scalar(P(2 * u * v))
    x = A.beta(1, 1).scale(RatFunc.const(Rg, 1) / P(u - g1))
    want = A.beta(1, 1).scale(RatFunc.const(Rg, 1) / P(u - g1) + RatFunc.const(Rg, 1) / P(v - g1))
    assert op_sym(x, u1, u2) == want


def test_invert():
    assert op_invert(A.one()) == A.one()
    U = Rg.var(spectral("u"))
    f = P(U * U - g1 * g1)
    assert op_invert(A.scalar(f)) == A.scalar(RatFunc.const(Rg, 1) / f)
    with pytest.raises(ValueError, match="not invertible"):
        op_invert(A.beta(1, 1))
    with pytest.raises(ZeroDivisionError):
        op_invert(A.zero())


def test_invert_gives_z_image():
    S2 = build_shape(2, [2])
    G = GKLO(S2)
    got = op_mul(op_invert(G.hcur(1, S2.sp("u") - S2.h / 2)), G.hcur(2, "u"))
    assert got == G.A.scalar(G.z_closed(1, "u"))


def test_gamma_is_not_central():
    with pytest.raises(ValueError):
        A.one().subst({gamma(1, 1): Rg.var(HBAR)})


@given(OPS, OPS, OPS)
def test_associativity(x, y, z):
    assert op_mul(op_mul(x, y), z) == op_mul(x, op_mul(y, z))


@given(EXPS, coeff_strategy(), EXPS)
def test_normal_form_consistency(e, f, e2):
    be = DiffOp(A, {e: RatFunc.const(Rg, 1)})
    be2 = DiffOp(A, {e2: RatFunc.const(Rg, 1)})
    fo = A.scalar(f)
    assert op_mul(op_mul(be, fo), be2) == op_mul(be, op_mul(fo, be2))


@given(OPS)
def test_spectral_variables_are_central(x):
    u = A.scalar(P(Rg.var(spectral("u"))))
    assert op_commutator(u, x).is_zero()


@given(coeff_strategy())
def test_invert_is_inverse(f):
    x = A.scalar(f)
    assert op_mul(x, op_invert(x)) == A.one()


@given(OPS, OPS)
def test_commutator_antisymmetry(x, y):
    assert op_commutator(x, y) == -op_commutator(y, x)
    assert op_commutator(x, y) == op_mul(x, y) - op_mul(y, x)
