import pytest
from gmpy2 import mpq

from twgklo.diffop import current_mode, op_commutator, op_invert, op_mul
from twgklo.gklo import (GKLO, ShapeError, build_kappas, build_shape, phi_abc, phi_b,
                         phi_central, phi_h_z)
from twgklo.poly import spectral
from twgklo.ratfunc import RatFunc

U = spectral("u")
MATRIX = [
    (2, [2], [0]), (2, [4], [0]), (2, [2], [2]), (3, [1, 1], [0, 0]),
    (3, [2, 2], [0, 0]), (3, [2, 2], [1, 1]), (4, [1, 0, 1], [0, 0, 0]),
]


def F(S, c, fs):
    return RatFunc.from_factors(S.ring, c, fs)


# build_shape

def test_shape_examples():
    assert build_shape(2, [2], [0]).m == (1,)
    assert build_shape(3, [1, 1], [0, 0]).m == (1, 1)
    S = build_shape(2, [0], [0])
    assert S.m == (0,) and phi_b(S, 1).is_zero()
    assert phi_h_z(S, 1)[0] == S.alg.one()


@pytest.mark.parametrize("n,lam,mu", MATRIX)
def test_shape_identity(n, lam, mu):
    S = build_shape(n, lam, mu)
    for i in range(1, n):
        assert S.lami(i) - S.mu[i - 1] == 2 * S.mi(i) - S.mi(i - 1) - S.mi(i + 1)
    assert S.mi(0) == S.mi(n) == 0


@pytest.mark.parametrize("args,msg", [
    ((2, [0], [1]), "mu not"), ((2, [1], [0]), "mu not"), ((2, [-1], [0]), "nonnegative"),
    ((3, [1], [0]), "n-1"), ((1, [], []), "at least 2"),
])
def test_shape_errors(args, msg):
    with pytest.raises(ShapeError, match=msg):
        build_shape(*args)


def test_wrong_root_count():
    with pytest.raises(ShapeError, match="roots"):
        build_shape(2, [2], [0], roots=[[1]])


def test_rational_roots():
    S = build_shape(2, [2], [0], roots=[["1/2", 3]])
    assert S.root_value(1, 1) == S.ring.const(mpq(1, 2))
    assert S.root_value(1, 2) == S.ring.const(3)


# κ, κ′

def test_kappa_n2():
    S = build_shape(2, [2])
    g, h = S.g(1, 1), S.h
    k, kp = build_kappas(S, 1, 1)
    assert k == S.alg.beta(1, 1, -1).scale(F(S, 1, [(2 * (g - h / 2), -1)]))
    r1, r2 = S.root_value(1, 1), S.root_value(1, 2)
    xi = g + h
    want = RatFunc.poly((xi * xi - r1 * r1) * (xi * xi - r2 * r2)) / RatFunc.poly(2 * (g + 3 * h / 2))
    assert kp == S.alg.beta(1, 1).scale(want)


def test_kappa_n3_neighbor():
    S = build_shape(3, [1, 1])
    g, g2, h = S.g(1, 1), S.g(2, 1), S.h
    k, _ = build_kappas(S, 1, 1)
    want = RatFunc.poly(g * g - (g2 + h / 2) ** 2) / RatFunc.poly(2 * (g - h / 2))
    assert k == S.alg.beta(1, 1, -1).scale(want)


def test_kappa_range():
    with pytest.raises(IndexError):
        build_kappas(build_shape(2, [2]), 1, 2)


# b, h, z

def test_phi_b_n2():
    S = build_shape(2, [2])
    G = GKLO(S)
    u, g, h = S.sp("u"), S.g(1, 1), S.h
    want = G.kappa(1, 1).scale(F(S, 1, [(u - g, -1)])) + G.kappa_prime(1, 1).scale(F(S, 1, [(u + g + h, -1)]))
    assert phi_b(S, 1) == want
    assert current_mode(phi_b(S, 1), U, 0).is_zero()
    assert current_mode(phi_b(S, 1), U, 1) == G.kappa(1, 1) + G.kappa_prime(1, 1)


def test_z_n2_closed_form():
    S = build_shape(2, [2])
    u, g, h = S.sp("u"), S.g(1, 1), S.h
    r1, r2 = S.root_value(1, 1), S.root_value(1, 2)
    want = RatFunc.poly((u * u - r1 * r1) * (u * u - r2 * r2)) / \
        RatFunc.poly((u * u - g * g) * (u * u - (g + h) ** 2))
    _, z = phi_h_z(S, 1)
    assert z == S.alg.scalar(want)


@pytest.mark.parametrize("n,lam,mu", MATRIX)
def test_z_consistency_and_evenness(n, lam, mu):
    S = build_shape(n, lam, mu)
    G = GKLO(S)
    for i in range(1, n):
        z = G.z(i)  # raises on mismatch
        assert z == op_mul(op_invert(G.hcur(i, S.sp("u") - S.h / 2)), G.hcur(i + 1))
        assert z == G.z(i, -S.sp("u"))


@pytest.mark.parametrize("n,lam,mu", MATRIX)
def test_h_leading_power(n, lam, mu):
    S = build_shape(n, lam, mu)
    G = GKLO(S)
    for i in range(1, n + 1):
        top = S.top_power(i)
        # closed form −2m₁ + 2Σ_{j<i} μ_j
        assert top == -2 * S.mi(1) + 2 * sum(S.mu[: i - 1])
        h = G.hcur(i)
        assert current_mode(h, U, -top) == S.alg.one()
        assert current_mode(h, U, -top - 1).is_zero()


def test_b_vanishes_on_empty_node():
    S = build_shape(4, [1, 0, 1])
    assert S.m == (1, 1, 1)
    S2 = build_shape(3, [2, 2], [2, 2])
    assert all(phi_b(S2, i).is_zero() for i in (1, 2))


# ABCD

@pytest.mark.parametrize("n,lam", [(2, [2]), (2, [4]), (3, [1, 1])])
def test_abc_modes(n, lam):
    S = build_shape(n, lam)
    for i in range(1, n):
        A, B, C = phi_abc(S, i)
        m = S.mi(i)
        assert A == GKLO(S).A_tilde(i, -S.sp("u"))
        want = RatFunc.const(S.ring, (-1) ** m)
        for k in range(1, m + 1):
            want = want * RatFunc.poly((S.g(i, k) + S.h / 2) ** 2)
        assert current_mode(A, U, 2 * m) == S.alg.scalar(want)
        for r in range(2 * m + 1, 2 * m + 4):
            for X in (A, B, C):
                assert current_mode(X, U, r).is_zero()


def test_abc_needs_mu_zero():
    with pytest.raises(ValueError):
        phi_abc(build_shape(3, [2, 2], [1, 1]), 1)


# central series

def test_central_trivial():
    assert phi_central(build_shape(2, [0])) == build_shape(2, [0]).alg.one()


def test_central_commutes_with_b():
    S = build_shape(2, [2])
    G = GKLO(S)
    c = phi_central(S)
    assert len(c.terms) == 1 and S.alg.zero_exps in c.terms
    assert op_commutator(c, G.b(1, "v")).is_zero()
    assert op_commutator(c, G.hcur(2, "v")).is_zero()


def test_central_step_hbar_is_not_central():
    S = build_shape(2, [2])
    G = GKLO(S)
    c = G.central(step=S.h)
    assert not op_commutator(c, G.b(1, "v")).is_zero()


def test_unknown_mutation():
    with pytest.raises(ValueError):
        GKLO(build_shape(2, [2]), mutation="nope")
