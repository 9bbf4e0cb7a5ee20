import itertools

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from twgklo import poisson as P
from twgklo.gklo import build_shape
from twgklo.poly import VarId

N2 = 4
G2 = P.mode_algebra(2, N2)


def g(i, j, r, alg=G2):
    return alg.mode(i, j, r)


# independent oracle: coefficient extraction from the generating function

def _sym_series(i, j, x, N):
    return (1 if i == j else 0) + sum(sp.Symbol("g%d%d_%d" % (i, j, a)) * x ** a for a in range(1, N + 1))


def oracle_bracket(a, b, N):
    """{Δ_ij(u), Δ_kl(v)} = (Δ_il(u)Δ_kj(v) − Δ_kj(u)Δ_il(v))/(u − v), with
    x = 1/u, y = 1/v, so 1/(u − v) = xy/(y − x).  Returns SIGN × the x^r y^s coefficient."""
    (i, j, r), (k, l, s) = a, b
    x, y = sp.symbols("x y")
    num = _sym_series(i, l, x, N) * _sym_series(k, j, y, N) - _sym_series(k, j, x, N) * _sym_series(i, l, y, N)
    q, rem = sp.div(sp.expand(num), y - x, y)
    assert rem == 0
    expr = sp.expand(q * x * y)
    return P.SIGN * sp.Poly(expr, x, y).coeff_monomial(x ** r * y ** s)


def to_sym(p):
    out = 0
    for m, c in p.t.items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for k, e in enumerate(p.ring.exps(m)):
            if e:
                i, j, r = p.ring.vars[k].idx
                term *= sp.Symbol("g%d%d_%d" % (i, j, r)) ** e
        out += term
    return sp.expand(out)


def test_bracket_example():
    assert P.mode_bracket((1, 2, 1), (2, 1, 1), 2) == g(1, 1, 1, P.mode_algebra(2, 1)) - g(2, 2, 1, P.mode_algebra(2, 1))
    assert P.mode_bracket((1, 1, 1), (1, 1, 1), 2).is_zero()
    assert P.mode_bracket((1, 1, 1), (2, 2, 1), 2).is_zero()


@pytest.mark.parametrize("a,b", [((1, 2, 1), (2, 1, 1)), ((1, 2, 2), (2, 1, 1)), ((1, 1, 2), (1, 2, 2)),
                                 ((2, 1, 1), (1, 2, 3)), ((1, 2, 2), (2, 2, 2))])
def test_bracket_against_generating_function(a, b):
    assert to_sym(G2.bracket_modes(a, b)) == oracle_bracket(a, b, N2)


def test_tau_star_examples():
    assert P.tau_star(g(1, 2, 1), 2, N2) == -g(2, 1, 1)
    assert P.tau_star(g(1, 1, 2), 2, N2) == g(1, 1, 2)


def test_tau_minor_examples():
    for i, j in itertools.product((1, 2, 3), repeat=2):
        s1 = P.tau_minor_mode(3, (i,), (j,), 1, 3)
        G = P.mode_algebra(3, 3)
        assert s1 == g(i, j, 1, G) - g(j, i, 1, G)
    assert P.tau_minor_mode(3, (2,), (2,), 1, 3).is_zero()
    assert P.tau_minor_mode(3, (2, 3), (2, 3), 0, 3) == P.mode_algebra(3, 3).ring.one()
    with pytest.raises(ValueError):
        P.tau_minor_mode(2, (1,), (1,), 5, 4)


def test_tau_minor_one_by_one_formula():
    n, N = 2, 4
    G = P.mode_algebra(n, N)
    for i, j, r in itertools.product((1, 2), (1, 2), range(N + 1)):
        want = G.ring.zero()
        for k in range(1, n + 1):
            for a in range(r + 1):
                want = want + G.mode(k, i, a) * G.mode(k, j, r - a) * (-1) ** a
        assert P.tau_minor_mode(n, (i,), (j,), r, N) == want


@pytest.mark.parametrize("I,J", [((1,), (2,)), ((1, 2), (2, 3)), ((1, 3), (1, 2)), ((2,), (2,))])
def test_tau_symmetry(I, J):
    for r in range(4):
        a = P.tau_minor_mode(3, I, J, r, 3)
        b = P.tau_minor_mode(3, J, I, r, 3)
        assert b == a * (-1) ** r


def test_dirac_examples():
    n, N = 3, 4
    T = P.tau_algebra(n, N)
    E = T.entry
    for r in (2, 4):
        for j in (2, 3):
            assert P.dirac_bracket(E(1, 1, r), E(1, j, 1), n, N) == E(1, j, r)
        for i in (2, 3):
            for j in (2, 3):
                rhs = (E(1, 1, r) * (1 if i == j else 0) - E(i, j, r)) * P.HALF
                assert P.dirac_bracket(E(1, j, r), E(i, 1, 1), n, N) == rhs
    f = E(1, 2, 1) * E(2, 3, 2) + E(3, 3, 2)
    assert T.bracket(f, f).is_zero()


def test_dirac_closure_on_fixed_functions():
    # {s_a, s_b} computed in g-coordinates is a polynomial in s-modes: it is
    # the τ-minor bracket pushed forward along τ-variable ↦ s-mode (times 2)
    n, N = 2, 4
    G = P.mode_algebra(n, N)
    T = P.tau_algebra(n, N)
    push = [None] * T.ring.n
    for k, l in T.label_of.items():
        push[k] = G.s_mode(*l)
    for a, b in itertools.product(T.labels, repeat=2):
        if a[2] + b[2] - 1 > N:
            continue
        lhs = G.bracket(G.s_mode(*a), G.s_mode(*b))
        X = T.bracket(T.entry(*a), T.entry(*b))
        assert lhs == P.ring_map(X, G.ring, push) * 2, (a, b)


@pytest.mark.parametrize("name,n,N", [
    ("rtt-poisson", 2, 4), ("desnanot-jacobi", 3, 4), ("minor-bracket-formula", 3, 3),
    ("det-central", 3, 3), ("shifted-generators", 3, 4), ("ideal-proof-identities", 3, 4),
    ("nonvanishing-steps", 3, 4), ("jacobi", 2, 4), ("dirac-paths", 2, 4), ("tau-compat", 3, 3),
])
def test_check_identity(name, n, N):
    rep = P.check_identity(name, n, N)
    assert rep.status == "pass" and rep.cases


def test_rtt_constant_and_dictionary():
    assert P.rtt_constant(2, 4) == -2
    assert "quotient bracket = 2 x Dirac" in P.check_dirac_paths(2, 4).note


def test_check_identity_errors():
    with pytest.raises(ValueError):
        P.check_identity("nope", 2, 4)
    with pytest.raises(ValueError):
        P.check_identity("jacobi", 1, 4)


# ideal closure

def test_ideal_closure_out_of_range_is_zero():
    span = P.poisson_ideal_closure(2, 4, r=[4])
    assert span.dims() == {}
    assert P.poisson_ideal_closure(2, 4, lam=[0, -4]).dims() == {}


def test_ideal_r_convention():
    assert P.ideal_r(2, [0, -2]) == [2]
    assert P.ideal_r(3, [0, -1, -1]) == [1, 2]


def test_ideal_contains_high_modes():
    n, N = 2, 6
    T = P.tau_algebra(n, N)
    span = P.poisson_ideal_closure(n, N, r=[2])
    for r in range(4, N + 1):
        for i, j in itertools.product((1, 2), repeat=2):
            assert span.contains(T.entry(i, j, r))


def test_conjecture_evidence():
    ev = P.conjecture_evidence(2, 6, [2])
    assert ev["degree"] == 3
    assert ev["dim_without_B"] == 0 and ev["dim_with_B"] >= 1
    assert not ev["B_in_ideal_without_B"]


# classical images

def test_classical_gklo_eval():
    S = build_shape(2, [2])
    R = S.ring
    val = P.classical_gklo_eval(S, {(("A", 1, 2),): 1})
    g0 = S.g(1, 1)
    assert list(val) == [S.alg.zero_exps] and val[S.alg.zero_exps].num == -(g0 * g0)
    assert P.classical_gklo_eval(S, {(("A", 1, 3),): 1}) == {}
    assert P.classical_gklo_eval(S, {(("B", 1, 3),): 1}) == {}
    with pytest.raises(P.ClassicalError):
        P.classical_gklo_eval(S, {(("D", 1, 1),): 1})
    with pytest.raises(P.ClassicalError):
        P.classical_gklo_eval(build_shape(3, [2, 2], [1, 1]), {(("A", 1, 1),): 1})
    assert R is S.ring


def test_classical_a_modes_commute():
    from twgklo.relcheck import classical_bracket
    S = build_shape(2, [4])
    for r, s in itertools.combinations(range(1, 5), 2):
        a = P.classical_gklo_eval(S, {(("A", 1, r),): 1})
        b = P.classical_gklo_eval(S, {(("A", 1, s),): 1})
        assert classical_bracket(S.alg, a, b) == {}


# properties

def poly_in(alg, max_terms=3):
    labels = st.sampled_from([l for l in alg.labels if l[2] <= 2])
    mono = st.lists(labels, min_size=1, max_size=2)
    coef = st.integers(-3, 3).filter(bool)
    def build(terms):
        p = alg.ring.zero()
        for ls, c in terms:
            t = alg.ring.const(c)
            for l in ls:
                t = t * alg.ring.var(VarId(alg.kind, l))
            p = p + t
        return p
    return st.lists(st.tuples(mono, coef), min_size=1, max_size=max_terms).map(build)


G3 = P.mode_algebra(2, 5)
RAND = poly_in(G3)


@given(RAND, RAND, RAND)
def test_bracket_antisymmetry_and_leibniz(a, b, c):
    assert G3.bracket(a, b) == -G3.bracket(b, a)
    assert G3.bracket(a, b * c) == G3.bracket(a, b) * c + b * G3.bracket(a, c)


@given(RAND)
def test_tau_involution(a):
    assert G3.tau_star(G3.tau_star(a)) == a


@given(RAND, RAND)
def test_tau_preserves_bracket(a, b):
    # holds for polynomials whose bracket stays inside the truncation
    lab = lambda p: max((G3.ring.degree(m) for m in p.t), default=0)
    if lab(a) + lab(b) > 2:
        return
    assert G3.tau_star(G3.bracket(a, b)) == G3.bracket(G3.tau_star(a), G3.tau_star(b))


T3 = P.tau_algebra(3, 4)


def tau_poly():
    labels = st.sampled_from([l for l in T3.labels if l[2] <= 2])
    return st.lists(st.tuples(labels, st.integers(-2, 2).filter(bool)), min_size=1, max_size=3).map(
        lambda ts: sum((T3.entry(*l) * c for l, c in ts), T3.ring.zero()))


@given(tau_poly(), tau_poly())
def test_dirac_antisymmetry(a, b):
    assert T3.bracket(a, b) == -T3.bracket(b, a)
