"""Shared builders for the test modules."""
import sympy as sp
from hypothesis import strategies as st

from twgklo.poly import HBAR, Ring, gamma, spectral
from twgklo.ratfunc import RatFunc

U, V, C = spectral("u"), spectral("v"), spectral("c")
G11 = gamma(1, 1)

# sympy symbols used by the oracles, keyed by the printed variable name
SYM = {"h": sp.Symbol("h"), "g1_1": sp.Symbol("g1_1"), "u": sp.Symbol("u"),
       "v": sp.Symbol("v"), "c": sp.Symbol("c")}


def small_ring():
    return Ring([HBAR, G11, U, V, C])


def to_sympy(f: RatFunc):
    """Independent reading of a RatFunc: parse its printed form with sympy."""
    return sp.sympify(f.to_str().replace("^", "**"), locals=SYM)


def poly_strategy(R, max_terms=5, max_deg=3):
    exps = st.tuples(*[st.integers(0, max_deg)] * R.n)
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
    return st.dictionaries(exps, coeff, max_size=max_terms).map(R.from_terms)


def linear_atom_strategy(R):
    """Monic-ish linear denominators u ± γ ± kħ/2, γ ± kħ/2 and the like."""
    h, g, u, v = R.var(HBAR), R.var(G11), R.var(U), R.var(V)
    base = st.sampled_from([u - g, u + g, g, u, v - g, u - v, u + v])
    shift = st.integers(-3, 3)
    return st.builds(lambda b, k: b + h * k / 2, base, shift).filter(lambda p: not p.is_const())


def ratfunc_strategy(R):
    num = poly_strategy(R)
    dens = st.lists(linear_atom_strategy(R), min_size=0, max_size=2)
    return st.builds(lambda n, ds: RatFunc.poly(n) / RatFunc.from_factors(R, 1, [(d, 1) for d in ds]),
                     num, dens)
