import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sesqui.algebra import PolyRing
from sesqui.engine import (
    DeltaPair,
    check,
    energy_density,
    random_variation_suite,
    same_sign_scan,
    scan_vertical_system,
    variation_test,
)
from sesqui.fields import VectorFieldExpr
from sesqui.frame import FrameAlgebra, milnor, nil, sol
from sympy_oracle import oracle_for, to_sympy

R = PolyRing(["a", "b", "g"])
a, b, g = R.gens


def field(*coeffs, fa=None):
    return VectorFieldExpr.from_literals(fa or nil(), R, coeffs)


def test_delta_pair():
    d = DeltaPair("1", "-3/2")
    assert (d.delta1, d.delta2) == (1, Fraction(-3, 2))
    assert not d.same_sign and DeltaPair(-1, -3).same_sign
    with pytest.raises(ValueError, match="degenerate"):
        DeltaPair(0, "0/5")


def test_check_examples():
    rep = check(field(2, 2, 0), ("1", "-4/3"))
    assert not rep.is_sesqui_vector_field and not rep.is_sesqui_map
    rep = check(field(0, 0, 0), (1, 1))
    assert rep.is_sesqui_vector_field and rep.is_sesqui_map
    rep = check(field(5, 0, 0), (1, -2))
    assert rep.is_sesqui_vector_field and rep.is_sesqui_map


def test_check_diagonal_member():
    # (0, 2, 2) at (1, -1) solves the vertical system; the e_1 horizontal
    # residual -b g (4 d1 + d2 (8 + 2a^2 + 2g^2 - b^2))/16 is -4 (4 - 12)/16 = 2
    rep = check(field(0, 2, 2), (1, -1))
    assert rep.is_sesqui_vector_field
    assert rep.horizontal_residual == field(2, 0, 0)
    assert not rep.is_sesqui_map


def test_check_breakdown_names():
    rep = check(field(a, b, g), (1, 1))
    assert "vertical: lap X" in rep.term_breakdown
    assert "horizontal: sum R(X,R(e_i,S(X))X)e_i" in rep.term_breakdown
    assert len(rep.term_breakdown) == 6 + 8


rats = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero = rats.filter(lambda q: q != 0)


@given(st.tuples(rats, rats, rats), nonzero, rats)
def test_check_flag_coherence(coeffs, p, q):
    rep = check(field(*coeffs), (p, q))
    assert rep.is_sesqui_vector_field == rep.vertical_residual.is_zero()
    assert rep.is_sesqui_map == (rep.is_sesqui_vector_field and rep.horizontal_residual.is_zero())


# -- energy density --------------------------------------------------------------

def test_energy_density_examples():
    assert energy_density(field(0, 0, 0), (1, 1)) == R(3)
    X = field(a, b, g)
    assert energy_density(X, (0, 1)) == R.parse("(b^2*g^2 + a^2*b^2)/16 + (a^2 + b^2 + g^2)/4")
    assert energy_density(X, (1, 0)) == R.parse("3 + (a^2 + b^2 + g^2)/2")


def test_energy_density_against_oracle():
    for fa in (nil(), sol(), milnor(1, 2, -1)):
        orc = oracle_for(fa)
        X = field(a, b, g, fa=fa)
        SA, SB, SG = sp.symbols("a b g")
        want = orc.energy_density([SA, SB, SG], sp.Rational(2, 3), sp.Rational(-5, 2))
        assert to_sympy(energy_density(X, ("2/3", "-5/2"))) == want


def test_energy_density_rejects_jet_mode():
    J = PolyRing([f"f{k}" for k in range(5)])
    X = VectorFieldExpr(sol().jet(J, 2), [J.zero, J.zero, J.symbol("f0")])
    with pytest.raises(ValueError, match="jet"):
        energy_density(X, (1, 1))


def test_energy_density_is_nonnegative_beyond_constant():
    rng = random.Random(3)
    X = field(a, b, g)
    for _ in range(100):
        p, q = rng.uniform(0, 3), rng.uniform(0, 3)
        pt = {"a": rng.uniform(-5, 5), "b": rng.uniform(-5, 5), "g": rng.uniform(-5, 5)}
        E = energy_density(X, (Fraction(p), Fraction(q))).evaluate(pt)
        assert E - 3 * p >= -1e-9


# -- first variation -----------------------------------------------------------

def test_variation_examples():
    r = variation_test(nil(), [1, 1, 1], [0, 0, 0], (1, 1))
    assert r.lhs == 0 and r.rhs == 0 and r.rel_err == 0
    r = variation_test(nil(), [1, 1, 1], [1, 0, 0], (1, 1), step=1e-4)
    # rhs = 2 * a(8 + 4 + b^2)/16 at a = b = 1
    assert r.rhs == pytest.approx(13 / 8, rel=1e-14)
    assert r.rel_err < 1e-6


def test_variation_suite_and_convergence():
    rows = random_variation_suite(nil(), (1, 1), n=20, step=1e-4, seed=11)
    assert max(r.rel_err for _, _, r in rows) < 1e-6
    ratios = []
    for X, V, _ in rows:
        e1 = variation_test(nil(), X, V, (1, 1), step=1e-2).abs_err
        e2 = variation_test(nil(), X, V, (1, 1), step=5e-3).abs_err
        if e1 > 1e-9:
            ratios.append(e1 / e2)
    assert ratios and all(3.5 < q < 4.5 for q in ratios)


def test_variation_on_other_unimodular_algebras():
    for fa in (sol(), milnor(1, -2, 3)):
        rows = random_variation_suite(fa, ("1/2", "-3"), n=5, seed=1)
        assert max(r.rel_err for _, _, r in rows) < 1e-6


def test_variation_preconditions():
    non_uni = FrameAlgebra.from_brackets(3, [(1, 3, 1, 1), (2, 3, 2, 1)])
    with pytest.raises(ValueError, match="unimodular"):
        variation_test(non_uni, [1, 1, 1], [1, 0, 0], (1, 1))
    with pytest.raises(ValueError, match="step"):
        variation_test(nil(), [1, 1, 1], [1, 0, 0], (1, 1), step=0)
    with pytest.raises(FloatingPointError):
        variation_test(nil(), [math.inf, 1, 1], [1, 0, 0], (1, 1))
    with pytest.raises(FloatingPointError):
        variation_test(nil(), [1e200, 1, 1], [1, 0, 0], (1, 1))


# -- same-sign scan -------------------------------------------------------------

@pytest.mark.parametrize("d", [(1, 2), (-1, -3), ("1/7", 5)])
def test_same_sign_zero_only(d):
    scan = same_sign_scan(nil(), d)
    assert scan.zero_only
    assert "only the zero field" in scan.describe()


def test_opposite_signs_do_not_give_zero_only():
    scan = scan_vertical_system(nil(), (1, -1))
    assert not scan.zero_only
    with pytest.raises(ValueError, match="delta1 \\* delta2 > 0"):
        same_sign_scan(nil(), (1, -1))


def test_same_sign_scan_errors_and_raw_report():
    with pytest.raises(ValueError, match="dimension"):
        same_sign_scan(FrameAlgebra.from_brackets(2, [(1, 2, 1, 1)]), (1, 1))
    # on Sol the components do not factor into definite cofactors
    scan = same_sign_scan(sol(), (1, 1))
    assert not scan.zero_only
    assert "raw system" in scan.describe()
