import random
import warnings
from fractions import Fraction

import pytest

from sesqui.algebra import PolyRing
from sesqui.cases import (
    NIL_FAMILIES,
    NIL_RING,
    DegenerateExponentsWarning,
    derive_sol_ode,
    nil_systems,
    rational_sqrt,
    verify_sol_solution,
    verify_nil_families,
)
from sesqui.engine import DeltaPair
from sesqui.fields import VectorFieldExpr, tau
from sesqui.frame import sol

D = PolyRing(["d1", "d2"])


def coeffs(op):
    return [str(c) for c in op.coefficients]


# -- Sol ---------------------------------------------------------------------------

def test_sol_ode_symbolic():
    op = derive_sol_ode()
    assert op.coefficients == (D.parse("2*d1 + 4*d2"), D.zero, D.parse("-d1 - 4*d2"), D.zero, D.parse("d2"))
    assert op.orientation == "condition"


def test_sol_ode_specialisations():
    assert coeffs(derive_sol_ode().specialise((0, 1))) == ["4", "0", "-4", "0", "1"]
    assert coeffs(derive_sol_ode().specialise((1, 0))) == ["2", "0", "-1", "0", "0"]
    assert coeffs(derive_sol_ode((1, 0))) == ["2", "0", "-1", "0", "0"]


def test_sol_harmonic_case_matches_tension_field():
    J = PolyRing([f"f{k}" for k in range(5)])
    X = VectorFieldExpr(sol().jet(J, 2), [J.zero, J.zero, J.symbol("f0")])
    vertical = -tau(X).vertical
    assert vertical[2] == J.parse("2*f0 - f2")


def test_sol_ode_independent_of_truncation():
    assert derive_sol_ode(order=5).coefficients == derive_sol_ode().coefficients
    assert derive_sol_ode(order=7).coefficients == derive_sol_ode().coefficients
    with pytest.raises(ValueError):
        derive_sol_ode(order=3)


def test_sol_solution_examples():
    assert verify_sol_solution((1, 1))
    with pytest.warns(DegenerateExponentsWarning):
        assert verify_sol_solution((0, 1))
    with pytest.raises(ValueError, match="not positive"):
        verify_sol_solution((-3, 1))
    with pytest.raises(ValueError):
        verify_sol_solution((1, 0))


def test_sol_solution_with_selected_constants():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert verify_sol_solution(("1/2", "3"), c=(0, 0, 2, -1))
        assert verify_sol_solution((-5, -1), c=(1, 0, 0, 1))


def test_vieta_random_deltas():
    rng = random.Random(7)
    op = derive_sol_ode()
    seen = 0
    while seen < 10:
        d1 = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        d2 = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        if d2 == 0:
            continue
        seen += 1
        c0, c1, c2 = op.characteristic(DeltaPair(d1, d2))
        mu1, mu2 = Fraction(2), (d1 + 2 * d2) / d2
        assert mu1 + mu2 == -c1 / c2
        assert mu1 * mu2 == c0 / c2


# -- Nil ---------------------------------------------------------------------------

def test_nil_vertical_system_matches_printed_form():
    s = nil_systems()
    assert s.vertical_system == (
        NIL_RING.parse("a*(8*d1 + d2*(4 + b^2))"),
        NIL_RING.parse("b*(8*d1 + d2*(4 + a^2 + g^2))"),
        NIL_RING.parse("g*(8*d1 + d2*(4 + b^2))"),
    )


def test_nil_horizontal_system_computed_form():
    s = nil_systems()
    cof = "(4*d1 + d2*(8 + 2*a^2 + 2*g^2 - b^2))"
    assert s.horizontal_system == (NIL_RING.parse(f"b*g*{cof}"), NIL_RING.parse(f"a*b*{cof}"))


def test_nil_systems_specialised():
    s = nil_systems((1, 1))
    assert s.vertical_system[1] == NIL_RING.parse("b*(12 + a^2 + g^2)")


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(3)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_families_at_unit_t():
    rep = verify_nil_families((1, -1))
    assert rep.t == 1
    assert rep.all_vector_fields
    assert {m.family for m in rep.regime_members} == {"diag-23", "diag-12", "circle-C1", "circle-C2"}
    assert all(not m.vector_field for m in rep.members if not m.in_regime)
    (control,) = rep.controls
    assert control.point == (2, 0, 2)
    assert control.vertical_system[0] == 8
    assert rep.controls_fail


def test_half_relation_families_are_maps():
    rep = verify_nil_families((1, -2))
    assert rep.t == 0
    names = {m.family for m in rep.members}
    assert names == {"axis-1", "axis-2", "axis-3", "plane-13"}
    assert all(m.is_map and m.agrees_with_stated_map for m in rep.members)
    assert rep.for_family("plane-13")[0].point == (5, 0, 7)


def test_vertical_only_counterexample():
    rep = verify_nil_families(("5/2", -1), ["diag-12"])
    assert rep.t == 2
    member = next(m for m in rep.members if m.point == (4, 4, 0))
    assert member.vector_field and not member.is_map
    assert not member.stated_map_holds


def test_circle_members_at_another_scale():
    rep = verify_nil_families((5, -2), ["circle-C1", "circle-C2"])
    assert rep.t == 2
    assert len(rep.members) == 8 and rep.all_vector_fields


def test_family_input_errors():
    with pytest.raises(ValueError, match="rational square"):
        verify_nil_families((2, -1))
    with pytest.raises(ValueError, match="unknown family"):
        verify_nil_families((1, -1), ["spiral"])
    with pytest.raises(ValueError):
        verify_nil_families((1, 0))


def test_family_constraints_hold_at_samples():
    d = DeltaPair(1, -1)
    for fam in NIL_FAMILIES.values():
        if not fam.regime(d):
            continue
        for pt in fam.members(Fraction(1)):
            vals = dict(zip("abg", pt), d1=d.delta1, d2=d.delta2)
            assert all(p.substitute(vals) == 0 for p in fam.constraint_polys()), (fam.name, pt)
