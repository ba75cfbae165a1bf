import itertools

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sesqui.frame import (
    Connection,
    FrameAlgebra,
    StructureError,
    abelian,
    connection_from_structure,
    curvature_from_connection,
    direct_sum_line,
    milnor,
    nil,
    preset,
    second_bianchi_violations,
    sol,
)
from sympy_oracle import oracle_for


def gamma_table(fa):
    return {(i, j, k): v for i, plane in enumerate(fa.connection.gamma)
            for j, row in enumerate(plane) for k, v in enumerate(row) if v}


def test_abelian_is_flat():
    fa = abelian(3)
    assert not gamma_table(fa)
    assert all(v == 0 for v in itertools.chain.from_iterable(
        itertools.chain.from_iterable(itertools.chain.from_iterable(fa.curvature.r))))


def test_sol_connection():
    # 0-based (i, j, k): nabla_{e_i} e_j has e_k-component
    assert gamma_table(sol()) == {(0, 0, 2): -1, (0, 2, 0): 1, (1, 1, 2): 1, (1, 2, 1): -1}


def test_sol_sectional_curvature():
    r = sol().curvature
    assert r.lowered(0, 2, 2, 0) == -1
    assert r.lowered(1, 2, 2, 1) == -1
    assert r.lowered(0, 1, 1, 0) == 1


@pytest.mark.parametrize("fa", [nil(), sol(), abelian(3), abelian(4), direct_sum_line(nil())], ids=repr)
def test_connection_and_curvature_invariants(fa):
    assert fa.connection.metric_violations() == []
    assert fa.connection.torsion_violations(fa) == []
    assert fa.curvature.symmetry_violations() == {"antisymmetry": [], "bianchi": [], "pair": []}
    assert second_bianchi_violations(fa.nabla_r) == []


@pytest.mark.parametrize("fa", [nil(), sol(), milnor(1, -2, 3)], ids=["nil", "sol", "milnor"])
def test_against_oracle(fa):
    orc = oracle_for(fa)
    m = fa.dim
    for i, j, k in itertools.product(range(m), repeat=3):
        assert sp.Rational(fa.connection.gamma[i][j][k]) == orc.gamma[i][j][k]
        for l in range(m):
            assert sp.Rational(fa.curvature.r[i][j][k][l]) == orc.R[i][j][k][l]
    # (nabla_{e_a} R)(e_i, e_j) e_k by the defining Leibniz expansion
    E = [orc.basis(i) for i in range(m)]
    for a, i, j, k in itertools.product(range(m), repeat=4):
        want = orc.nabla_curv(E[a], E[i], E[j], E[k])
        got = [sp.Rational(x) for x in fa.nabla_r[a][i][j][k]]
        assert got == want


small = st.integers(-3, 3)


@given(small, small, small)
def test_random_unimodular_symmetries(l1, l2, l3):
    fa = milnor(l1, l2, l3)
    assert fa.is_unimodular
    assert fa.curvature.symmetry_violations() == {"antisymmetry": [], "bianchi": [], "pair": []}
    assert fa.connection.metric_violations() == []
    assert second_bianchi_violations(fa.nabla_r) == []


@given(st.fractions(-2, 2, max_denominator=3), st.fractions(-2, 2, max_denominator=3))
def test_non_unimodular_symmetries(p, q):
    # [e_1, e_3] = p e_1, [e_2, e_3] = q e_2 is solvable for all p, q
    fa = FrameAlgebra.from_brackets(3, [(1, 3, 1, p), (2, 3, 2, q)])
    assert fa.is_unimodular == (p + q == 0)
    assert fa.curvature.symmetry_violations() == {"antisymmetry": [], "bianchi": [], "pair": []}


# -- structure validation ------------------------------------------------------

def test_from_brackets_completes_antisymmetry():
    fa = FrameAlgebra.from_brackets(3, [(1, 3, 2, "1")])
    assert fa.bracket(2, 0) == (0, -1, 0)
    assert fa == nil()


def test_conflicting_duplicate_entries():
    with pytest.raises(StructureError, match=r"\(1,3,2\)|\(3,1,2\)"):
        FrameAlgebra.from_brackets(3, [(1, 3, 2, 1), (3, 1, 2, 1)])
    FrameAlgebra.from_brackets(3, [(1, 3, 2, 1), (3, 1, 2, -1)])


def test_self_bracket_rejected():
    with pytest.raises(StructureError, match=r"\(2,2,1\)"):
        FrameAlgebra.from_brackets(3, [(2, 2, 1, 1)])


def test_raw_antisymmetry_violation_names_triple():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2] = 1  # [e_1, e_2] = e_3 without the partner
    with pytest.raises(StructureError, match=r"\(1,2,3\)"):
        FrameAlgebra(c)


def test_jacobi_violation():
    with pytest.raises(StructureError, match="Jacobi"):
        FrameAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 3, 1), (1, 3, 1, 1)])


@pytest.mark.parametrize("entry", [(0, 1, 2, 1), (1, 4, 2, 1), (1, 2, "3", 1)])
def test_bad_indices(entry):
    with pytest.raises(StructureError):
        FrameAlgebra.from_brackets(3, [entry])


def test_inconsistent_connection_rejected():
    fa = nil()
    wrong = connection_from_structure(sol())
    with pytest.raises(StructureError, match="inconsistent"):
        curvature_from_connection(fa, wrong)
    assert isinstance(wrong, Connection)


def test_presets():
    assert preset("nil") == nil()
    with pytest.raises(StructureError, match="unknown preset"):
        preset("sl2")
    assert nil().is_unimodular and sol().is_unimodular


def test_direct_sum_line_has_central_element():
    fa = direct_sum_line(nil())
    assert fa.dim == 4
    assert all(v == 0 for i in range(4) for v in fa.bracket(i, 3))
