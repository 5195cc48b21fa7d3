import pytest

from qderiv.autgroup import conj_aut
from qderiv.coloring import (NotAbelianTarget, brute_force_homs_diagram, brute_force_homs_finite,
                             enumerate_homs, enumerate_homs_diagram, enumerate_homs_finite,
                             hom_quandle)
from qderiv.diagram import builtin
from qderiv.quandle import (are_isomorphic, check_properties, dihedral, trivial, validate_table)

from conftest import ABELIAN_TARGETS, SMALL, TARGETS, small_diagrams

DIAGRAMS = small_diagrams()


def test_diagram_examples():
    assert len(enumerate_homs_diagram(builtin("3_1"), dihedral(3))) == 9
    assert len(enumerate_homs_diagram(builtin("3_1"), dihedral(15))) == 45
    assert len(enumerate_homs_diagram(builtin("3_1"), dihedral(11))) == 11
    assert len(enumerate_homs_diagram(builtin("4_1"), dihedral(11))) == 11


def test_finite_examples():
    assert len(enumerate_homs_finite(dihedral(3), dihedral(3))) == 9
    for X in TARGETS:
        assert len(enumerate_homs_finite(trivial(1), X)) == X.n
    assert len(enumerate_homs_finite(dihedral(3), trivial(2))) == 2


@pytest.mark.parametrize("name", list(DIAGRAMS))
def test_diagram_oracle(name):
    D = DIAGRAMS[name]
    for X in TARGETS:
        got = enumerate_homs(D, X)
        assert got == sorted(set(got))
        assert got == brute_force_homs_diagram(D, X)
        assert len(got) >= X.n


@pytest.mark.parametrize("Q", SMALL, ids=lambda q: f"n{q.n}")
def test_finite_oracle(Q):
    for X in TARGETS:
        assert enumerate_homs(Q, X) == brute_force_homs_finite(Q, X)


def test_hom_quandle_examples():
    X = dihedral(11)
    H, homs = hom_quandle(builtin("4_1"), X)
    assert are_isomorphic(H, X) is not None
    for A in ABELIAN_TARGETS:
        H, _ = hom_quandle(trivial(1), A)
        assert are_isomorphic(H, A) is not None
    H, _ = hom_quandle(builtin("3_1"), dihedral(3))
    r = check_properties(H)
    assert H.n == 9 and r.abelian and r.involutary
    with pytest.raises(NotAbelianTarget):
        hom_quandle(builtin("3_1"), conj_aut(dihedral(3)).quandle)


@pytest.mark.parametrize("name", list(DIAGRAMS))
def test_hom_quandles_are_abelian(name):
    for A in ABELIAN_TARGETS:
        H, homs = hom_quandle(DIAGRAMS[name], A)
        assert validate_table(H.table, one_based=False) == H
        assert check_properties(H).abelian
        # constants embed as a subquandle isomorphic to A
        const = [homs.index(tuple([a] * len(homs[0]))) for a in range(A.n)]
        for a in range(A.n):
            for b in range(A.n):
                assert H.table[const[a]][const[b]] == const[A.table[a][b]]


def test_parallel_colorings_identical():
    D, X = builtin("5_2"), dihedral(7)
    assert enumerate_homs(D, X, workers=3) == enumerate_homs(D, X)
