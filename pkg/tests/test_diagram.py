import json

import pytest

from qderiv.autgroup import conj_aut
from qderiv.coloring import enumerate_homs
from qderiv.diagram import (BUILTIN_PD, DiagramError, arcs_and_relations, builtin, from_json,
                            load_diagram, parse_gauss, parse_pd, r1_add, r2_add, r2_candidates)
from qderiv.quandle import dihedral, takasaki, trivial

from conftest import TARGETS

ORDER6 = [dihedral(6), trivial(6), takasaki([2, 3]), conj_aut(dihedral(3)).quandle]
TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"


def count(D, X):
    return len(enumerate_homs(D, X))


def test_parse_pd_trefoil():
    D = parse_pd(TREFOIL)
    assert D.crossing_count == 3 and len(D.edges) == 6
    P = arcs_and_relations(D)
    assert P.arc_count == 3 and len(P.relations) == 3
    assert len({s for *_, s in P.relations}) == 1


def test_parse_pd_variants():
    assert parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").crossings == parse_pd(TREFOIL).crossings
    assert parse_pd(json.dumps([[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]])).crossings == \
        parse_pd(TREFOIL).crossings
    D = parse_pd("", unknot=True)
    assert D.crossing_count == 0 and arcs_and_relations(D).arc_count == 1


@pytest.mark.parametrize("bad", ["X(1,2,3)", "", "X(1,2,3,4)", "X(1,4,2,5) X(3,6,4,1)",
                                 "X(1,4,2,5) junk X(3,6,4,1) X(5,2,6,3)", "X(a,b,c,d)",
                                 "X(1,4,2,5) X(3,6,4,1) V(5,2,6,3)"])
def test_parse_pd_errors(bad):
    with pytest.raises(DiagramError):
        parse_pd(bad)


def test_parse_gauss():
    D = parse_gauss("O1- U2- O3- U1- O2- U3-")
    assert arcs_and_relations(D).arc_count == 3
    assert count(D, dihedral(3)) == 9
    K = parse_gauss("O1+ U1+")
    assert K.crossing_count == 1 and arcs_and_relations(K).arc_count == 1
    for bad in ("O1+ U2-", "O1+ U1-", "O1+ O1+", "Q1+ U1+", ""):
        with pytest.raises(DiagramError):
            parse_gauss(bad)


def test_arcs_and_signs():
    assert arcs_and_relations(builtin("unknot")).arc_count == 1
    assert arcs_and_relations(builtin("unknot")).relations == ()
    F = builtin("4_1")
    assert sorted(F.signs) == [-1, -1, 1, 1] and F.writhe == 0
    for name in BUILTIN_PD:
        D = builtin(name)
        assert arcs_and_relations(D).arc_count == D.crossing_count
        assert D.is_planar()
        assert len(D.components()) == 1


@pytest.mark.parametrize("name,p,expected", [("3_1", 3, 9), ("4_1", 5, 25), ("5_1", 5, 25),
                                             ("5_2", 7, 49), ("3_1", 5, 5), ("4_1", 3, 3),
                                             ("5_2", 3, 3)])
def test_builtin_fox_colorings(name, p, expected):
    assert count(builtin(name), dihedral(p)) == expected


def test_unknot_colors_freely():
    for X in TARGETS:
        assert count(builtin("unknot"), X) == X.n
    with pytest.raises(DiagramError):
        builtin("9_42")


def test_serialisation_round_trips(tmp_path):
    for name in list(BUILTIN_PD) + ["2_1"]:
        D = builtin(name)
        assert parse_pd(D.to_pd(), allow_virtual=True) == D
        assert from_json(D.to_json()) == D
        p = tmp_path / "d.json"
        p.write_text(json.dumps(D.to_json()))
        assert load_diagram(str(p)) == D


def test_relations_solvable():
    X = dihedral(7)
    for name in BUILTIN_PD:
        for z, x, y, s in arcs_and_relations(builtin(name)).relations:
            for a in range(X.n):
                for b in range(X.n):
                    assert X.op(X.left_inverse(a, b), b) == a


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2"])
def test_r1_invariance(name):
    D = builtin(name)
    base = {X: count(D, X) for X in TARGETS + ORDER6}
    for e in D.edges:
        for sign in (1, -1):
            for side in ("left", "right"):
                E = r1_add(D, e, sign, side)
                assert E.crossing_count == D.crossing_count + 1
                assert E.is_planar()
                assert sorted(E.signs) == sorted(D.signs + (sign,))
                for X, c in base.items():
                    assert count(E, X) == c


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2"])
def test_r2_invariance(name):
    D = builtin(name)
    base = {X: count(D, X) for X in TARGETS + ORDER6}
    for e1, e2 in r2_candidates(D):
        E = r2_add(D, e1, e2)
        assert E.crossing_count == D.crossing_count + 2
        assert E.is_planar()
        assert sorted(E.signs) == sorted(D.signs + (1, -1))
        for X, c in base.items():
            assert count(E, X) == c


def test_moves_on_unknot():
    U = builtin("unknot")
    K = r1_add(U, 1, 1)
    assert K.crossing_count == 1
    T = r2_add(U, 1, 2)
    assert T.crossing_count == 2 and T.is_planar()
    for X in TARGETS:
        assert count(K, X) == X.n
        assert count(T, X) == X.n


def test_move_errors():
    D = builtin("3_1")
    with pytest.raises(DiagramError):
        r1_add(D, 99)
    with pytest.raises(DiagramError):
        r2_add(D, 1, 1)
    with pytest.raises(DiagramError):
        r2_add(D, 1, 99)
