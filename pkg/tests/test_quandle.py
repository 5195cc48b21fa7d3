import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qderiv import quandle as Q
from qderiv.autgroup import conj_aut
from qderiv.quandle import (Q1Violation, Q2Violation, Q3Violation, EntryOutOfRange, abelian4,
                            are_isomorphic, canonical_table, check_properties, dihedral,
                            disjoint_union, relabel, swap3, takasaki, trivial, validate_table)

from conftest import SMALL, TARGETS, quandles, relabeled

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def test_valid_tables():
    assert validate_table(Q.ABELIAN4).n == 4
    assert validate_table([[1, 3, 1], [2, 2, 2], [3, 1, 3]]).n == 3


def test_q1_violation_witness():
    with pytest.raises(Q1Violation) as e:
        validate_table([[2, 1], [1, 2]])
    assert e.value.witness == (1,)
    assert e.value.axiom == "Q1"


def test_q2_violation_witness():
    with pytest.raises(Q2Violation) as e:
        validate_table([[1, 1, 1], [1, 2, 2], [3, 3, 3]])
    assert e.value.axiom == "Q2"
    assert e.value.witness[0] == 1


def test_q3_violation():
    # columns are bijections fixing the diagonal, but distributivity fails
    with pytest.raises(Q3Violation) as e:
        validate_table([[1, 3, 2], [2, 2, 1], [3, 1, 3]])
    assert e.value.witness == (1, 2, 3)


def test_entry_out_of_range_and_shape():
    with pytest.raises(EntryOutOfRange):
        validate_table([[1, 3], [2, 2]])
    with pytest.raises(Q.QuandleError):
        validate_table([[1, 1], [2]])
    with pytest.raises(Q.QuandleError):
        validate_table([])


def test_constructors():
    assert dihedral(3).to_one_based() == [[1, 3, 2], [3, 2, 1], [2, 1, 3]]
    assert trivial(2).to_one_based() == [[1, 1], [2, 2]]
    assert takasaki([4]) == dihedral(4)
    assert takasaki([2, 2]).n == 4
    assert Q.load_quandle(FIX / "x15.qm") == dihedral(15)
    assert Q.load_quandle(FIX / "x11.qm") == dihedral(11)
    with pytest.raises(ValueError):
        dihedral(0)
    with pytest.raises(ValueError):
        Q.affine(6, 2)


def test_left_inverse_examples():
    d3, d5 = dihedral(3), dihedral(5)
    assert d3.left_inverse(0, 1) + 1 == 3
    assert d5.left_inverse(1, 0) + 1 == 5
    for x in range(5):
        assert d5.left_inverse(x, x) == x


@given(quandles())
def test_left_inverse_property(q):
    for x, y in itertools.product(range(q.n), repeat=2):
        assert q.left_inverse(q.op(x, y), y) == x
        assert q.op(q.left_inverse(x, y), y) == x


def test_property_examples():
    r = check_properties(abelian4())
    assert r.abelian and not r.commutative
    r = check_properties(dihedral(3))
    assert r.abelian and r.commutative
    r = check_properties(trivial(2))
    assert r.abelian and not r.commutative and r.trivial
    assert not check_properties(conj_aut(dihedral(3)).quandle).abelian


@pytest.mark.parametrize("n", range(1, 21))
def test_dihedral_families(n):
    r = check_properties(dihedral(n))
    assert r.abelian and r.involutary
    if n % 2:
        assert r.flat


def test_flat_and_connected():
    # a non-flat example: Conj(S_3) translations do not commute
    assert not Q.is_flat(conj_aut(dihedral(3)).quandle)
    assert Q.is_connected(dihedral(3))
    assert not Q.is_connected(dihedral(4))
    assert not Q.is_connected(swap3())


def brute_abelian(q):
    t = q.table
    return all(t[t[x][y]][t[z][w]] == t[t[x][z]][t[y][w]]
               for x, y, z, w in itertools.product(range(q.n), repeat=4))


def brute_flat(q):
    gens = [tuple(q.table[q.table[v][y]][x] for v in range(q.n))
            for x in range(q.n) for y in range(q.n)]
    return all(tuple(a[b[v]] for v in range(q.n)) == tuple(b[a[v]] for v in range(q.n))
               for a in gens for b in gens)


@pytest.mark.parametrize("q", TARGETS, ids=lambda q: f"n{q.n}")
def test_properties_match_brute_force(q):
    r = check_properties(q)
    assert r.abelian == brute_abelian(q)
    assert r.flat == brute_flat(q)
    assert r.commutative == all(q.table[x][y] == q.table[y][x] for x in range(q.n) for y in range(q.n))
    assert r.involutary == all(q.table[q.table[x][y]][y] == x for x in range(q.n) for y in range(q.n))
    if r.trivial:
        assert r.abelian


def test_disjoint_union():
    assert disjoint_union(trivial(1), trivial(1)) == trivial(2)
    u = disjoint_union(dihedral(3), dihedral(3))
    assert u.n == 6 and not check_properties(u).abelian
    assert disjoint_union(dihedral(3), abelian4()).n == 7


def test_isomorphism_examples():
    assert are_isomorphic(dihedral(3), trivial(3)) is None
    assert are_isomorphic(dihedral(15), Q.load_quandle(FIX / "x15.qm")) is not None
    assert are_isomorphic(dihedral(4), takasaki([2, 2])) is None
    assert are_isomorphic(dihedral(3), dihedral(4)) is None


@given(relabeled())
def test_isomorphism_under_relabel(data):
    q, g, r = data
    m = are_isomorphic(q, r)
    assert m is not None
    assert all(m[q.table[x][y]] == r.table[m[x]][m[y]] for x in range(q.n) for y in range(q.n))
    back = are_isomorphic(r, q)
    assert back is not None
    assert are_isomorphic(q, q) is not None
    assert canonical_table(q) == canonical_table(r)


def test_all_quandles_counts():
    # OEIS A181769: 1, 1, 3, 7 quandles of orders 1..4 up to isomorphism
    assert [len(Q.all_quandles(n)) for n in range(1, 5)] == [1, 1, 3, 7]
    for a, b in itertools.combinations(SMALL, 2):
        assert are_isomorphic(a, b) is None


def test_canonical_table_distinguishes():
    assert canonical_table(dihedral(4)) != canonical_table(takasaki([2, 2]))
    assert canonical_table(dihedral(9)) is None


def test_file_round_trips(tmp_path):
    q = abelian4()
    for name in ("a.qm", "a.json"):
        p = tmp_path / name
        Q.save_quandle(q, p)
        assert Q.load_quandle(p) == q
    assert Q.load_quandle(FIX / "abelian4.qm") == q
    obj = json.loads((tmp_path / "a.json").read_text())
    assert obj == {"n": 4, "table": [list(r) for r in Q.ABELIAN4]}
    with pytest.raises(Q.QuandleError):
        Q.parse_matrix_text("3\n1 2 3")
    with pytest.raises(Q.QuandleError):
        Q.from_json({"n": 3, "table": Q.ABELIAN4})


@given(st.integers(1, 12), st.integers(1, 12))
def test_takasaki_products_are_quandles(a, b):
    q = takasaki([a, b]) if a * b <= 36 else takasaki([a])
    assert check_properties(q).abelian


def test_relabel_is_iso():
    q = swap3()
    r = relabel(q, (2, 0, 1))
    assert validate_table(r.table, one_based=False) == r
