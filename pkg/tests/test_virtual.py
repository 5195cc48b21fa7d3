import itertools

import pytest

from qderiv.autgroup import automorphism_group, compose, identity, inverse, parse_cycles, perm_order
from qderiv.coloring import enumerate_homs, enumerate_homs_finite
from qderiv.derivations import (conj_aut_cached, derivation_polynomial, enumerate_actions,
                                enumerate_derivations, trivial_action)
from qderiv.diagram import builtin, r2_add, r2_candidates
from qderiv.quandle import abelian4, dihedral, swap3, trivial
from qderiv.virtual import (ImageEscape, NotAnAutomorphism, VirtualQuandle, brute_force_virtual_homs_diagram,
                            brute_force_virtual_homs_finite, enumerate_virtual_actions_diagram,
                            enumerate_virtual_actions_finite, enumerate_virtual_derivations_diagram,
                            enumerate_virtual_derivations_finite, enumerate_virtual_homs_diagram,
                            enumerate_virtual_homs_finite, gamma_map, gamma_order_bound, hat,
                            intertwines, is_virtual_action, parse_virtual, plain,
                            validate_virtual, virtual_arcs_and_relations,
                            virtual_derivation_polynomial, virtual_derivation_quandle)

from conftest import ABELIAN_TARGETS, SMALL

SHIFT3 = (1, 2, 0)
VT = "X(1,4,2,5) X(3,6,4,1) V(5,2,6,3)"


def virtual_pairs(Q):
    return [validate_virtual(Q, a) for a in automorphism_group(Q).elements]


def test_validate_virtual():
    d3 = dihedral(3)
    assert validate_virtual(d3, SHIFT3).alpha == SHIFT3
    assert plain(d3) == VirtualQuandle(d3, identity(3))
    with pytest.raises(NotAnAutomorphism) as e:
        validate_virtual(swap3(), parse_cycles("(1,2,3)", 3))
    assert e.value.witness is not None


def test_virtual_hom_examples():
    s = validate_virtual(dihedral(3), SHIFT3)
    homs = enumerate_virtual_homs_finite(s, s)
    assert homs == [(b, (b + 1) % 3, (b + 2) % 3) for b in range(3)]
    assert enumerate_virtual_homs_finite(s, plain(dihedral(3))) == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
    for Q in SMALL[:6]:
        for X in (dihedral(3), abelian4()):
            assert enumerate_virtual_homs_finite(plain(Q), plain(X)) == enumerate_homs_finite(Q, X)


@pytest.mark.parametrize("Q", SMALL, ids=lambda q: f"n{q.n}")
def test_virtual_finite_oracle(Q):
    for Qa in virtual_pairs(Q):
        for X in (dihedral(3), trivial(2), swap3(), abelian4()):
            for Xb in virtual_pairs(X):
                homs = enumerate_virtual_homs_finite(Qa, Xb)
                assert homs == brute_force_virtual_homs_finite(Qa, Xb)
                assert all(intertwines(f, Qa.alpha, Xb.alpha) for f in homs)


def test_centraliser_actions():
    Q = dihedral(3)
    for X in (dihedral(3), abelian4(), dihedral(5)):
        G = automorphism_group(X).elements
        for beta in G:
            Xb, Qa = validate_virtual(X, beta), validate_virtual(Q, SHIFT3)
            acts = {a.values for a in enumerate_virtual_actions_finite(Qa, Xb)}
            C = conj_aut_cached(X)
            for g in G:
                if compose(g, beta) == compose(beta, g):
                    assert (C.index(g),) * 3 in acts


def test_symmetry_action_when_alpha_involutive():
    for Q in (dihedral(3), dihedral(5), abelian4(), swap3()):
        C = conj_aut_cached(Q)
        S = tuple(C.index(tuple(Q.table[v][q] for v in range(Q.n))) for q in range(Q.n))
        for alpha in automorphism_group(Q).elements:
            if compose(alpha, alpha) != identity(Q.n):
                continue
            Qa = validate_virtual(Q, alpha)
            acts = enumerate_virtual_actions_finite(Qa, Qa)
            assert S in {a.values for a in acts}


def test_virtual_derivations_finite():
    for Q in SMALL[:6]:
        for X in (dihedral(3), abelian4()):
            acts = enumerate_actions(Q, X)
            for a in acts:
                got = enumerate_virtual_derivations_finite(plain(Q), plain(X), a)
                assert got == enumerate_derivations(Q, X, a)
            for alpha in automorphism_group(Q).elements:
                for beta in automorphism_group(X).elements:
                    Qa, Xb = VirtualQuandle(Q, alpha), VirtualQuandle(X, beta)
                    triv = trivial_action(Q, X)
                    assert enumerate_virtual_derivations_finite(Qa, Xb, triv) == \
                        enumerate_virtual_homs_finite(Qa, Xb)
                    for a in enumerate_virtual_actions_finite(Qa, Xb):
                        assert is_virtual_action(Qa, Xb, a)


def test_gamma():
    for Q in (dihedral(3), abelian4()):
        for X in (dihedral(3), dihedral(5), abelian4()):
            for alpha in automorphism_group(Q).elements:
                for beta in automorphism_group(X).elements:
                    Qa, Xb = VirtualQuandle(Q, alpha), VirtualQuandle(X, beta)
                    for a in enumerate_virtual_actions_finite(Qa, Xb):
                        d = enumerate_virtual_derivations_finite(Qa, Xb, a)
                        if not d:
                            continue
                        g = gamma_map(d, alpha, beta)
                        assert gamma_order_bound(alpha, beta) % perm_order(g) == 0
                        V = virtual_derivation_quandle(d, Xb, alpha)
                        q = V.quandle
                        assert all(g[q.table[i][j]] == q.table[g[i]][g[j]]
                                   for i in range(q.n) for j in range(q.n))
                        if alpha == identity(Q.n) and beta == identity(X.n):
                            assert g == identity(len(d))


def test_gamma_escape():
    with pytest.raises(ImageEscape):
        gamma_map([(0, 1, 2)], identity(3), SHIFT3)


def test_hat():
    b = SHIFT3
    g = parse_cycles("(1,2)", 3)
    assert hat(b)(g) == compose(inverse(b), compose(g, b))
    assert hat(b, -1)(hat(b, 1)(g)) == g
    assert hat(b, 0)(g) == g


def test_virtual_trefoil():
    D = parse_virtual(VT)
    assert D == builtin("2_1")
    pres = virtual_arcs_and_relations(D)
    assert len(pres.shifts) == 2 and len(pres.relations) == 2
    p = virtual_derivation_polynomial(D, plain(dihedral(3)))
    assert str(p) == "3 + 2u + 3u^2"


def brute_virtual_derivations(D, Xb, auts):
    pres = virtual_arcs_and_relations(D)
    t, beta = Xb.quandle.table, Xb.alpha
    checks = [(z, x, y) if s == 1 else (x, z, y) for z, x, y, s in pres.relations]
    checks += [(a, a, a) for a in range(pres.arc_count)]
    out = []
    for f in itertools.product(range(Xb.n), repeat=pres.arc_count):
        if all(f[o] == t[f[l]][auts[l][f[r]]] for o, l, r in checks) and \
                all(f[o] == _pow(beta, k)[f[i]] for o, i, k in pres.shifts):
            out.append(f)
    return out


def _pow(p, k):
    out = identity(len(p))
    for _ in range(abs(k)):
        out = compose(p if k > 0 else inverse(p), out)
    return out


def diagram_oracle(D, X):
    for beta in automorphism_group(X).elements:
        Xb = VirtualQuandle(X, beta)
        assert enumerate_virtual_homs_diagram(D, Xb) == brute_force_virtual_homs_diagram(D, Xb)
        C = conj_aut_cached(X)
        acts = enumerate_virtual_actions_diagram(D, Xb)
        brute = brute_force_virtual_homs_diagram(D, VirtualQuandle(
            C.quandle, tuple(C.index(hat(beta)(g)) for g in C.labels)))
        assert [a.values for a in acts] == brute
        for a in acts:
            assert enumerate_virtual_derivations_diagram(D, Xb, a) == \
                brute_virtual_derivations(D, Xb, a.automorphisms)


@pytest.mark.parametrize("X", [dihedral(3), abelian4(), swap3(), trivial(2)], ids=str)
def test_virtual_diagram_oracle(X):
    diagram_oracle(builtin("2_1"), X)


def test_vr2_invariance():
    D = builtin("2_1")
    for X in (dihedral(3), abelian4(), dihedral(5)):
        for beta in automorphism_group(X).elements:
            Xb = VirtualQuandle(X, beta)
            base = (len(enumerate_virtual_homs_diagram(D, Xb)), virtual_derivation_polynomial(D, Xb))
            for e1, e2 in r2_candidates(D):
                E = r2_add(D, e1, e2, virtual=True)
                assert (len(enumerate_virtual_homs_diagram(E, Xb)),
                        virtual_derivation_polynomial(E, Xb)) == base


@pytest.mark.parametrize("name", ["unknot", "3_1", "4_1"])
def test_reduction_to_classical(name):
    D = builtin(name)
    for X in ABELIAN_TARGETS[:8] + [swap3(), dihedral(5)]:
        Xb = plain(X)
        assert enumerate_virtual_homs_diagram(D, Xb) == enumerate_homs(D, X)
        assert virtual_derivation_polynomial(D, Xb) == derivation_polynomial(D, X)
        acts = enumerate_virtual_actions_diagram(D, Xb)
        assert acts == enumerate_actions(D, X)
        for a in acts:
            assert enumerate_virtual_derivations_diagram(D, Xb, a) == enumerate_derivations(D, X, a)
    for beta in automorphism_group(dihedral(3)).elements:
        # no virtual crossings: beta never enters
        assert enumerate_virtual_homs_diagram(D, VirtualQuandle(dihedral(3), beta)) == \
            enumerate_homs(D, dihedral(3))


def test_finite_polynomial_reduction():
    for Q in SMALL[:6]:
        assert virtual_derivation_polynomial(Q, plain(dihedral(3))) == derivation_polynomial(Q, dihedral(3))


def test_classical_value_through_virtual():
    assert str(virtual_derivation_polynomial(builtin("4_1"), plain(dihedral(3)))) == "3 + 2u + 3u^2"
