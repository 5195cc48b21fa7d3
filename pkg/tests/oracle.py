"""Exhaustive reference enumerators, independent of the search engine.

Assignments are extended one variable at a time; a partial assignment is
discarded only once every variable of some constraint is assigned and the
constraint fails. Surviving rows come out in lexicographic order.
"""
import numpy as np


def staged(n, m, checks=(), domains=None):
    """Rows of range(n)^m passing every (vars, pred) check; pred maps the
    columns named in vars to a boolean mask."""
    rows = np.zeros((1, 0), dtype=np.int64)
    for k in range(m):
        vals = np.arange(n) if domains is None else np.asarray(domains[k], dtype=np.int64)
        rows = np.hstack([np.repeat(rows, len(vals), axis=0), np.tile(vals, len(rows))[:, None]])
        for vs, pred in checks:
            if max(vs) == k and len(rows):
                rows = rows[pred(*(rows[:, v] for v in vs))]
    return [tuple(int(x) for x in r) for r in rows]


def twisted(T, o, l, r, perm=None):
    T = np.asarray(T)
    P = None if perm is None else np.asarray(perm)
    if P is None:
        return ((o, l, r), lambda a, b, c: a == T[b, c])
    return ((o, l, r), lambda a, b, c: a == T[b, P[c]])


def shift(o, i, perm):
    P = np.asarray(perm)
    return ((o, i), lambda a, b: a == P[b])


def relation_triples(pres):
    return [(z, x, y) if s == 1 else (x, z, y) for z, x, y, s in pres.relations]


def diagram_homs(pres, T, shift_perms=None):
    n = len(T)
    checks = [twisted(T, o, l, r) for o, l, r in relation_triples(pres)]
    checks += [shift(o, i, shift_perms[k]) for o, i, k in pres.shifts] if pres.shifts else []
    return staged(n, pres.arc_count, checks)


def diagram_derivations(pres, T, auts, shift_perms=None):
    n = len(T)
    checks = [twisted(T, o, l, r, auts[l]) for o, l, r in relation_triples(pres)]
    checks += [twisted(T, a, a, a, auts[a]) for a in range(pres.arc_count)]
    checks += [shift(o, i, shift_perms[k]) for o, i, k in pres.shifts] if pres.shifts else []
    return staged(n, pres.arc_count, checks)


def finite_homs(Q, T, auts=None):
    n, m = len(T), Q.n
    checks = [twisted(T, Q.table[a][b], a, b, None if auts is None else auts[a])
              for a in range(m) for b in range(m)]
    return staged(n, m, checks)
