"""Quandle colorings of diagrams and homomorphisms between finite quandles."""
from __future__ import annotations

from typing import Optional, Sequence, Union

from .diagram import ArcPresentation, KnotDiagram, arcs_and_relations
from .quandle import FiniteQuandle, is_abelian, validate_table
from .search import Problem, Shift, Twisted, solve

Source = Union[KnotDiagram, ArcPresentation, FiniteQuandle]
Coloring = tuple[int, ...]


class NotAbelianTarget(ValueError):
    pass


def presentation(source) -> Union[ArcPresentation, FiniteQuandle]:
    if isinstance(source, KnotDiagram):
        return arcs_and_relations(source)
    return source


def source_size(source) -> int:
    src = presentation(source)
    return src.n if isinstance(src, FiniteQuandle) else src.arc_count


def build_problem(source, X: FiniteQuandle, twist: Optional[Sequence[tuple[int, ...]]] = None,
                  shift_perms: Optional[dict] = None, domains=None) -> Problem:
    """Constraint problem for maps ``source -> X``.

    ``twist[s]`` is the automorphism attached to source element/arc s (the
    action value); None means untwisted, i.e. plain homomorphisms.
    ``shift_perms[power]`` instantiates virtual-crossing relations.
    """
    src = presentation(source)
    cons = []
    shifts = []
    if isinstance(src, FiniteQuandle):
        nvars = src.n
        for a in range(nvars):
            row = src.table[a]
            perm = twist[a] if twist is not None else None
            for b in range(nvars):
                cons.append(Twisted(row[b], a, b, perm))
    else:
        nvars = src.arc_count
        for z, x, y, sign in src.relations:
            if sign == 1:
                cons.append(Twisted(z, x, y, twist[x] if twist is not None else None))
            else:
                cons.append(Twisted(x, z, y, twist[z] if twist is not None else None))
        for out, inn, power in src.shifts:
            if shift_perms is None:
                raise ValueError("diagram has virtual crossings; a virtual target is required")
            shifts.append(Shift(out, inn, shift_perms[power]))
    return Problem(nvars, X.table, cons, shifts, domains)


def enumerate_homs_diagram(D, X: FiniteQuandle, budget: Optional[int] = None,
                           workers: int = 1) -> list[Coloring]:
    """All colorings of the arcs of D by X, lexicographically ordered."""
    return solve(build_problem(D, X), budget, workers)


def enumerate_homs_finite(Q: FiniteQuandle, X: FiniteQuandle, budget: Optional[int] = None,
                          workers: int = 1) -> list[Coloring]:
    return solve(build_problem(Q, X), budget, workers)


def enumerate_homs(source, X: FiniteQuandle, **kw) -> list[Coloring]:
    src = presentation(source)
    if isinstance(src, FiniteQuandle):
        return enumerate_homs_finite(src, X, **kw)
    return enumerate_homs_diagram(src, X, **kw)


def brute_force_homs_finite(Q: FiniteQuandle, X: FiniteQuandle) -> list[Coloring]:
    """Check every function Q -> X against f(x*y) = f(x)*f(y)."""
    import itertools

    out = []
    for f in itertools.product(range(X.n), repeat=Q.n):
        if all(f[Q.table[a][b]] == X.table[f[a]][f[b]] for a in range(Q.n) for b in range(Q.n)):
            out.append(f)
    return out


def brute_force_homs_diagram(D, X: FiniteQuandle) -> list[Coloring]:
    import itertools

    pres = presentation(D)
    out = []
    for f in itertools.product(range(X.n), repeat=pres.arc_count):
        ok = True
        for z, x, y, s in pres.relations:
            if s == 1 and f[z] != X.table[f[x]][f[y]]:
                ok = False
                break
            if s == -1 and f[x] != X.table[f[z]][f[y]]:
                ok = False
                break
        if ok:
            out.append(f)
    return out


def pointwise_table(maps: Sequence[Coloring], A: FiniteQuandle) -> FiniteQuandle:
    """Operation table of a set of maps under (f*g)(q) = f(q)*g(q)."""
    index = {m: i for i, m in enumerate(maps)}
    rows = []
    t = A.table
    for f in maps:
        row = []
        for g in maps:
            h = tuple(t[a][b] for a, b in zip(f, g))
            if h not in index:
                from .derivations import ClosureViolation

                raise ClosureViolation(f, g)
            row.append(index[h])
        rows.append(row)
    return validate_table(rows, one_based=False)


def hom_quandle(source, A: FiniteQuandle, homs: Optional[list[Coloring]] = None) -> tuple[FiniteQuandle, list[Coloring]]:
    """Hom(source, A) under the pointwise operation; A must be abelian."""
    if not is_abelian(A):
        raise NotAbelianTarget("the hom quandle needs an abelian target")
    if homs is None:
        homs = enumerate_homs(source, A)
    return pointwise_table(homs, A), homs
