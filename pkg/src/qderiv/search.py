"""Backtracking search for assignments satisfying quandle-style constraints.

Every enumeration in the package (colorings, homomorphisms, actions,
derivations and their virtual variants) reduces to the same problem:
assign a value in a finite quandle X to each variable so that

    twisted:  v[out] = v[left] * perm[v[right]]     (perm fixed per constraint)
    shift:    v[out] = perm[v[src]]

hold, where perm is a bijection of X (identity when omitted).
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the search finished."""


@dataclass(frozen=True)
class Twisted:
    out: int
    left: int
    right: int
    perm: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class Shift:
    out: int
    src: int
    perm: tuple[int, ...]


@dataclass
class Problem:
    nvars: int
    table: tuple[tuple[int, ...], ...]
    twisted: list[Twisted] = field(default_factory=list)
    shifts: list[Shift] = field(default_factory=list)
    domains: Optional[list[list[int]]] = None
    order: Optional[list[int]] = None

    @property
    def n(self) -> int:
        return len(self.table)


def _linv(table):
    n = len(table)
    out = [[0] * n for _ in range(n)]
    for z in range(n):
        for y in range(n):
            out[table[z][y]][y] = z
    return out


def _inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def satisfies(problem: Problem, vals: Sequence[int]) -> bool:
    """Direct check of every constraint on a full assignment."""
    t = problem.table
    for c in problem.twisted:
        r = vals[c.right] if c.perm is None else c.perm[vals[c.right]]
        if vals[c.out] != t[vals[c.left]][r]:
            return False
    for s in problem.shifts:
        if vals[s.out] != s.perm[vals[s.src]]:
            return False
    if problem.domains is not None:
        for v, dom in zip(vals, problem.domains):
            if v not in dom:
                return False
    return True


def brute_force(problem: Problem) -> list[tuple[int, ...]]:
    """Reference enumeration over the full product space."""
    doms = problem.domains or [range(problem.n)] * problem.nvars
    return sorted(vals for vals in itertools.product(*doms) if satisfies(problem, vals))


def default_order(problem: Problem) -> list[int]:
    """Greedy branching order: each next variable is the one whose assignment
    lets propagation fix the most further variables (ties: degree, index).

    Variables already fixed by earlier choices stay in place; the search
    skips them at no cost.
    """
    deg = [0] * problem.nvars
    for c in problem.twisted:
        for v in {c.out, c.left, c.right}:
            deg[v] += 1
    for s in problem.shifts:
        deg[s.out] += 1
        deg[s.src] += 1

    def closure(known):
        known = set(known)
        changed = True
        while changed:
            changed = False
            for c in problem.twisted:
                if c.right in known:
                    if c.left in known and c.out not in known:
                        known.add(c.out)
                        changed = True
                    elif c.out in known and c.left not in known:
                        known.add(c.left)
                        changed = True
            for s in problem.shifts:
                if (s.out in known) != (s.src in known):
                    known.update((s.out, s.src))
                    changed = True
        return known

    order: list[int] = []
    known: set = set()
    while len(known) < problem.nvars:
        free = [v for v in range(problem.nvars) if v not in known]
        best = max(free, key=lambda v: (len(closure(known | {v})), deg[v], -v))
        new = closure(known | {best})
        order.append(best)
        order += sorted(new - known - {best})
        known = new
    return order


class _Solver:
    def __init__(self, problem: Problem, budget: Optional[int]):
        self.p = problem
        n = problem.n
        self.t = problem.table
        self.linv = _linv(problem.table)
        ident = tuple(range(n))
        # per-variable watch lists
        self.watch: list[list] = [[] for _ in range(problem.nvars)]
        for c in problem.twisted:
            perm = c.perm or ident
            item = ("t", c.out, c.left, c.right, perm)
            for v in {c.out, c.left, c.right}:
                self.watch[v].append(item)
        for s in problem.shifts:
            item = ("s", s.out, s.src, s.perm, _inverse(s.perm))
            self.watch[s.out].append(item)
            if s.src != s.out:
                self.watch[s.src].append(item)
        doms = problem.domains or [list(range(n))] * problem.nvars
        self.domsets = [set(d) for d in doms]
        self.doms = [sorted(d) for d in doms]
        self.order = problem.order or default_order(problem)
        self.vals = [-1] * problem.nvars
        self.budget = budget
        self.nodes = 0
        self.results: list[tuple[int, ...]] = []

    def _set(self, var, val, trail) -> bool:
        if val not in self.domsets[var]:
            return False
        self.vals[var] = val
        trail.append(var)
        return True

    def assign(self, var, val) -> Optional[list[int]]:
        """Assign and propagate; returns the trail or None on contradiction."""
        trail: list[int] = []
        if not self._set(var, val, trail):
            return self._fail(trail)
        vals = self.vals
        t, linv = self.t, self.linv
        queue = [var]
        while queue:
            x = queue.pop()
            for item in self.watch[x]:
                if item[0] == "t":
                    _, o, l, r, perm = item
                    vo, vl, vr = vals[o], vals[l], vals[r]
                    if vl >= 0 and vr >= 0:
                        want = t[vl][perm[vr]]
                        if vo < 0:
                            if not self._set(o, want, trail):
                                return self._fail(trail)
                            queue.append(o)
                        elif vo != want:
                            return self._fail(trail)
                    elif vo >= 0 and vr >= 0:
                        want = linv[vo][perm[vr]]
                        if not self._set(l, want, trail):
                            return self._fail(trail)
                        queue.append(l)
                else:
                    _, o, s, perm, pinv = item
                    vo, vs = vals[o], vals[s]
                    if vs >= 0:
                        want = perm[vs]
                        if vo < 0:
                            if not self._set(o, want, trail):
                                return self._fail(trail)
                            queue.append(o)
                        elif vo != want:
                            return self._fail(trail)
                    elif vo >= 0:
                        if not self._set(s, pinv[vo], trail):
                            return self._fail(trail)
                        queue.append(s)
        return trail

    def _fail(self, trail):
        for v in trail:
            self.vals[v] = -1
        return None

    def undo(self, trail):
        for v in trail:
            self.vals[v] = -1

    def run(self, first_values: Optional[Sequence[int]] = None):
        self._search(0, first_values)
        return self.results

    def _search(self, pos, restrict=None):
        order, vals = self.order, self.vals
        while pos < len(order) and vals[order[pos]] >= 0:
            pos += 1
        if pos == len(order):
            self.results.append(tuple(vals))
            return
        var = order[pos]
        choices = self.doms[var] if restrict is None else restrict
        for val in choices:
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(f"search exceeded {self.budget} nodes")
            trail = self.assign(var, val)
            if trail is None:
                continue
            self._search(pos + 1)
            self.undo(trail)


def _run_chunk(args):
    problem, budget, chunk = args
    return _Solver(problem, budget).run(chunk)


def solve(problem: Problem, budget: Optional[int] = None, workers: int = 1) -> list[tuple[int, ...]]:
    """All satisfying assignments, sorted lexicographically."""
    if problem.nvars == 0:
        return [()] if satisfies(problem, ()) else []
    if workers <= 1:
        return sorted(_Solver(problem, budget).run())
    order = problem.order or default_order(problem)
    first = (problem.domains or [list(range(problem.n))] * problem.nvars)[order[0]]
    chunks = [list(first[i::workers]) for i in range(workers)]
    chunks = [c for c in chunks if c]
    with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
        parts = list(ex.map(_run_chunk, [(problem, budget, c) for c in chunks]))
    return sorted(itertools.chain.from_iterable(parts))
