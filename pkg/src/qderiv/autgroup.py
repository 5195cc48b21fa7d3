"""Automorphism groups of finite quandles and conjugation quandles.

Permutations are 0-based one-line tuples internally. Products follow the
right-action convention used for actions throughout the package: ``x^(gh)``
means apply g, then h, so ``b^-1 a b`` is the map ``b o a o b^-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .quandle import FiniteQuandle, validate_table

Perm = tuple[int, ...]


class GroupTooLarge(RuntimeError):
    pass


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p o q: apply q first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def conjugate(a: Perm, b: Perm) -> Perm:
    """The conjugation-quandle product a*b = b^-1 a b (apply b^-1, a, then b)."""
    return compose(b, compose(a, inverse(b)))


def perm_order(p: Perm) -> int:
    from math import lcm
    out = 1
    for c in cycles(p):
        out = lcm(out, len(c))
    return out


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        c = []
        x = s
        while not seen[x]:
            seen[x] = True
            c.append(x)
            x = p[x]
        if len(c) > 1:
            out.append(tuple(c))
    return out


def to_cycle_notation(p: Perm) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + ",".join(str(v + 1) for v in c) + ")" for c in cs)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Perm:
    """Parse 1-based cycle notation such as ``(2,12)(3,8)``."""
    text = text.strip()
    img = list(range(n))
    if text.replace(" ", "") in ("", "()", "id"):
        return tuple(img)
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    seen = set()
    for m in _CYCLE.finditer(text):
        body = m.group(1).strip()
        if not body:
            continue
        pts = [int(v) - 1 for v in re.split(r"[,\s]+", body) if v]
        for v in pts:
            if not 0 <= v < n:
                raise ValueError(f"point {v + 1} outside 1..{n}")
            if v in seen:
                raise ValueError(f"point {v + 1} repeated in {text!r}")
            seen.add(v)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def parse_one_line(values: Sequence[int]) -> Perm:
    p = tuple(int(v) - 1 for v in values)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {list(values)}")
    return p


def is_automorphism(q: FiniteQuandle, g: Perm) -> bool:
    return automorphism_witness(q, g) is None


def automorphism_witness(q: FiniteQuandle, g: Perm) -> Optional[tuple[int, int]]:
    """First pair (x, y) with g(x*y) != g(x)*g(y), or None."""
    if sorted(g) != list(range(q.n)):
        return (-1, -1)
    t = q.table
    for x in range(q.n):
        for y in range(q.n):
            if g[t[x][y]] != t[g[x]][g[y]]:
                return (x, y)
    return None


@dataclass(frozen=True)
class PermutationGroup:
    degree: int
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...] = field(default=())

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return tuple(p) in self._index

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {p: i for i, p in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, p: Perm) -> int:
        return self._index[tuple(p)]


def closure(gens: Iterable[Perm], degree: int, bound: int = 10**6) -> PermutationGroup:
    """Group generated by ``gens``, elements sorted lexicographically."""
    gens = tuple(dict.fromkeys(tuple(g) for g in gens))
    e = identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                h = compose(g, p)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > bound:
                        raise GroupTooLarge(f"group exceeds {bound} elements")
        frontier = nxt
    return PermutationGroup(degree, tuple(sorted(seen)), gens)


def automorphism_group(q: FiniteQuandle) -> PermutationGroup:
    """All automorphisms of q by backtracking with closure propagation.

    Images are assigned in an order that starts with one representative of
    each Inn-orbit; every forced image g(x*y) = g(x)*g(y) is propagated.
    """
    from .quandle import _orbits, element_profiles

    n = q.n
    t = q.table
    prof = element_profiles(q)
    orbit = _orbits(q)
    reps = []
    for x in range(n):
        if orbit[x] not in [orbit[r] for r in reps]:
            reps.append(x)
    order = reps + [x for x in range(n) if x not in reps]
    cands = [[y for y in range(n) if prof[y] == prof[x]] for x in range(n)]
    g = [-1] * n
    used = [False] * n
    found: list[Perm] = []

    def propagate(assigned):
        queue = list(assigned)
        while queue:
            x = queue.pop()
            for y in range(n):
                if g[y] < 0:
                    continue
                for a, b in ((x, y), (y, x)):
                    c = t[a][b]
                    v = t[g[a]][g[b]]
                    if g[c] < 0:
                        if used[v]:
                            return False
                        g[c] = v
                        used[v] = True
                        assigned.append(c)
                        queue.append(c)
                    elif g[c] != v:
                        return False
                    # left division is preserved as well
                    c = q.linv[a][b]
                    v = q.linv[g[a]][g[b]]
                    if g[c] < 0:
                        if used[v]:
                            return False
                        g[c] = v
                        used[v] = True
                        assigned.append(c)
                        queue.append(c)
                    elif g[c] != v:
                        return False
        return True

    def search(pos):
        while pos < n and g[order[pos]] >= 0:
            pos += 1
        if pos == n:
            found.append(tuple(g))
            return
        x = order[pos]
        for v in cands[x]:
            if used[v]:
                continue
            g[x] = v
            used[v] = True
            assigned = [x]
            if propagate(assigned):
                search(pos + 1)
            for c in assigned:
                used[g[c]] = False
                g[c] = -1

    search(0)
    elems = tuple(sorted(found))
    for p in elems:
        assert is_automorphism(q, p)
    return PermutationGroup(n, elems, ())


def inner_subgroup(q: FiniteQuandle, bound: int = 10**6) -> PermutationGroup:
    gens = [q.right_translation(x) for x in range(q.n)]
    return closure(gens, q.n, bound)


@dataclass(frozen=True)
class ConjQuandle:
    quandle: FiniteQuandle
    labels: tuple[Perm, ...]

    def index(self, p: Perm) -> int:
        return self._index[tuple(p)]

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {p: i for i, p in enumerate(self.labels)}
            object.__setattr__(self, "_idx", idx)
        return idx


def conj_quandle(group: PermutationGroup) -> ConjQuandle:
    """Conj(G) on the sorted element list: table(i, j) = index of g_j^-1 g_i g_j."""
    elems = group.elements
    idx = {p: i for i, p in enumerate(elems)}
    rows = []
    for a in elems:
        rows.append([idx[conjugate(a, b)] for b in elems])
    return ConjQuandle(validate_table(rows, one_based=False), elems)


def conj_aut(q: FiniteQuandle) -> ConjQuandle:
    return conj_quandle(automorphism_group(q))
