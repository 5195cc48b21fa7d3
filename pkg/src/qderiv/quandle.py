"""Finite quandles as operation tables.

Tables are stored 0-based internally; everything that crosses the user
boundary (files, printed matrices, CLI) is 1-based.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np


class QuandleError(ValueError):
    """Base class for table validation failures."""


class EntryOutOfRange(QuandleError):
    def __init__(self, i, j, value, n):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"entry ({i},{j}) = {value} is outside 1..{n}")


class Q1Violation(QuandleError):
    def __init__(self, i):
        self.axiom = "Q1"
        self.witness = (i,)
        super().__init__(f"Q1 fails: {i}*{i} != {i}")


class Q2Violation(QuandleError):
    def __init__(self, j, value):
        self.axiom = "Q2"
        self.witness = (j, value)
        super().__init__(f"Q2 fails: column {j} repeats value {value}")


class Q3Violation(QuandleError):
    def __init__(self, i, j, k):
        self.axiom = "Q3"
        self.witness = (i, j, k)
        super().__init__(f"Q3 fails at (i,j,k) = ({i},{j},{k})")


@dataclass(frozen=True)
class FiniteQuandle:
    """A validated quandle on {0..n-1}; ``table[i][j]`` is i*j."""

    table: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    @cached_property
    def linv(self) -> tuple[tuple[int, ...], ...]:
        """``linv[x][y]`` is the unique z with z*y = x."""
        n = self.n
        out = [[0] * n for _ in range(n)]
        for z in range(n):
            row = self.table[z]
            for y in range(n):
                out[row[y]][y] = z
        return tuple(tuple(r) for r in out)

    def left_inverse(self, x: int, y: int) -> int:
        return self.linv[x][y]

    def right_translation(self, y: int) -> tuple[int, ...]:
        """S_y as a 0-based one-line permutation x -> x*y."""
        return tuple(row[y] for row in self.table)

    def to_one_based(self) -> list[list[int]]:
        return [[v + 1 for v in row] for row in self.table]

    def to_array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.n, self.n)

    def __repr__(self):
        return f"FiniteQuandle(n={self.n})"


def _as_rows(table) -> list[list[int]]:
    rows = [list(map(int, r)) for r in table]
    n = len(rows)
    if n == 0:
        raise QuandleError("a quandle must be non-empty")
    for r in rows:
        if len(r) != n:
            raise QuandleError(f"table is not square ({n} rows, a row of length {len(r)})")
    return rows


def validate_table(table, one_based: bool = True) -> FiniteQuandle:
    """Check Q1-Q3 and return the quandle; raises on the first violated axiom.

    Witness indices in the exceptions use the same base as the input.
    """
    rows = _as_rows(table)
    n = len(rows)
    off = 1 if one_based else 0
    t = []
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if not off <= v < n + off:
                raise EntryOutOfRange(i + off, j + off, v, n)
        t.append(tuple(v - off for v in r))
    for i in range(n):
        if t[i][i] != i:
            raise Q1Violation(i + off)
    for j in range(n):
        seen = set()
        for i in range(n):
            v = t[i][j]
            if v in seen:
                raise Q2Violation(j + off, v + off)
            seen.add(v)
    for i in range(n):
        ti = t[i]
        for j in range(n):
            tij = t[ti[j]]
            tj = t[j]
            for k in range(n):
                if tij[k] != t[ti[k]][tj[k]]:
                    raise Q3Violation(i + off, j + off, k + off)
    return FiniteQuandle(tuple(t))


def from_function(n: int, op) -> FiniteQuandle:
    """Build a quandle from a 0-based operation ``op(x, y)``."""
    return validate_table([[op(x, y) for y in range(n)] for x in range(n)], one_based=False)


def trivial(n: int) -> FiniteQuandle:
    if n < 1:
        raise ValueError("n must be positive")
    return from_function(n, lambda x, y: x)


def takasaki(moduli: Sequence[int]) -> FiniteQuandle:
    """Takasaki quandle 2b-a on Z_{m1} x ... x Z_{mk} (mixed-radix labels)."""
    moduli = [int(m) for m in moduli]
    if not moduli or any(m < 1 for m in moduli):
        raise ValueError("moduli must be a non-empty list of positive integers")
    elems = list(itertools.product(*[range(m) for m in moduli]))
    index = {e: i for i, e in enumerate(elems)}

    def op(x, y):
        a, b = elems[x], elems[y]
        return index[tuple((2 * bi - ai) % m for ai, bi, m in zip(a, b, moduli))]

    return from_function(len(elems), op)


def dihedral(n: int) -> FiniteQuandle:
    """R_n: label i stands for the residue i-1, x*y = 2y - x mod n."""
    if n < 1:
        raise ValueError("n must be positive")
    return takasaki([n])


def affine(n: int, a: int) -> FiniteQuandle:
    """Alexander quandle on Z_n: x*y = a x + (1-a) y, with a a unit mod n."""
    from math import gcd

    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    return from_function(n, lambda x, y: (a * x + (1 - a) * y) % n)


def all_quandles(n: int, up_to_iso: bool = True) -> list[FiniteQuandle]:
    """Every quandle on n elements, by columns (each S_y a permutation fixing y).

    Exhaustive over (n-1)!^n column choices, so meant for n <= 4.
    """
    cols = [[p for p in itertools.permutations(range(n)) if p[y] == y] for y in range(n)]
    found = []
    for choice in itertools.product(*cols):
        t = tuple(tuple(choice[y][x] for y in range(n)) for x in range(n))
        if all(t[t[i][j]][k] == t[t[i][k]][t[j][k]]
               for i in range(n) for j in range(n) for k in range(n)):
            found.append(FiniteQuandle(t))
    if not up_to_iso:
        return found
    reps: list[FiniteQuandle] = []
    for q in found:
        if all(are_isomorphic(q, r) is None for r in reps):
            reps.append(q)
    return reps


def disjoint_union(q1: FiniteQuandle, q2: FiniteQuandle) -> FiniteQuandle:
    """Blocks keep their own operation; elements of different blocks act trivially."""
    n1, n2 = q1.n, q2.n
    rows = []
    for x in range(n1):
        rows.append(list(q1.table[x]) + [x] * n2)
    for x in range(n2):
        rows.append([n1 + x] * n1 + [n1 + v for v in q2.table[x]])
    return validate_table(rows, one_based=False)


# -- structural properties -------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    abelian: bool
    commutative: bool
    involutary: bool
    flat: bool
    trivial: bool
    connected: bool

    def as_dict(self):
        return dict(abelian=self.abelian, commutative=self.commutative,
                    involutary=self.involutary, flat=self.flat,
                    trivial=self.trivial, connected=self.connected)


def is_abelian(q: FiniteQuandle) -> bool:
    """Mediality (x*y)*(z*w) == (x*z)*(y*w), checked over all quadruples."""
    a = q.to_array()
    n = q.n
    for x in range(n):
        # lhs[y, z, w] = (x*y)*(z*w); rhs[y, z, w] = (x*z)*(y*w)
        xy = a[x]                       # x*y over y
        zw = a                          # z*w over (z, w)
        lhs = a[xy[:, None, None], zw[None, :, :]]
        rhs = a[xy[None, :, None], a[:, None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_commutative(q: FiniteQuandle) -> bool:
    a = q.to_array()
    return bool(np.array_equal(a, a.T))


def is_involutary(q: FiniteQuandle) -> bool:
    a = q.to_array()
    # (x*y)*y == x
    return bool(np.array_equal(a[a, np.arange(q.n)[None, :]], np.tile(np.arange(q.n)[:, None], (1, q.n))))


def is_trivial(q: FiniteQuandle) -> bool:
    return all(row[y] == x for x, row in enumerate(q.table) for y in range(q.n))


def is_flat(q: FiniteQuandle) -> bool:
    """<S_x S_y> is abelian iff the generators S_x S_y pairwise commute."""
    a = q.to_array()
    n = q.n
    # gens[x, y] = S_x o S_y as an array: v -> (v*y)*x
    gens = a[a, :]                       # a[a[v, y], x] indexed [v, y, x]
    gens = np.transpose(gens, (2, 1, 0)).reshape(n * n, n)
    gens = np.unique(gens, axis=0)
    for g in gens:
        # g o h == h o g for every generator h
        if not np.array_equal(g[gens], gens[:, g]):
            return False
    return True


def is_connected(q: FiniteQuandle) -> bool:
    """True when Inn(q) acts transitively."""
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in range(q.n):
            for z in (q.table[x][y], q.linv[x][y]):
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
    return len(seen) == q.n


def check_properties(q: FiniteQuandle) -> PropertyReport:
    return PropertyReport(
        abelian=is_abelian(q),
        commutative=is_commutative(q),
        involutary=is_involutary(q),
        flat=is_flat(q),
        trivial=is_trivial(q),
        connected=is_connected(q),
    )


# -- isomorphism -----------------------------------------------------------

def _cycle_type(perm) -> tuple[int, ...]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if not seen[s]:
            k, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                k += 1
            out.append(k)
    return tuple(sorted(out))


def _orbits(q: FiniteQuandle) -> list[int]:
    """Inn-orbit id of every element."""
    orbit = [-1] * q.n
    k = 0
    for s in range(q.n):
        if orbit[s] >= 0:
            continue
        orbit[s] = k
        stack = [s]
        while stack:
            x = stack.pop()
            for y in range(q.n):
                for z in (q.table[x][y], q.linv[x][y]):
                    if orbit[z] < 0:
                        orbit[z] = k
                        stack.append(z)
        k += 1
    return orbit


def element_profiles(q: FiniteQuandle) -> list[tuple]:
    """Per-element invariants preserved by any isomorphism."""
    orbit = _orbits(q)
    sizes = [orbit.count(o) for o in orbit]
    prof = []
    for x in range(q.n):
        col = q.right_translation(x)
        fixed_row = sum(1 for y in range(q.n) if q.table[x][y] == x)
        prof.append((sizes[x], _cycle_type(col), fixed_row))
    return prof


def fingerprint(q: FiniteQuandle) -> tuple:
    return (q.n, tuple(sorted(element_profiles(q))))


def are_isomorphic(q1: FiniteQuandle, q2: FiniteQuandle) -> Optional[tuple[int, ...]]:
    """Return a 0-based bijection g with g(x*y) = g(x)*g(y), or None."""
    if q1.n != q2.n:
        return None
    p1, p2 = element_profiles(q1), element_profiles(q2)
    if sorted(p1) != sorted(p2):
        return None
    n = q1.n
    t1, t2 = q1.table, q2.table
    cands = [[y for y in range(n) if p2[y] == p1[x]] for x in range(n)]
    order = sorted(range(n), key=lambda x: (len(cands[x]), x))
    g = [-1] * n
    used = [False] * n

    def consistent(x):
        for y in range(n):
            gy = g[y]
            if gy < 0:
                continue
            for a, b in ((x, y), (y, x)):
                c = t1[a][b]
                if g[c] >= 0 and g[c] != t2[g[a]][g[b]]:
                    return False
        return True

    def extend(assigned: list[int]) -> bool:
        # close the partial map under the operation; undo list returned via `assigned`
        queue = list(assigned)
        while queue:
            x = queue.pop()
            for y in range(n):
                if g[y] < 0:
                    continue
                for a, b in ((x, y), (y, x)):
                    c = t1[a][b]
                    v = t2[g[a]][g[b]]
                    if g[c] < 0:
                        if used[v] or p2[v] != p1[c]:
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
            return True
        x = order[pos]
        for v in cands[x]:
            if used[v]:
                continue
            g[x] = v
            used[v] = True
            assigned = [x]
            if extend(assigned) and search(pos + 1):
                return True
            for c in assigned:
                used[g[c]] = False
                g[c] = -1
        return False

    if search(0):
        return tuple(g)
    return None


def relabel(q: FiniteQuandle, g: Sequence[int]) -> FiniteQuandle:
    """The isomorphic copy with x renamed g[x]."""
    n = q.n
    out = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            out[g[x]][g[y]] = g[q.table[x][y]]
    return FiniteQuandle(tuple(tuple(r) for r in out))


CANONICAL_MAX = 8


def canonical_table(q: FiniteQuandle) -> Optional[tuple[tuple[int, ...], ...]]:
    """Lexicographically least relabeled table; only for n <= CANONICAL_MAX."""
    n = q.n
    if n > CANONICAL_MAX:
        return None
    a = q.to_array()
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    inv = np.argsort(perms, axis=1)
    # relabeled[p, i, j] = perm[a[inv[i], inv[j]]]
    sub = a[inv[:, :, None], inv[:, None, :]]
    rel = np.take_along_axis(perms, sub.reshape(len(perms), -1), axis=1)
    best = min(map(tuple, rel))
    return tuple(tuple(int(v) for v in best[i * n:(i + 1) * n]) for i in range(n))


# -- file formats ----------------------------------------------------------

def parse_matrix_text(text: str) -> FiniteQuandle:
    """`.qm` format: first line n, then n rows of n 1-based integers."""
    tokens = text.split()
    if not tokens:
        raise QuandleError("empty quandle file")
    n = int(tokens[0])
    vals = list(map(int, tokens[1:]))
    if len(vals) != n * n:
        raise QuandleError(f"expected {n * n} entries, found {len(vals)}")
    return validate_table([vals[i * n:(i + 1) * n] for i in range(n)])


def format_matrix_text(q: FiniteQuandle) -> str:
    width = len(str(q.n))
    lines = [str(q.n)]
    for row in q.to_one_based():
        lines.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def to_json(q: FiniteQuandle) -> dict:
    return {"n": q.n, "table": q.to_one_based()}


def from_json(obj) -> FiniteQuandle:
    if isinstance(obj, str):
        obj = json.loads(obj)
    q = validate_table(obj["table"])
    if "n" in obj and int(obj["n"]) != q.n:
        raise QuandleError(f"declared n={obj['n']} but table has {q.n} rows")
    return q


def load_quandle(path) -> FiniteQuandle:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return from_json(text)
    return parse_matrix_text(text)


def save_quandle(q: FiniteQuandle, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(to_json(q)) + "\n")
    else:
        path.write_text(format_matrix_text(q))


# small fixture tables: a non-commutative abelian quandle, and a 3-element
# quandle whose middle element swaps the other two
ABELIAN4 = ((1, 3, 4, 2), (4, 2, 1, 3), (2, 4, 3, 1), (3, 1, 2, 4))
SWAP3 = ((1, 3, 1), (2, 2, 2), (3, 1, 3))


def abelian4() -> FiniteQuandle:
    return validate_table(ABELIAN4)


def swap3() -> FiniteQuandle:
    return validate_table(SWAP3)

