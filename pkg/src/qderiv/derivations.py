"""Quandle actions, derivations and the invariants built from them.

An action of a source (knot diagram or finite quandle) on X is a coloring
by Conj(Aut(X)); a derivation with respect to an action phi is a map f into
X with f(q1*q2) = f(q1) * phi(q1)(f(q2)). On a diagram this is imposed at
every crossing, together with f(a) * phi(a)(f(a)) = f(a) on every arc.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .autgroup import (ConjQuandle, Perm, compose, conj_aut, conjugate, identity, inverse)
from .coloring import (NotAbelianTarget, build_problem, enumerate_homs, pointwise_table,
                       presentation)
from .quandle import (CANONICAL_MAX, FiniteQuandle, are_isomorphic, canonical_table,
                      fingerprint, is_abelian)
from .search import solve


class ClosureViolation(RuntimeError):
    def __init__(self, f, g):
        self.f, self.g = f, g
        super().__init__(f"pointwise product of {f} and {g} left the derivation set")


class NotAnAction(ValueError):
    pass


class CompatibilityViolation(ValueError):
    def __init__(self, q, a):
        self.q, self.a = q, a
        super().__init__(f"action compatibility fails at q={q}, a={a}")


@dataclass(frozen=True)
class ActionColoring:
    """Indices into ``conj.labels``, one per arc (or source element)."""

    values: tuple[int, ...]
    conj: ConjQuandle = field(repr=False, compare=False)

    @property
    def automorphisms(self) -> tuple[Perm, ...]:
        return tuple(self.conj.labels[v] for v in self.values)

    @property
    def is_trivial(self) -> bool:
        labels = self.conj.labels
        return all(labels[v] == tuple(range(len(labels[v]))) for v in self.values)


_conj_cache: dict = {}


def conj_aut_cached(X: FiniteQuandle) -> ConjQuandle:
    key = X.table
    if key not in _conj_cache:
        _conj_cache[key] = conj_aut(X)
    return _conj_cache[key]


def _source_key(source) -> str:
    src = presentation(source)
    if isinstance(src, FiniteQuandle):
        payload = ("Q", src.table)
    else:
        payload = ("D", src.arc_count, src.relations, src.shifts)
    return hashlib.sha1(repr(payload).encode()).hexdigest()


_action_cache: dict = {}


def enumerate_actions(source, X: FiniteQuandle, budget: Optional[int] = None, workers: int = 1,
                      verify: bool = False) -> list[ActionColoring]:
    """All quandle homomorphisms source -> Conj(Aut(X)), lexicographic."""
    key = (_source_key(source), X.table)
    if key not in _action_cache:
        C = conj_aut_cached(X)
        vals = enumerate_homs(source, C.quandle, budget=budget, workers=workers)
        _action_cache[key] = [ActionColoring(v, C) for v in vals]
    acts = _action_cache[key]
    if verify:
        for a in acts:
            check_action_condition(source, a)
    return acts


def check_action_condition(source, action: ActionColoring) -> None:
    """(x^phi(q2))^phi(q1*q2) == (x^phi(q1))^phi(q2) at every relation."""
    src = presentation(source)
    auts = action.automorphisms
    if isinstance(src, FiniteQuandle):
        triples = [(a, b, src.table[a][b]) for a in range(src.n) for b in range(src.n)]
    else:
        triples = [(x, y, z) if s == 1 else (z, y, x) for z, x, y, s in src.relations]
    for q1, q2, q12 in triples:
        g1, g2, g12 = auts[q1], auts[q2], auts[q12]
        if compose(g12, g2) != compose(g2, g1):
            raise NotAnAction(f"action condition fails at ({q1}, {q2})")


def make_action(source, X: FiniteQuandle, auts: Sequence[Perm]) -> ActionColoring:
    """Wrap explicit automorphisms (0-based), checking they form an action."""
    C = conj_aut_cached(X)
    src = presentation(source)
    m = src.n if isinstance(src, FiniteQuandle) else src.arc_count
    if len(auts) != m:
        raise NotAnAction(f"expected {m} automorphisms, got {len(auts)}")
    try:
        vals = tuple(C.index(tuple(p)) for p in auts)
    except KeyError:
        raise NotAnAction("an assigned permutation is not an automorphism of X") from None
    act = ActionColoring(vals, C)
    t = C.quandle.table
    if isinstance(src, FiniteQuandle):
        ok = all(vals[src.table[a][b]] == t[vals[a]][vals[b]] for a in range(m) for b in range(m))
    else:
        if src.shifts:
            raise NotAnAction("diagrams with virtual crossings need a virtual action")
        ok = all((vals[z] == t[vals[x]][vals[y]]) if s == 1 else (vals[x] == t[vals[z]][vals[y]])
                 for z, x, y, s in src.relations)
    if not ok:
        raise NotAnAction("assignment is not a quandle homomorphism into Conj(Aut(X))")
    return act


def constant_action(source, X: FiniteQuandle, perm: Perm) -> ActionColoring:
    src = presentation(source)
    m = src.n if isinstance(src, FiniteQuandle) else src.arc_count
    return make_action(source, X, [tuple(perm)] * m)


def trivial_action(source, X: FiniteQuandle) -> ActionColoring:
    return constant_action(source, X, identity(X.n))


# -- derivations -----------------------------------------------------------

def idempotent_domain(X: FiniteQuandle, alpha: Perm) -> list[int]:
    """Values v with v * alpha(v) = v."""
    return [v for v in range(X.n) if X.table[v][alpha[v]] == v]


def derivation_problem(source, X: FiniteQuandle, action: ActionColoring, shift_perms=None):
    auts = action.automorphisms
    src = presentation(source)
    if isinstance(src, FiniteQuandle):
        return build_problem(src, X, twist=auts)
    doms = [idempotent_domain(X, a) for a in auts]
    return build_problem(src, X, twist=auts, domains=doms, shift_perms=shift_perms)


def enumerate_derivations_diagram(D, X: FiniteQuandle, action: ActionColoring,
                                  budget: Optional[int] = None) -> list[tuple[int, ...]]:
    """Arc assignments meeting the crossing conditions and per-arc idempotency."""
    return solve(derivation_problem(D, X, action), budget)


def enumerate_derivations_finite(Q: FiniteQuandle, X: FiniteQuandle, action: ActionColoring,
                                 budget: Optional[int] = None) -> list[tuple[int, ...]]:
    """All f with f(q1*q2) = f(q1) * phi(q1)(f(q2)) for every pair."""
    return solve(derivation_problem(Q, X, action), budget)


def enumerate_derivations(source, X: FiniteQuandle, action: ActionColoring,
                          budget: Optional[int] = None) -> list[tuple[int, ...]]:
    return solve(derivation_problem(source, X, action), budget)


def brute_force_derivations(source, X: FiniteQuandle, auts: Sequence[Perm]) -> list[tuple[int, ...]]:
    """Oracle: test every map source -> X against the defining conditions."""
    src = presentation(source)
    t = X.table
    if isinstance(src, FiniteQuandle):
        m = src.n
        checks = [(src.table[a][b], a, b) for a in range(m) for b in range(m)]
    else:
        m = src.arc_count
        checks = [(z, x, y) if s == 1 else (x, z, y) for z, x, y, s in src.relations]
        checks += [(a, a, a) for a in range(m)]
    out = []
    for f in itertools.product(range(X.n), repeat=m):
        if all(f[o] == t[f[l]][auts[l][f[r]]] for o, l, r in checks):
            out.append(f)
    return out


def derivation_quandle(derivs: Sequence[tuple[int, ...]], X: FiniteQuandle) -> FiniteQuandle:
    """Pointwise operation table over ``derivs`` in the given order."""
    if not is_abelian(X):
        raise NotAbelianTarget("derivation quandles need an abelian target")
    if not derivs:
        raise ValueError("the derivation set is empty")
    return pointwise_table(list(derivs), X)


# -- invariants ------------------------------------------------------------

@dataclass(frozen=True)
class DerivationPolynomial:
    """Sparse integer polynomial in u."""

    coeffs: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, d) -> "DerivationPolynomial":
        return cls(tuple(sorted((int(k), int(v)) for k, v in d.items() if int(v) != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __getitem__(self, k):
        return self.as_dict().get(k, 0)

    def __call__(self, u):
        return sum(c * u ** k for k, c in self.coeffs)

    def __str__(self):
        parts = []
        for k, c in self.coeffs:
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}u")
            else:
                parts.append(f"{c}u^{k}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"coeffs": {str(k): c for k, c in self.coeffs}}

    @classmethod
    def parse(cls, text: str) -> "DerivationPolynomial":
        """Inverse of ``str``: terms like ``45``, ``176u``, ``3u^6``."""
        d: Counter = Counter()
        for term in text.replace(" ", "").split("+"):
            if not term:
                continue
            if "u" not in term:
                d[0] += int(term)
                continue
            c, _, e = term.partition("u")
            d[int(e[1:]) if e else 1] += int(c) if c else 1
        return cls.from_dict(d)


@dataclass
class DerivationData:
    """Everything the invariants need for one (source, X) pair."""

    homs: list[tuple[int, ...]]
    actions: list[ActionColoring]
    derivations: list[list[tuple[int, ...]]]   # aligned with actions

    @property
    def nontrivial(self):
        return [(a, d) for a, d in zip(self.actions, self.derivations) if not a.is_trivial]

    def total_size(self) -> int:
        return len(self.homs) + sum(len(d) for _, d in self.nontrivial)

    def polynomial(self) -> DerivationPolynomial:
        c: Counter = Counter()
        c[0] = len(self.homs)
        for _, d in self.nontrivial:
            c[len(d) + 1] += 1
        return DerivationPolynomial.from_dict(c)


def _derive_chunk(args):
    source, X, acts, budget = args
    return [enumerate_derivations(source, X, a, budget) for a in acts]


_data_cache: dict = {}


def derivation_data(source, X: FiniteQuandle, budget: Optional[int] = None,
                    workers: int = 1) -> DerivationData:
    key = (_source_key(source), X.table)
    if key in _data_cache:
        return _data_cache[key]
    src = presentation(source)
    homs = enumerate_homs(src, X, budget=budget)
    acts = enumerate_actions(src, X, budget=budget)
    if workers > 1 and len(acts) > 1:
        chunks = [acts[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_derive_chunk, [(src, X, c, budget) for c in chunks]))
        ders: list = [None] * len(acts)
        for i, part in enumerate(parts):
            for j, d in enumerate(part):
                ders[i + j * workers] = d
    else:
        ders = [enumerate_derivations(src, X, a, budget) for a in acts]
    data = DerivationData(homs, acts, ders)
    _data_cache[key] = data
    return data


def derivation_polynomial(source, X: FiniteQuandle, budget: Optional[int] = None,
                          workers: int = 1) -> DerivationPolynomial:
    """|Hom| + sum over nontrivial actions of u^(|Der|+1)."""
    return derivation_data(source, X, budget, workers).polynomial()


def total_derivation_quandle(source, X: FiniteQuandle, budget: Optional[int] = None,
                             workers: int = 1) -> tuple[FiniteQuandle, list]:
    """Disjoint union of the hom quandle and every nonempty Der over nontrivial
    actions, in action order. Returns the table and one block label per
    element: "hom" or the index of the action in ``enumerate_actions``."""
    if not is_abelian(X):
        raise NotAbelianTarget("the total derivation quandle needs an abelian target")
    data = derivation_data(source, X, budget, workers)
    total = pointwise_table(data.homs, X)
    labels: list = ["hom"] * len(data.homs)
    for i, (a, d) in enumerate(zip(data.actions, data.derivations)):
        if a.is_trivial or not d:
            continue
        total = _union_fast(total, pointwise_table(d, X))
        labels += [i] * len(d)
    return total, labels


def _union_fast(q1: FiniteQuandle, q2: FiniteQuandle) -> FiniteQuandle:
    # both blocks are already validated quandles, and so is their union
    n1, n2 = q1.n, q2.n
    rows = [tuple(q1.table[x]) + (x,) * n2 for x in range(n1)]
    rows += [(n1 + x,) * n1 + tuple(n1 + v for v in q2.table[x]) for x in range(n2)]
    return FiniteQuandle(tuple(rows))


@dataclass(frozen=True)
class IsoClass:
    """Isomorphism-class descriptor; ``quandle`` is None for the empty set."""

    quandle: Optional[FiniteQuandle]
    canonical: Optional[tuple] = None

    @property
    def order(self) -> int:
        return 0 if self.quandle is None else self.quandle.n

    def same_class(self, other: "IsoClass") -> bool:
        if self.quandle is None or other.quandle is None:
            return self.quandle is None and other.quandle is None
        if self.canonical is not None and other.canonical is not None:
            return self.canonical == other.canonical
        if fingerprint(self.quandle) != fingerprint(other.quandle):
            return False
        return are_isomorphic(self.quandle, other.quandle) is not None


def iso_class(q: Optional[FiniteQuandle]) -> IsoClass:
    if q is None:
        return IsoClass(None)
    canon = canonical_table(q) if q.n <= CANONICAL_MAX else None
    if canon is not None:
        return IsoClass(FiniteQuandle(canon), canon)
    return IsoClass(q)


def bucket(classes: Sequence[IsoClass]) -> list[tuple[IsoClass, int]]:
    out: list[list] = []
    for c in classes:
        for entry in out:
            if entry[0].same_class(c):
                entry[1] += 1
                break
        else:
            out.append([c, 1])
    out.sort(key=lambda e: (e[0].order, -e[1]))
    return [(c, k) for c, k in out]


def derivation_multiset(source, X: FiniteQuandle, budget: Optional[int] = None,
                        workers: int = 1) -> list[tuple[IsoClass, int]]:
    """Iso classes of Der_phi over every action (trivial included) with multiplicities."""
    if not is_abelian(X):
        raise NotAbelianTarget("the derivation multiset needs an abelian target")
    data = derivation_data(source, X, budget, workers)
    cache: dict = {}
    classes = []
    for d in data.derivations:
        if not d:
            classes.append(IsoClass(None))
            continue
        q = pointwise_table(d, X)
        if q.table not in cache:
            cache[q.table] = iso_class(q)
        classes.append(cache[q.table])
    return bucket(classes)


def multisets_equal(m1, m2) -> bool:
    left = [[c, k] for c, k in m1]
    for c, k in m2:
        for entry in left:
            if entry[1] == k and entry[0].same_class(c):
                left.remove(entry)
                break
        else:
            return False
    return not left


# -- functoriality ---------------------------------------------------------

def check_action_compatible(Q2: FiniteQuandle, A1: FiniteQuandle, phi1: ActionColoring,
                            phi2: ActionColoring, sigma: Sequence[int], tau: Sequence[int]) -> None:
    """tau(phi1(sigma(q))(a)) == phi2(q)(tau(a)) for all q in Q2, a in A1."""
    g1, g2 = phi1.automorphisms, phi2.automorphisms
    for q in range(Q2.n):
        for a in range(A1.n):
            if tau[g1[sigma[q]][a]] != g2[q][tau[a]]:
                raise CompatibilityViolation(q, a)


def _is_hom(src: FiniteQuandle, dst: FiniteQuandle, f: Sequence[int]) -> bool:
    return all(f[src.table[a][b]] == dst.table[f[a]][f[b]] for a in range(src.n) for b in range(src.n))


def transport_derivation(f: Sequence[int], Q1: FiniteQuandle, A1: FiniteQuandle,
                         phi1: ActionColoring, Q2: FiniteQuandle, A2: FiniteQuandle,
                         phi2: ActionColoring, sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """tau o f o sigma, for an action compatible pair sigma: Q2 -> Q1, tau: A1 -> A2."""
    if not _is_hom(Q2, Q1, sigma):
        raise ValueError("sigma is not a quandle homomorphism Q2 -> Q1")
    if not _is_hom(A1, A2, tau):
        raise ValueError("tau is not a quandle homomorphism A1 -> A2")
    check_action_compatible(Q2, A1, phi1, phi2, sigma, tau)
    g = tuple(tau[f[sigma[q]]] for q in range(Q2.n))
    auts = phi2.automorphisms
    for a in range(Q2.n):
        for b in range(Q2.n):
            if g[Q2.table[a][b]] != A2.table[g[a]][auts[a][g[b]]]:
                raise AssertionError("transported map is not a derivation")
    return g


# -- closure diagnostic ----------------------------------------------------

@dataclass(frozen=True)
class ClosureReport:
    consistent: bool
    depth: int
    words_checked: int
    violation: Optional[str] = None

    def __str__(self):
        if self.consistent:
            return f"consistent to depth {self.depth} ({self.words_checked} words)"
        return f"violation: {self.violation}"


def verify_derivation_closure(D, X: FiniteQuandle, action: ActionColoring,
                              f: Sequence[int], depth: int = 2) -> ClosureReport:
    """Extend (f, phi) from arcs to formal words and test well-definedness.

    Words are built with * and its inverse up to ``depth`` operations; values
    follow the derivation rule. The checks are the quandle axioms on every
    pair/triple of words (Q1 on words up to ``depth``, Q2 and Q3 on words
    of lower depth) and the crossing relations.
    """
    pres = presentation(D)
    auts = action.automorphisms
    t, linv = X.table, X.linv

    # a value is (f(w), phi(w)); phi multiplies in Conj(Aut X)
    def star(u, v):
        fu, gu = u
        fv, gv = v
        return (t[fu][gu[fv]], conjugate(gu, gv))

    def bar(u, v):
        fu, gu = u
        fv, gv = v
        gw = conjugate(gu, inverse(gv))
        return (linv[fu][gw[fv]], gw)

    def name(w):
        return w if isinstance(w, str) else "(" + name(w[1]) + (" * " if w[0] == "*" else " / ") + name(w[2]) + ")"

    levels = [[(f"a{i + 1}", (f[i], auts[i])) for i in range(pres.arc_count)]]
    for k in range(1, depth + 1):
        new = []
        for i in range(k):
            for wu, u in levels[i]:
                for wv, v in levels[k - 1 - i]:
                    new.append((("*", wu, wv), star(u, v)))
                    new.append((("/", wu, wv), bar(u, v)))
        levels.append(new)
    words = [w for lvl in levels for w in lvl]
    low = [w for lvl in levels[:max(depth, 1)] for w in lvl]
    shallow = [w for lvl in levels[:max(depth - 1, 1)] for w in lvl]

    def fail(msg):
        return ClosureReport(False, depth, len(words), msg)

    for w, u in words:
        if star(u, u) != u:
            return fail(f"Q1 at pair ({name(w)}, {name(w)})")
    for z, x, y, s in pres.relations:
        lhs = star(levels[0][x][1], levels[0][y][1]) if s == 1 else star(levels[0][z][1], levels[0][y][1])
        rhs = levels[0][z][1] if s == 1 else levels[0][x][1]
        if lhs[0] != rhs[0] or lhs[1] != rhs[1]:
            return fail(f"crossing relation at arcs {(z + 1, x + 1, y + 1)}")
    for w1, u in low:
        for w2, v in low:
            if bar(star(u, v), v) != u or star(bar(u, v), v) != u:
                return fail(f"Q2 at pair ({name(w1)}, {name(w2)})")
    for w1, u in shallow:
        for w2, v in shallow:
            uv = star(u, v)
            for w3, w in shallow:
                if star(uv, w) != star(star(u, w), star(v, w)):
                    return fail(f"Q3 at ({name(w1)}, {name(w2)}, {name(w3)})")
    return ClosureReport(True, depth, len(words))
