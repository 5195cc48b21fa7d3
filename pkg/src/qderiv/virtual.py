"""Virtual quandles (a quandle with a chosen automorphism) and the virtual
versions of homomorphisms, actions, derivations and the polynomial.

Composition is standard (``compose(p, q)`` applies q first). A virtual
action satisfies phi(alpha(q)) = beta^-1 o phi(q) o beta; on diagrams a
strand passing a virtual crossing with power k imposes f(out) = beta^k(f(in))
and phi(out) = beta^-k o phi(in) o beta^k.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .autgroup import Perm, automorphism_witness, compose, identity, inverse, perm_order
from .coloring import build_problem, presentation
from .derivations import (ActionColoring, DerivationPolynomial, conj_aut_cached,
                          derivation_quandle, enumerate_actions, enumerate_derivations,
                          idempotent_domain)
from .diagram import ArcPresentation, KnotDiagram, arcs_and_relations, parse_pd
from .quandle import FiniteQuandle
from .search import solve


class NotAnAutomorphism(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not an automorphism; fails at {witness}")


class ImageEscape(RuntimeError):
    pass


@dataclass(frozen=True)
class VirtualQuandle:
    quandle: FiniteQuandle
    alpha: Perm

    @property
    def n(self):
        return self.quandle.n


def validate_virtual(Q: FiniteQuandle, alpha: Sequence[int]) -> VirtualQuandle:
    alpha = tuple(alpha)
    w = automorphism_witness(Q, alpha)
    if w is not None:
        raise NotAnAutomorphism(w)
    return VirtualQuandle(Q, alpha)


def plain(Q: FiniteQuandle) -> VirtualQuandle:
    return VirtualQuandle(Q, identity(Q.n))


def _power(p: Perm, k: int) -> Perm:
    base = p if k >= 0 else inverse(p)
    out = identity(len(p))
    for _ in range(abs(k)):
        out = compose(base, out)
    return out


def hat(beta: Perm, k: int = 1):
    """g -> beta^-k o g o beta^k."""
    b = _power(beta, k)
    bi = inverse(b)
    return lambda g: compose(bi, compose(g, b))


def intertwines(f: Sequence[int], alpha: Perm, beta: Perm) -> bool:
    """beta o f == f o alpha."""
    return all(beta[f[q]] == f[alpha[q]] for q in range(len(f)))


# -- finite sources --------------------------------------------------------

def enumerate_virtual_homs_finite(Qa: VirtualQuandle, Xb: VirtualQuandle,
                                  budget: Optional[int] = None) -> list[tuple[int, ...]]:
    from .coloring import enumerate_homs_finite

    homs = enumerate_homs_finite(Qa.quandle, Xb.quandle, budget=budget)
    return [f for f in homs if intertwines(f, Qa.alpha, Xb.alpha)]


def is_virtual_action(Qa: VirtualQuandle, Xb: VirtualQuandle, action: ActionColoring) -> bool:
    auts = action.automorphisms
    h = hat(Xb.alpha)
    return all(auts[Qa.alpha[q]] == h(auts[q]) for q in range(Qa.n))


def enumerate_virtual_actions_finite(Qa: VirtualQuandle, Xb: VirtualQuandle,
                                     budget: Optional[int] = None) -> list[ActionColoring]:
    acts = enumerate_actions(Qa.quandle, Xb.quandle, budget=budget)
    return [a for a in acts if is_virtual_action(Qa, Xb, a)]


def enumerate_virtual_derivations_finite(Qa: VirtualQuandle, Xb: VirtualQuandle,
                                         action: ActionColoring,
                                         budget: Optional[int] = None) -> list[tuple[int, ...]]:
    ders = enumerate_derivations(Qa.quandle, Xb.quandle, action, budget)
    return [f for f in ders if intertwines(f, Qa.alpha, Xb.alpha)]


def brute_force_virtual_homs_finite(Qa: VirtualQuandle, Xb: VirtualQuandle):
    from .coloring import brute_force_homs_finite

    return [f for f in brute_force_homs_finite(Qa.quandle, Xb.quandle)
            if intertwines(f, Qa.alpha, Xb.alpha)]


def gamma_map(derivs: Sequence[tuple[int, ...]], alpha: Perm, beta: Perm) -> tuple[int, ...]:
    """Gamma(f) = beta^-1 o f o alpha^-1 as a permutation of ``derivs`` indices."""
    index = {f: i for i, f in enumerate(derivs)}
    bi, ai = inverse(beta), inverse(alpha)
    out = []
    for f in derivs:
        g = tuple(bi[f[ai[q]]] for q in range(len(f)))
        if g not in index:
            raise ImageEscape(f"Gamma({f}) = {g} is not in the derivation set")
        out.append(index[g])
    return tuple(out)


def virtual_derivation_quandle(derivs, Xb: VirtualQuandle, alpha: Perm) -> VirtualQuandle:
    """(Der, pointwise op, Gamma), checked to be a virtual quandle."""
    q = derivation_quandle(derivs, Xb.quandle)
    return validate_virtual(q, gamma_map(derivs, alpha, Xb.alpha))


# -- diagrams --------------------------------------------------------------

def parse_virtual(text: str, assume_sign: Optional[int] = None) -> KnotDiagram:
    """PD text with ``V(a,b,c,d)`` tuples for virtual crossings."""
    return parse_pd(text, assume_sign=assume_sign, allow_virtual=True)


def virtual_arcs_and_relations(D: KnotDiagram) -> ArcPresentation:
    return arcs_and_relations(D)


def _shift_perms(pres: ArcPresentation, beta: Perm) -> dict:
    return {k: _power(beta, k) for k in {p for _, _, p in pres.shifts}}


def _conj_shift_perms(pres: ArcPresentation, C, beta: Perm) -> dict:
    out = {}
    for k in {p for _, _, p in pres.shifts}:
        h = hat(beta, k)
        out[k] = tuple(C.index(h(g)) for g in C.labels)
    return out


def enumerate_virtual_homs_diagram(D, Xb: VirtualQuandle, budget: Optional[int] = None,
                                   workers: int = 1) -> list[tuple[int, ...]]:
    pres = presentation(D)
    prob = build_problem(pres, Xb.quandle, shift_perms=_shift_perms(pres, Xb.alpha))
    return solve(prob, budget, workers)


def brute_force_virtual_homs_diagram(D, Xb: VirtualQuandle) -> list[tuple[int, ...]]:
    import itertools

    pres = presentation(D)
    t = Xb.quandle.table
    shifts = _shift_perms(pres, Xb.alpha)
    out = []
    for f in itertools.product(range(Xb.n), repeat=pres.arc_count):
        if all((f[z] == t[f[x]][f[y]]) if s == 1 else (f[x] == t[f[z]][f[y]])
               for z, x, y, s in pres.relations) and \
                all(f[o] == shifts[k][f[i]] for o, i, k in pres.shifts):
            out.append(f)
    return out


def enumerate_virtual_actions_diagram(D, Xb: VirtualQuandle,
                                      budget: Optional[int] = None) -> list[ActionColoring]:
    pres = presentation(D)
    C = conj_aut_cached(Xb.quandle)
    prob = build_problem(pres, C.quandle, shift_perms=_conj_shift_perms(pres, C, Xb.alpha))
    return [ActionColoring(v, C) for v in solve(prob, budget)]


def enumerate_virtual_derivations_diagram(D, Xb: VirtualQuandle, action: ActionColoring,
                                          budget: Optional[int] = None) -> list[tuple[int, ...]]:
    pres = presentation(D)
    auts = action.automorphisms
    doms = [idempotent_domain(Xb.quandle, a) for a in auts]
    prob = build_problem(pres, Xb.quandle, twist=auts, domains=doms,
                         shift_perms=_shift_perms(pres, Xb.alpha))
    return solve(prob, budget)


def virtual_derivation_polynomial(source, Xb: VirtualQuandle, alpha: Optional[Perm] = None,
                                  budget: Optional[int] = None) -> DerivationPolynomial:
    """Diagram source, or a finite quandle with ``alpha`` (identity if omitted)."""
    src = presentation(source)
    c: Counter = Counter()
    if isinstance(src, FiniteQuandle):
        Qa = VirtualQuandle(src, tuple(alpha) if alpha is not None else identity(src.n))
        c[0] = len(enumerate_virtual_homs_finite(Qa, Xb, budget))
        for a in enumerate_virtual_actions_finite(Qa, Xb, budget):
            if not a.is_trivial:
                c[len(enumerate_virtual_derivations_finite(Qa, Xb, a, budget)) + 1] += 1
    else:
        c[0] = len(enumerate_virtual_homs_diagram(src, Xb, budget))
        for a in enumerate_virtual_actions_diagram(src, Xb, budget):
            if not a.is_trivial:
                c[len(enumerate_virtual_derivations_diagram(src, Xb, a, budget)) + 1] += 1
    return DerivationPolynomial.from_dict(c)


def gamma_order_bound(alpha: Perm, beta: Perm) -> int:
    from math import lcm

    return lcm(perm_order(alpha), perm_order(beta))
