"""Knot diagrams: PD / Gauss parsing, arc presentations, Reidemeister insertions.

PD convention: ``X(a,b,c,d)`` lists the four edges counterclockwise starting
at the incoming under-edge ``a``; ``c`` is the outgoing under-edge. The
crossing is positive when the over strand runs d -> b and negative when it
runs b -> d. ``V(a,b,c,d)`` is a virtual crossing with the same layout,
``a -> c`` being one of its two strands.

The direction of the over strand is read off the edge structure (every edge
has one head and one tail) and falls back to the label-successor rule only
where the structure leaves it open.
"""
from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Optional, Sequence


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class KnotDiagram:
    """Crossings as edge-label 4-tuples plus, per crossing, which of the
    positions 1/3 carries the incoming over-edge."""

    crossings: tuple[tuple[int, int, int, int], ...]
    over_in: tuple[int, ...]
    virtual: tuple[bool, ...] = ()
    free_loops: int = 0

    def __post_init__(self):
        if not self.virtual:
            object.__setattr__(self, "virtual", (False,) * len(self.crossings))

    @property
    def crossing_count(self) -> int:
        return sum(1 for v in self.virtual if not v)

    @property
    def virtual_count(self) -> int:
        return sum(1 for v in self.virtual if v)

    @property
    def signs(self) -> tuple[int, ...]:
        """+1 when the over strand runs d -> b. Virtual crossings report 0."""
        return tuple(0 if v else (1 if o == 3 else -1) for o, v in zip(self.over_in, self.virtual))

    @property
    def edges(self) -> list[int]:
        return sorted({e for c in self.crossings for e in c})

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def to_pd(self) -> str:
        parts = []
        for c, v in zip(self.crossings, self.virtual):
            parts.append(("V" if v else "X") + "(" + ",".join(map(str, c)) + ")")
        return " ".join(parts)

    def to_json(self) -> dict:
        out = {"crossings": [list(c) for c in self.crossings]}
        if any(self.virtual):
            out["virtual"] = list(self.virtual)
        if self.free_loops:
            out["free_loops"] = self.free_loops
        return out

    def components(self) -> list[list[int]]:
        """Edge labels of each closed component, in orientation order."""
        nxt = _successors(self.crossings, self.over_in)
        seen = set()
        comps = []
        for e in self.edges:
            if e in seen:
                continue
            comp = []
            x = e
            while x not in seen:
                seen.add(x)
                comp.append(x)
                x = nxt[x]
            comps.append(comp)
        return comps + [[] for _ in range(self.free_loops)]

    def is_planar(self) -> bool:
        """Euler check V - E + F = 2 per connected diagram component."""
        if not self.crossings:
            return True
        faces = diagram_faces(self)
        n = len(self.crossings)
        pieces = _connected_pieces(self)
        return n - 2 * n + len(faces) == 2 * pieces


# -- orientation -----------------------------------------------------------

def _occurrences(crossings) -> dict:
    occ = defaultdict(list)
    for ci, c in enumerate(crossings):
        for p, e in enumerate(c):
            occ[e].append((ci, p))
    return occ


def _orient(crossings, assume_sign: Optional[int] = None) -> tuple[int, ...]:
    """Which of positions 1/3 is the incoming over-edge, for each crossing."""
    occ = _occurrences(crossings)
    for e, places in occ.items():
        if len(places) != 2:
            raise DiagramError(f"edge {e} appears {len(places)} times (expected 2)")
    IN, OUT = 1, -1
    d: dict = {}
    for ci in range(len(crossings)):
        d[(ci, 0)] = IN
        d[(ci, 2)] = OUT

    def partner(ci, p):
        a, b = occ[crossings[ci][p]]
        return b if a == (ci, p) else a

    def propagate():
        changed = True
        while changed:
            changed = False
            for key, val in list(d.items()):
                other = partner(*key)
                if other in d:
                    if d[other] == val:
                        raise DiagramError(
                            f"edge {crossings[key[0]][key[1]]} is {'incoming' if val == IN else 'outgoing'} at both ends")
                else:
                    d[other] = -val
                    changed = True
                ci, p = key
                if p in (1, 3):
                    q = 4 - p
                    if (ci, q) in d:
                        if d[(ci, q)] == val:
                            raise DiagramError(f"crossing {ci + 1}: over strand has inconsistent direction")
                    else:
                        d[(ci, q)] = -val
                        changed = True

    propagate()
    total = len({e for c in crossings for e in c})
    for ci, c in enumerate(crossings):
        if (ci, 1) in d:
            continue
        a, b, cc, dd = c
        fwd = (b - dd) % total == 1 if total else False
        bwd = (dd - b) % total == 1 if total else False
        if fwd and not bwd:
            d[(ci, 3)] = IN
        elif bwd and not fwd:
            d[(ci, 1)] = IN
        elif assume_sign in (1, -1):
            d[(ci, 3 if assume_sign == 1 else 1)] = IN
        else:
            raise DiagramError(
                f"crossing {ci + 1} {c}: over-strand direction is ambiguous; pass assume_sign")
        propagate()
    return tuple(3 if d[(ci, 3)] == IN else 1 for ci in range(len(crossings)))


def _successors(crossings, over_in) -> dict:
    """edge -> next edge along the orientation."""
    nxt = {}
    for c, oi in zip(crossings, over_in):
        nxt[c[0]] = c[2]
        nxt[c[oi]] = c[4 - oi]
    return nxt


def _connected_pieces(D: KnotDiagram) -> int:
    parent = list(range(len(D.crossings)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    occ = _occurrences(D.crossings)
    for places in occ.values():
        (a, _), (b, _) = places
        parent[find(a)] = find(b)
    return len({find(i) for i in range(len(D.crossings))})


def make_diagram(crossings: Sequence[Sequence[int]], virtual: Optional[Sequence[bool]] = None,
                 assume_sign: Optional[int] = None, free_loops: int = 0) -> KnotDiagram:
    cr = tuple(tuple(int(v) for v in c) for c in crossings)
    for c in cr:
        if len(c) != 4:
            raise DiagramError(f"crossing {c} does not have four edges")
        if any(v < 1 for v in c):
            raise DiagramError(f"edge labels must be positive: {c}")
    virtual = tuple(bool(v) for v in virtual) if virtual is not None else (False,) * len(cr)
    if len(virtual) != len(cr):
        raise DiagramError("virtual flags do not match the crossing count")
    over_in = _orient(cr, assume_sign)
    if not cr and free_loops == 0:
        raise DiagramError("empty diagram; use the unknot builtin")
    return KnotDiagram(cr, over_in, virtual, free_loops)


# -- parsers ---------------------------------------------------------------

_PD_TOKEN = re.compile(r"([XVxv])\s*[\[(]\s*([^\])]*)[\])]")


def parse_pd(text: str, assume_sign: Optional[int] = None, unknot: bool = False,
             allow_virtual: bool = False) -> KnotDiagram:
    """Parse whitespace-separated ``X(a,b,c,d)`` tokens (``V(...)`` when allowed)."""
    text = text.strip()
    if not text:
        if unknot:
            return KnotDiagram((), (), (), 1)
        raise DiagramError("empty PD code (pass unknot=True for the trivial diagram)")
    if text.startswith("{") or text.startswith("["):
        return from_json(json.loads(text))
    pos = 0
    crossings, virtual = [], []
    cleaned = text
    if text.startswith("PD[") and text.endswith("]"):
        cleaned = text[3:-1]
    for m in _PD_TOKEN.finditer(cleaned):
        gap = cleaned[pos:m.start()].strip(" ,\t\n")
        if gap:
            raise DiagramError(f"unexpected text {gap!r}")
        pos = m.end()
        kind = m.group(1).upper()
        if kind == "V" and not allow_virtual:
            raise DiagramError("virtual crossing in a classical PD code")
        try:
            vals = [int(v) for v in m.group(2).replace(",", " ").split()]
        except ValueError:
            raise DiagramError(f"non-integer label in {m.group(0)!r}") from None
        if len(vals) != 4:
            raise DiagramError(f"{m.group(0)!r} must list four edge labels")
        crossings.append(vals)
        virtual.append(kind == "V")
    tail = cleaned[pos:].strip(" ,\t\n")
    if tail:
        raise DiagramError(f"unexpected text {tail!r}")
    if not crossings:
        raise DiagramError("no crossings found")
    return make_diagram(crossings, virtual, assume_sign)


_GAUSS_TOKEN = re.compile(r"^([OUou])(\d+)([+-])$")


def parse_gauss(text: str) -> KnotDiagram:
    """Signed Gauss code of one component, e.g. ``O1- U2- O3- U1- O2- U3-``.

    Edges are numbered along the traversal: edge j runs from the (j-1)-th
    visit to the j-th.
    """
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise DiagramError("empty Gauss code")
    visits = []
    for tok in tokens:
        m = _GAUSS_TOKEN.match(tok)
        if not m:
            raise DiagramError(f"malformed Gauss token {tok!r}")
        visits.append((m.group(1).upper(), int(m.group(2)), 1 if m.group(3) == "+" else -1))
    info: dict[int, dict] = defaultdict(dict)
    for v, (ou, k, s) in enumerate(visits):
        if ou in info[k]:
            raise DiagramError(f"crossing {k} visited twice as {ou}")
        info[k][ou] = (v, s)
    m = len(visits)
    for k, d in info.items():
        if set(d) != {"O", "U"}:
            missing = "O" if "O" not in d else "U"
            raise DiagramError(f"crossing {k} is never visited as {missing}")
        if d["O"][1] != d["U"][1]:
            raise DiagramError(f"crossing {k} has inconsistent signs")

    def inc(v):
        return v if v >= 1 else m

    def out(v):
        return v + 1

    crossings = []
    for k in sorted(info):
        u, s = info[k]["U"]
        o, _ = info[k]["O"]
        a, c = inc(u), out(u)
        oin, oout = inc(o), out(o)
        crossings.append((a, oout, c, oin) if s == 1 else (a, oin, c, oout))
    D = make_diagram(crossings, assume_sign=None)
    return D


def from_json(obj) -> KnotDiagram:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, list):
        obj = {"crossings": obj}
    crossings = obj.get("crossings", [])
    if not crossings:
        return KnotDiagram((), (), (), int(obj.get("free_loops", 1)))
    return make_diagram(crossings, obj.get("virtual"), obj.get("assume_sign"),
                        int(obj.get("free_loops", 0)))


BUILTIN_PD = {
    "3_1": "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
    "4_1": "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)",
    "5_1": "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)",
    "5_2": "X(1,4,2,5) X(3,8,4,9) X(5,10,6,1) X(9,6,10,7) X(7,2,8,3)",
}

# the trefoil drawing with its third crossing made virtual (Gauss O1 O2 U1 U2)
BUILTIN_VIRTUAL = {
    "2_1": "X(1,4,2,5) X(3,6,4,1) V(5,2,6,3)",
}


def builtin(name: str) -> KnotDiagram:
    if name in ("unknot", "0_1"):
        return KnotDiagram((), (), (), 1)
    if name in BUILTIN_PD:
        return parse_pd(BUILTIN_PD[name])
    if name in BUILTIN_VIRTUAL:
        return parse_pd(BUILTIN_VIRTUAL[name], allow_virtual=True)
    raise DiagramError(f"unknown knot {name!r}; known: unknot, {', '.join(list(BUILTIN_PD) + list(BUILTIN_VIRTUAL))}")


def load_diagram(spec: str, kind: str = "pd") -> KnotDiagram:
    """Accept literal text or a path to a file holding it."""
    p = Path(spec)
    text = p.read_text() if len(spec) < 4096 and p.exists() else spec
    if kind == "gauss":
        return parse_gauss(text)
    if p.suffix.lower() == ".json":
        return from_json(json.loads(text))
    return parse_pd(text, allow_virtual=True)


# -- arcs ------------------------------------------------------------------

@dataclass(frozen=True)
class ArcPresentation:
    """Arcs are 0-based. ``relations`` holds (z, x, y, sign): z = x*y when
    sign = +1 and x = z*y when sign = -1, with z the outgoing under-arc,
    x the incoming under-arc and y the over-arc. ``shifts`` holds
    (out, in, power) for strands passing a virtual crossing."""

    arc_count: int
    arc_of_edge: dict
    relations: tuple[tuple[int, int, int, int], ...]
    shifts: tuple[tuple[int, int, int], ...] = ()

    def relation_degree(self) -> list[int]:
        deg = [0] * self.arc_count
        for z, x, y, _ in self.relations:
            for a in {z, x, y}:
                deg[a] += 1
        for o, i, _ in self.shifts:
            deg[o] += 1
            deg[i] += 1
        return deg


def arcs_and_relations(D: KnotDiagram) -> ArcPresentation:
    edges = D.edges
    parent = {e: e for e in edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, v in zip(D.crossings, D.virtual):
        if not v:
            parent[find(c[1])] = find(c[3])
    roots = {}
    arc_of_edge = {}
    for e in edges:
        r = find(e)
        if r not in roots:
            roots[r] = len(roots)
        arc_of_edge[e] = roots[r]
    count = len(roots) + D.free_loops
    rels, shifts = [], []
    for c, oi, v in zip(D.crossings, D.over_in, D.virtual):
        a, b, cc, d = (arc_of_edge[e] for e in c)
        if v:
            # the strand that the other one crosses from left to right gets alpha^-1
            sin, sout = c[oi], c[4 - oi]
            if oi == 3:
                shifts.append((arc_of_edge[c[2]], arc_of_edge[c[0]], -1))
                shifts.append((arc_of_edge[sout], arc_of_edge[sin], 1))
            else:
                shifts.append((arc_of_edge[c[2]], arc_of_edge[c[0]], 1))
                shifts.append((arc_of_edge[sout], arc_of_edge[sin], -1))
        else:
            sign = 1 if oi == 3 else -1
            rels.append((cc, a, b, sign))
    return ArcPresentation(count, arc_of_edge, tuple(rels), tuple(shifts))


# -- faces and Reidemeister insertions -------------------------------------

def diagram_faces(D: KnotDiagram) -> list[list[tuple[int, int]]]:
    """Faces as cycles of corners (crossing, i): the region between positions
    i and i+1 (counterclockwise). Leaving corner (c, i) the boundary follows
    the edge at position i+1 with the face on its right."""
    cr = D.crossings
    occ = _occurrences(cr)

    def partner(ci, p):
        a, b = occ[cr[ci][p]]
        return b if a == (ci, p) else a

    seen = set()
    faces = []
    for ci in range(len(cr)):
        for i in range(4):
            if (ci, i) in seen:
                continue
            face = []
            cur = (ci, i)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                c, k = cur
                cur = partner(c, (k + 1) % 4)
            faces.append(face)
    return faces


def _face_edges(D: KnotDiagram, face) -> list[tuple[int, tuple[int, int], tuple[int, int]]]:
    """(label, start occurrence, end occurrence) for each edge walked along a face."""
    cr = D.crossings
    occ = _occurrences(cr)
    out = []
    for c, k in face:
        p = (k + 1) % 4
        e = cr[c][p]
        a, b = occ[e]
        end = b if a == (c, p) else a
        out.append((e, (c, p), end))
    return out


def _is_outgoing(D: KnotDiagram, ci: int, p: int) -> bool:
    return p == 2 or p == 4 - D.over_in[ci]


def _relabel(crossings: list[list[Hashable]], virtual: list[bool], start_keys) -> KnotDiagram:
    """Renumber symbolic edge ids 1..2n along the orientation."""
    over_in = _orient_symbolic(crossings)
    nxt = {}
    for c, oi in zip(crossings, over_in):
        nxt[c[0]] = c[2]
        nxt[c[oi]] = c[4 - oi]
    label = {}
    k = 0
    for key in start_keys:
        if key in label or key not in nxt:
            continue
        x = key
        while x not in label:
            k += 1
            label[x] = k
            x = nxt[x]
    for key in sorted(nxt, key=repr):
        x = key
        while x not in label:
            k += 1
            label[x] = k
            x = nxt[x]
    new = [tuple(label[e] for e in c) for c in crossings]
    return KnotDiagram(tuple(new), tuple(over_in), tuple(virtual), 0)


def _orient_symbolic(crossings) -> tuple[int, ...]:
    ids = {}
    for c in crossings:
        for e in c:
            ids.setdefault(e, len(ids) + 1)
    return _orient([tuple(ids[e] for e in c) for c in crossings])


def _start_keys(D: KnotDiagram, split: dict) -> list:
    """Symbolic ids in original-label order, pieces in orientation order."""
    keys = []
    for e in D.edges:
        keys.extend(split.get(e, [("e", e)]))
    return keys


def r1_add(D: KnotDiagram, edge: int, kink_sign: int = 1, side: str = "left") -> KnotDiagram:
    """Insert a kink with the given crossing sign on ``edge``."""
    if kink_sign not in (1, -1):
        raise ValueError("kink_sign must be +1 or -1")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    p1, p2, p3 = ("s", edge, 0), ("s", edge, 1), ("s", edge, 2)
    if not D.crossings:
        if edge != 1:
            raise DiagramError("the crossingless unknot has the single edge 1")
        p3 = p1
    elif edge not in D.edges:
        raise DiagramError(f"no edge {edge}")
    new = []
    for ci, c in enumerate(D.crossings):
        row = []
        for p, e in enumerate(c):
            if e == edge:
                row.append(p1 if _is_outgoing(D, ci, p) else p3)
            else:
                row.append(("e", e))
        new.append(row)
    kink = {
        ("left", 1): [p1, p3, p2, p2],
        ("left", -1): [p2, p1, p3, p2],
        ("right", 1): [p2, p2, p3, p1],
        ("right", -1): [p1, p2, p2, p3],
    }[(side, kink_sign)]
    new.append(kink)
    virtual = list(D.virtual) + [False]
    pieces = [p1, p2] if p3 == p1 else [p1, p2, p3]
    return _relabel(new, virtual, _start_keys(D, {edge: pieces}))


def r2_faces(D: KnotDiagram, edge1: int, edge2: int) -> list[int]:
    faces = diagram_faces(D)
    out = []
    for fi, face in enumerate(faces):
        labels = [e for e, _, _ in _face_edges(D, face)]
        if edge1 in labels and edge2 in labels:
            out.append(fi)
    return out


def r2_add(D: KnotDiagram, edge1: int, edge2: int, virtual: bool = False,
           face: Optional[int] = None) -> KnotDiagram:
    """Push a finger of ``edge1`` over ``edge2`` across a face they share.

    With ``virtual=True`` both new crossings are virtual (a VR2 insertion).
    """
    if edge1 == edge2:
        raise DiagramError("r2_add needs two distinct edges")
    if not D.crossings:
        # two arcs of the round circle bounding the inner disk
        e1 = [("a", 0), ("m1", 0), ("b", 0)]
        e2 = [("b", 0), ("m2", 0), ("a", 0)]
        s1 = s2 = 1
        new = []
        old_keys = [("m1", 0), ("b", 0), ("m2", 0), ("a", 0)]
        virtual_flags = []
    else:
        for e in (edge1, edge2):
            if e not in D.edges:
                raise DiagramError(f"no edge {e}")
        faces = diagram_faces(D)
        cands = r2_faces(D, edge1, edge2)
        if face is not None:
            if face not in cands:
                raise DiagramError(f"edges {edge1}, {edge2} do not both bound face {face}")
            cands = [face]
        if not cands:
            raise DiagramError(f"edges {edge1} and {edge2} share no face")
        walk = _face_edges(D, faces[cands[0]])
        info = {}
        for e, start, end in walk:
            if e in (edge1, edge2) and e not in info:
                info[e] = (start, end)
        e1 = [("s", edge1, k) for k in range(3)]
        e2 = [("s", edge2, k) for k in range(3)]
        (st1, en1), (st2, en2) = info[edge1], info[edge2]
        s1 = 1 if _is_outgoing(D, *st1) else -1
        s2 = 1 if _is_outgoing(D, *st2) else -1
        new = []
        for ci, c in enumerate(D.crossings):
            row = []
            for p, e in enumerate(c):
                if (ci, p) == st1:
                    row.append(e1[0])
                elif (ci, p) == en1:
                    row.append(e1[2])
                elif (ci, p) == st2:
                    row.append(e2[0])
                elif (ci, p) == en2:
                    row.append(e2[2])
                else:
                    row.append(("e", e))
            new.append(row)
        virtual_flags = list(D.virtual)
        split = {edge1: e1 if s1 == 1 else e1[::-1], edge2: e2 if s2 == 1 else e2[::-1]}
        old_keys = _start_keys(D, split)
    # e1 is walked first through P, then Q; e2 first through Q, then P
    if s2 == 1:
        P = [e2[1], e1[0], e2[2], e1[1]]
        Q = [e2[0], e1[2], e2[1], e1[1]]
    else:
        P = [e2[2], e1[1], e2[1], e1[0]]
        Q = [e2[1], e1[1], e2[0], e1[2]]
    new += [P, Q]
    virtual_flags += [virtual, virtual]
    return _relabel(new, virtual_flags, old_keys)


def r2_candidates(D: KnotDiagram) -> list[tuple[int, int]]:
    """Every ordered pair of distinct edges sharing a face."""
    if not D.crossings:
        return [(1, 2)]
    pairs = set()
    for face in diagram_faces(D):
        labels = [e for e, _, _ in _face_edges(D, face)]
        for a in labels:
            for b in labels:
                if a != b:
                    pairs.add((a, b))
    return sorted(pairs)
