"""Closed singular braid diagrams as oriented planar graphs.

A diagram is built from a braid word read top to bottom.  Generators:

    s<i>   positive crossing on strands (i, i+1)
    -s<i>  negative crossing
    x<i>   singular 4-valent vertex
    b<i>   bivalent marker on strand i

Strands are oriented upward, so the closed braid winds clockwise in the
plane, and the closure arc of strand 1 (the leftmost) passes outside all
the others.  Rows are indexed 0..m-1; gap g is the horizontal level just
above row g, with the level below the last row glued back onto gap 0 by
the closure.  An edge is a maximal strand segment between vertices and is
stored as the (gap, position) cells it crosses, in flow order.  At a
4-valent vertex the ports are out_left, out_right (above) and in_left,
in_right (below).

Edge ids come from one deterministic scan: for each gap top to bottom and
each position left to right, an unseen cell starts the next edge.  On the
right-handed trefoil ("s1 s1 s1" on 2 strands) this reproduces the usual
picture's labels e_0..e_5, with e_0 the top-left edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    vid: int
    kind: str                     # "x", "s+", "s-", "b"
    ports: dict
    row: int | None = None

    @property
    def is_four_valent(self) -> bool:
        return self.kind in ("x", "s+", "s-")

    @property
    def is_crossing(self) -> bool:
        return self.kind in ("s+", "s-")

    @property
    def sign(self) -> int:
        if self.kind == "s+":
            return 1
        if self.kind == "s-":
            return -1
        raise ValueError("sign of a non-crossing vertex")

    def in_edges(self):
        if self.kind == "b":
            return [self.ports["in"]]
        return [self.ports["in_left"], self.ports["in_right"]]

    def out_edges(self):
        if self.kind == "b":
            return [self.ports["out"]]
        return [self.ports["out_left"], self.ports["out_right"]]

    def edge_set(self):
        return set(self.in_edges()) | set(self.out_edges())


@dataclass(frozen=True)
class Edge:
    eid: int
    segments: tuple               # ((gap, pos), ...) in flow order
    tail: tuple | None            # (vid, port) emitting this edge
    head: tuple | None            # (vid, port) absorbing it


@dataclass(frozen=True)
class SingularBraidDiagram:
    strands: int
    word: tuple
    edges: dict                   # eid -> Edge
    vertices: tuple
    marked_edge: int | None = None
    joins: dict = field(default_factory=dict)   # smoothed-crossing passthroughs
    gap_count: int = 1

    def edge_ids(self):
        return sorted(self.edges)

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.vid == vid:
                return v
        raise KeyError(vid)

    @property
    def crossings(self):
        return [v for v in self.vertices if v.is_crossing]

    @property
    def singular_vertices(self):
        return [v for v in self.vertices if v.kind == "x"]

    @property
    def bivalent_vertices(self):
        return [v for v in self.vertices if v.kind == "b"]

    def is_classical(self) -> bool:
        return not self.singular_vertices

    def is_fully_singular(self) -> bool:
        return not self.crossings

    def writhe(self) -> int:
        return sum(v.sign for v in self.crossings)

    def occupancy(self, gap: int) -> int:
        return sum(1 for e in self.edges.values()
                   for (g, _p) in e.segments if g == gap)

    def key(self):
        """Hashable identity for caches."""
        return (self.strands, tuple(sorted(self.edges)),
                tuple((v.vid, v.kind, tuple(sorted(v.ports.items())))
                      for v in self.vertices),
                tuple(sorted(self.joins.items())), self.marked_edge)

    def to_json(self) -> str:
        doc = {
            "schema": 1,
            "strands": self.strands,
            "word": [list(t) for t in self.word],
            "edges": [
                {"id": e.eid,
                 "segments": [list(s) for s in e.segments],
                 "tail": list(e.tail) if e.tail else None,
                 "head": list(e.head) if e.head else None}
                for e in (self.edges[i] for i in self.edge_ids())
            ],
            "vertices": [
                {"id": v.vid, "kind": v.kind, "row": v.row,
                 "ports": {k: v.ports[k] for k in sorted(v.ports)}}
                for v in self.vertices
            ],
            "marked": self.marked_edge,
        }
        return json.dumps(doc, sort_keys=True)


# ---------------------------------------------------------------------------
# construction

_TOKEN_KINDS = {"s": "s+", "x": "x", "b": "b"}


def parse_word(text: str):
    word = []
    for tok in text.split():
        neg = tok.startswith("-")
        body = tok[1:] if neg else tok
        if not body or body[0] not in _TOKEN_KINDS or not body[1:].isdigit():
            raise DiagramError(f"unknown token {tok!r}")
        kind = _TOKEN_KINDS[body[0]]
        if neg:
            if kind != "s+":
                raise DiagramError(f"only crossings may be negated: {tok!r}")
            kind = "s-"
        word.append((kind, int(body[1:])))
    return tuple(word)


def parse_diagram(text: str, strands: int,
                  marked: int | None = None) -> SingularBraidDiagram:
    """Build the closed diagram of a braid word on the given strand count."""
    if strands < 1:
        raise DiagramError("strand count must be positive")
    word = parse_word(text)
    for kind, i in word:
        hi = strands if kind == "b" else strands - 1
        if not 1 <= i <= hi:
            raise DiagramError(
                f"generator index {i} out of range for {strands} strands")

    m = len(word)
    gaps = max(m, 1)
    touched = [({i} if kind == "b" else {i, i + 1}) for kind, i in word]

    seg_edge: dict[tuple, int] = {}
    edges: dict[int, Edge] = {}
    eid = 0

    for g0 in range(gaps):
        for p in range(1, strands + 1):
            if (g0, p) in seg_edge:
                continue
            if m == 0 or not any(p in t for t in touched):
                # free circle: one edge through every gap at this position
                segs = tuple((g, p) for g in range(gaps))
                for s in segs:
                    seg_edge[s] = eid
                edges[eid] = Edge(eid, segs, None, None)
                eid += 1
                continue
            # find the bottom cell: walk down across untouched rows
            g = g0
            while p not in touched[g]:
                g = (g + 1) % m
            tail_row = g
            # collect cells walking up until a row absorbs the strand
            segs = [(g, p)]
            while True:
                r_up = (g - 1) % m
                if p in touched[r_up]:
                    head_row = r_up
                    break
                g = (g - 1) % m
                segs.append((g, p))
            for s in segs:
                seg_edge[s] = eid
            edges[eid] = Edge(eid, tuple(segs),
                              ("row", tail_row), ("row", head_row))
            eid += 1

    vertices = []
    for t, (kind, i) in enumerate(word):
        up_gap = t
        down_gap = (t + 1) % m
        if kind == "b":
            ports = {"out": seg_edge[(up_gap, i)],
                     "in": seg_edge[(down_gap, i)]}
        else:
            ports = {"out_left": seg_edge[(up_gap, i)],
                     "out_right": seg_edge[(up_gap, i + 1)],
                     "in_left": seg_edge[(down_gap, i)],
                     "in_right": seg_edge[(down_gap, i + 1)]}
        vertices.append(Vertex(t, kind, ports, row=t))

    # rewrite row references into (vid, port) endpoints
    out_port = {}
    in_port = {}
    for v in vertices:
        for pname, e in v.ports.items():
            if pname.startswith("out"):
                out_port[(e, v.vid)] = pname
            else:
                in_port[(e, v.vid)] = pname
    fixed = {}
    for e in edges.values():
        tail = head = None
        if e.tail is not None:
            vid = e.tail[1]
            tail = (vid, out_port[(e.eid, vid)])
        if e.head is not None:
            vid = e.head[1]
            head = (vid, in_port[(e.eid, vid)])
        fixed[e.eid] = Edge(e.eid, e.segments, tail, head)

    if marked is not None and marked not in fixed:
        raise DiagramError(f"marked edge {marked} not present")
    return SingularBraidDiagram(strands, word, fixed, tuple(vertices),
                                marked_edge=marked, gap_count=gaps)


# ---------------------------------------------------------------------------
# Seifert circles and rotation numbers

@dataclass(frozen=True)
class SeifertData:
    circles: tuple                # tuple of tuples of edge ids
    signs: tuple                  # per circle: -1, 0, +1
    rotation: int


def _successor(D: SingularBraidDiagram, eid: int) -> int:
    """Next edge under the oriented smoothing of every vertex."""
    e = D.edges[eid]
    if e.head is None:
        return D.joins.get(eid, eid)
    vid, port = e.head
    v = D.vertex(vid)
    if v.kind == "b":
        return v.ports["out"]
    side = "left" if port.endswith("left") else "right"
    return v.ports[f"out_{side}"]


def seifert_circles(D: SingularBraidDiagram):
    seen = set()
    out = []
    for start in D.edge_ids():
        if start in seen:
            continue
        cyc = []
        e = start
        while True:
            cyc.append(e)
            seen.add(e)
            e = _successor(D, e)
            if e == start:
                break
            if e in seen:
                raise DiagramError("edge successors do not form a permutation")
        out.append(tuple(cyc))
    return out


def _circle_profile(D: SingularBraidDiagram, circle) -> dict:
    """gap -> position crossed by the circle; every circle winds once."""
    prof = {}
    for eid in circle:
        for (g, p) in D.edges[eid].segments:
            if g in prof:
                raise DiagramError("circle crosses a gap twice")
            prof[g] = p
    return prof


def seifert_data(D: SingularBraidDiagram,
                 relative_to: Edge | None = None) -> SeifertData:
    """Seifert circles with signs.

    Unmarked: every circle of a closed braid runs clockwise and counts -1.
    Marked (relative to a reference edge, possibly one of a parent diagram):
    the circle through the marked edge counts 0; any other circle counts +1
    exactly when the marked edge lies inside its planar disc.  Strand 1
    closes outermost, so "inside" means a strictly larger position at the
    gap level where the reference edge sits.
    """
    if relative_to is None and D.marked_edge is not None:
        relative_to = D.edges[D.marked_edge]
    circles = seifert_circles(D)
    signs = []
    for cyc in circles:
        prof = _circle_profile(D, cyc)
        if relative_to is None:
            signs.append(-1)
            continue
        if relative_to.eid in cyc:
            signs.append(0)
            continue
        g0, p0 = relative_to.segments[0]
        signs.append(1 if p0 > prof[g0] else -1)
    return SeifertData(tuple(circles), tuple(signs), sum(signs))


def strand_rotation(D: SingularBraidDiagram) -> int:
    """-(number of strands): intersections with the cut line at gap 0."""
    return -D.occupancy(0)


# ---------------------------------------------------------------------------
# multi-cycles and labelings

@dataclass(frozen=True)
class MultiCycle:
    edges: frozenset
    cycle_count: int
    T1: int
    T2: int
    D1: int
    D2: int

    @property
    def rotation(self) -> int:
        return -self.cycle_count


@dataclass(frozen=True)
class Labeling:
    edges_one: frozenset          # f^{-1}(1)
    turns: int                    # T(f), counted at crossings
    neg_turns: int                # turns taken at negative crossings
    T1: int                       # local pair statistics at 4-valent vertices
    T2: int

    def label(self, eid: int) -> int:
        return 1 if eid in self.edges_one else 2


def _port_pattern(v: Vertex, Z) -> frozenset:
    return frozenset(p for p, e in v.ports.items() if e in Z)


def _pair_stats(D: SingularBraidDiagram, Z):
    """T1, T2, D1, D2 over 4-valent vertices (local edge pairs of Z)."""
    t1 = t2 = d1 = d2 = 0
    for v in D.vertices:
        if not v.is_four_valent:
            continue
        pat = _port_pattern(v, Z)
        if {"out_left", "in_left"} <= pat:
            t1 += 1
        if {"out_right", "in_right"} <= pat:
            t2 += 1
        if {"out_left", "in_right"} <= pat:
            d1 += 1
        if {"out_right", "in_left"} <= pat:
            d2 += 1
    return t1, t2, d1, d2


def balanced_subsets(D: SingularBraidDiagram, forbid_full_four: bool):
    """Edge subsets with equal in/out port count at every vertex.

    Port counts, not raw edge counts, so loop edges at a vertex contribute
    to both sides.  With forbid_full_four the subsets covering all four
    ports of a 4-valent vertex are rejected (the multi-cycle rule).
    """
    eids = D.edge_ids()
    checks = [(v.in_edges(), v.out_edges(), v.is_four_valent)
              for v in D.vertices]
    out = []
    Z = set()

    def ok():
        for ins, outs, four in checks:
            ni = sum(1 for e in ins if e in Z)
            no = sum(1 for e in outs if e in Z)
            if ni != no:
                return False
            if forbid_full_four and four and ni + no == 4:
                return False
        return True

    def rec(i):
        if i == len(eids):
            if ok():
                out.append(frozenset(Z))
            return
        rec(i + 1)
        Z.add(eids[i])
        rec(i + 1)
        Z.discard(eids[i])

    rec(0)
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def _count_cycles(D: SingularBraidDiagram, Z) -> int:
    if not Z:
        return 0
    nxt = {}
    for eid in Z:
        e = D.edges[eid]
        if e.head is None:
            j = D.joins.get(eid, eid)
            nxt[eid] = j if j in Z else eid
            continue
        vid, _port = e.head
        v = D.vertex(vid)
        ins = [x for x in v.in_edges() if x in Z]
        outs = [x for x in v.out_edges() if x in Z]
        if len(ins) != 1 or len(outs) != 1:
            raise DiagramError("subset is not a multi-cycle at some vertex")
        nxt[eid] = outs[0]
    seen = set()
    k = 0
    for start in Z:
        if start in seen:
            continue
        k += 1
        e = start
        while e not in seen:
            seen.add(e)
            e = nxt[e]
    return k


def enumerate_multicycles(D: SingularBraidDiagram):
    """All multi-cycles of a crossingless diagram, with statistics."""
    if D.crossings:
        raise DiagramError("multi-cycles need a fully singular diagram")
    return [MultiCycle(Z, _count_cycles(D, Z), *_pair_stats(D, Z))
            for Z in balanced_subsets(D, forbid_full_four=True)]


def _turn_data(D: SingularBraidDiagram, Z):
    """(turns at crossings, turns at negative crossings, admissible?).

    Turns at negative crossings enter the composition products with weight
    -(q - q^{-1}); the count is carried separately for that sign.
    """
    turns = 0
    neg = 0
    admissible = True
    for v in D.vertices:
        if not v.is_crossing:
            continue
        pat = _port_pattern(v, Z)
        covered = sum(1 for e in v.ports.values() if e in Z)
        if covered != 2:
            continue
        if pat >= {"in_left", "out_left"}:
            turns += 1
            neg += v.sign < 0
            if v.sign > 0:
                admissible = False    # left turn at a positive crossing
        elif pat >= {"in_right", "out_right"}:
            turns += 1
            neg += v.sign < 0
            if v.sign < 0:
                admissible = False    # right turn at a negative crossing
    return turns, neg, admissible


def enumerate_labelings(D: SingularBraidDiagram,
                        require_marked_2: bool = False,
                        admissible_only: bool = False):
    """All labelings f with f^{-1}(1) a homological cycle.

    Homological cycles may use all four edges at a vertex; admissibility
    restricts turns at crossings only.
    """
    if require_marked_2 and D.marked_edge is None:
        raise DiagramError("require_marked_2 needs a marked edge")
    out = []
    for Z in balanced_subsets(D, forbid_full_four=False):
        if require_marked_2 and D.marked_edge in Z:
            continue
        turns, neg, admissible = _turn_data(D, Z)
        if admissible_only and not admissible:
            continue
        t1, t2, _d1, _d2 = _pair_stats(D, Z)
        out.append(Labeling(Z, turns, neg, t1, t2))
    return out


def is_multicycle_set(D: SingularBraidDiagram, Z) -> bool:
    for v in D.vertices:
        ins = sum(1 for e in v.in_edges() if e in Z)
        outs = sum(1 for e in v.out_edges() if e in Z)
        if ins != outs:
            return False
        if v.is_four_valent and ins + outs == 4:
            return False
    return True


def adjacent_sign_sum(D: SingularBraidDiagram, edges_one, label: int) -> int:
    """s(D_{f,label}): signed crossings with some adjacent edge labeled so."""
    cls = set(edges_one) if label == 1 else set(D.edges) - set(edges_one)
    return sum(v.sign for v in D.crossings if v.edge_set() & cls)


# ---------------------------------------------------------------------------
# subdiagrams

def subdiagram(D: SingularBraidDiagram, keep,
               kind: str = "S-Z") -> SingularBraidDiagram:
    """Diagram on a kept edge set; original edge ids are preserved.

    A vertex with every port kept survives unchanged.  A 4-valent vertex
    with one kept in and one kept out becomes 2-valent when singular, and a
    plain strand (a join, no vertex) when it is a crossing.  Vertices with
    no kept edge disappear.
    """
    keep = frozenset(keep)
    for eid in keep:
        if eid not in D.edges:
            raise DiagramError(f"edge {eid} not in diagram")
    vertices = []
    joins = {a: b for a, b in D.joins.items() if a in keep and b in keep}
    kept_vids = set()
    for v in D.vertices:
        ports = {p: e for p, e in v.ports.items() if e in keep}
        if not ports:
            continue
        if len(ports) == len(v.ports):
            vertices.append(v)
            kept_vids.add(v.vid)
            continue
        ins = [e for p, e in ports.items() if p.startswith("in")]
        outs = [e for p, e in ports.items() if p.startswith("out")]
        if len(ins) != 1 or len(outs) != 1:
            raise DiagramError(f"kept set unbalanced at vertex {v.vid}")
        if v.is_crossing:
            joins[ins[0]] = outs[0]
        else:
            vertices.append(Vertex(v.vid, "b",
                                   {"in": ins[0], "out": outs[0]}, row=v.row))
            kept_vids.add(v.vid)
    edges = {}
    for eid in keep:
        e = D.edges[eid]
        tail = e.tail if e.tail and e.tail[0] in kept_vids else None
        head = e.head if e.head and e.head[0] in kept_vids else None
        edges[eid] = Edge(eid, e.segments, tail, head)
    mk = D.marked_edge if D.marked_edge in keep else None
    return SingularBraidDiagram(D.strands, (), edges, tuple(vertices),
                                marked_edge=mk, joins=joins,
                                gap_count=D.gap_count)


def as_braid_word(D: SingularBraidDiagram):
    """Equivalent braid word for the retained crossings of a (sub)diagram.

    Every circle of a balanced class winds once around the braid axis, so
    compressing the occupied positions at each level order-preservingly
    turns the class into a closed braid on #(occupied positions) strands.
    Bivalent vertices are dropped.  Returns (word string, strand count).
    """
    strands = D.occupancy(0)
    rows = []
    for v in D.vertices:
        if not v.is_crossing:
            continue
        g = v.row
        left_edge = D.edges[v.ports["out_left"]]
        pos = [p for (gg, p) in left_edge.segments if gg == g]
        if len(pos) != 1:
            raise DiagramError("could not locate crossing position")
        occupied = sorted(p for e in D.edges.values()
                          for (gg, p) in e.segments if gg == g)
        rank = occupied.index(pos[0]) + 1
        rows.append((v.row, v.sign, rank))
    rows.sort()
    word = " ".join(("s" if s > 0 else "-s") + str(r) for (_t, s, r) in rows)
    return word, strands
