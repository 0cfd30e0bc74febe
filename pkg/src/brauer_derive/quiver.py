"""Brauer quivers of one-loop Brauer graphs.

The quiver Q of a graph T has one vertex per edge of T and one arrow for
each consecutive-incidence step at a vertex of T.  Its arrows organize into
oriented cycles, one per graph vertex, except at the loop vertex where the
single cycle splits into the loop arrow (alone in its camp) and the
exceptional cycle through all cycle edges.  Cycles are two-colored into
alpha and beta camps so that cycles sharing a quiver vertex get different
colors; the exceptional cycle is beta, the loop arrow alpha.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import BrauerGraph

ALPHA = "alpha"
BETA = "beta"


class InternalError(Exception):
    """Camp coloring failed; impossible on validated input."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    camp: str


@dataclass(frozen=True)
class QCycle:
    arrows: tuple[Arrow, ...]
    graph_vertex: str
    camp: str
    exceptional: bool

    def __bool__(self):
        return bool(self.arrows)


@dataclass(frozen=True)
class CycleWord:
    base: str
    arrows: tuple[Arrow, ...]

    def names(self):
        return tuple(a.name for a in self.arrows)

    def __bool__(self):
        return bool(self.arrows)


class BrauerQuiver:
    def __init__(self, graph, vertices, arrows, cycles):
        self.graph = graph
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.cycles = tuple(cycles)
        self.by_name = {a.name: a for a in self.arrows}
        self.alpha_out = {a.source: a for a in self.arrows if a.camp == ALPHA}
        self.beta_out = {a.source: a for a in self.arrows if a.camp == BETA}
        self.alpha_in = {a.target: a for a in self.arrows if a.camp == ALPHA}
        self.beta_in = {a.target: a for a in self.arrows if a.camp == BETA}
        self.loop_vertex = graph.loop_edge
        self.loop_arrow = self.alpha_out[self.loop_vertex]
        self.exceptional_cycle = next(c for c in self.cycles if c.exceptional)
        self.exceptional_vertices = frozenset(graph.cycle_edges)

    def arrows_by_source(self, v):
        out = []
        if v in self.beta_out:
            out.append(self.beta_out[v])
        if v in self.alpha_out:
            out.append(self.alpha_out[v])
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, BrauerQuiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )


def _raw_cycles(g: BrauerGraph):
    """(graph_vertex, [(src_edge, tgt_edge), ...]) for each vertex, with the
    loop vertex split into the loop step and the exceptional cycle."""
    out = []
    for v in g.vertices:
        lst = v.cyclic
        m = len(lst)
        if m == 1:
            out.append((v.id, [], False))
            continue
        steps = [(lst[i], lst[(i + 1) % m]) for i in range(m)]
        if v.id == g.center:
            loop = g.loop_edge
            first = next(
                i for i in range(m) if lst[i] == loop and lst[(i + 1) % m] == loop
            )
            loop_step = steps[first]
            rest = [steps[(first + k) % m] for k in range(1, m)]
            out.append((v.id, [loop_step], "loop"))
            out.append((v.id, rest, True))
        else:
            out.append((v.id, steps, False))
    return out


def build_quiver(g: BrauerGraph) -> BrauerQuiver:
    raw = _raw_cycles(g)
    nontrivial = [(vid, steps, tag) for vid, steps, tag in raw if steps]
    # Two-color the nontrivial cycles: same quiver vertex => different camps.
    colors = {}
    edge_members = {}
    for idx, (vid, steps, tag) in enumerate(nontrivial):
        for s, _t in steps:
            edge_members.setdefault(s, []).append(idx)
    seed = next(i for i, (_, _, tag) in enumerate(nontrivial) if tag is True)
    colors[seed] = BETA
    queue = [seed]
    while queue:
        i = queue.pop()
        for e, members in edge_members.items():
            if i not in members:
                continue
            for j in members:
                if j == i:
                    continue
                want = ALPHA if colors[i] == BETA else BETA
                if j in colors:
                    if colors[j] != want:
                        raise InternalError("camp 2-coloring failed")
                else:
                    colors[j] = want
                    queue.append(j)
    if len(colors) != len(nontrivial):
        raise InternalError("camp coloring did not reach every cycle")
    loop_idx = next(i for i, (_, _, tag) in enumerate(nontrivial) if tag == "loop")
    if colors[loop_idx] != ALPHA:
        raise InternalError("loop arrow forced out of the alpha camp")

    prefix = {ALPHA: "a", BETA: "b"}
    arrows_of = {}
    cycles = []
    for idx, (vid, steps, tag) in enumerate(nontrivial):
        camp = colors[idx]
        cyc_arrows = []
        for s, t in steps:
            arrow = Arrow(f"{prefix[camp]}_{s}", s, t, camp)
            cyc_arrows.append(arrow)
            arrows_of[arrow.name] = arrow
        cycles.append(QCycle(tuple(cyc_arrows), vid, camp, tag is True))
    # Trivial cycles at leaves: camp opposite to the edge's other cycle.
    camp_of_edge = {}
    for cyc in cycles:
        for a in cyc.arrows:
            camp_of_edge.setdefault(a.source, set()).add(cyc.camp)
    for vid, steps, tag in raw:
        if steps:
            continue
        edge = g.vertex_map[vid].cyclic[0]
        other = camp_of_edge.get(edge, {BETA})
        camp = ALPHA if BETA in other else BETA
        cycles.append(QCycle((), vid, camp, False))

    vertices = g.canonical_order
    ordered = [arrows_of[f"b_{v}"] for v in vertices if f"b_{v}" in arrows_of]
    ordered += [arrows_of[f"a_{v}"] for v in vertices if f"a_{v}" in arrows_of]
    cycles.sort(key=lambda c: (g.canonical_index.get(_cycle_anchor(c, g), 0), c.camp))
    return BrauerQuiver(g, vertices, ordered, cycles)


def _cycle_anchor(c: QCycle, g: BrauerGraph):
    if c.arrows:
        return min((a.source for a in c.arrows), key=lambda e: g.canonical_index[e])
    return g.vertex_map[c.graph_vertex].cyclic[0]


def cycle_at(q: BrauerQuiver, v: str, camp: str) -> CycleWord:
    """The full cycle word at a quiver vertex in the given camp.

    For beta at an exceptional vertex other than the loop this is the
    extended cycle that inserts the loop arrow while passing the loop
    vertex; trivial cycles give the empty word.
    """
    if camp not in (ALPHA, BETA):
        raise ValueError(f"camp must be {ALPHA!r} or {BETA!r}")
    outgoing = q.alpha_out if camp == ALPHA else q.beta_out
    if v not in outgoing:
        return CycleWord(v, ())
    special = camp == BETA and v != q.loop_vertex and v in q.exceptional_vertices
    arrows = []
    at = v
    while True:
        arrow = outgoing[at]
        arrows.append(arrow)
        at = arrow.target
        if special and at == q.loop_vertex:
            arrows.append(q.loop_arrow)
        if at == v:
            return CycleWord(v, tuple(arrows))


def quiver_to_dot(q: BrauerQuiver) -> str:
    lines = ["digraph brauer_quiver {"]
    for v in q.vertices:
        lines.append(f'  "{v}";')
    for a in q.arrows:
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.name}" camp="{a.camp}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
