"""Positive dependency graphs, strongly connected components, loops, tightness."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .constraints import MProgram, mc_transform
from .errors import SizeError
from .program import Program

MAX_ALL_LOOPS = 12


@dataclass
class Digraph:
    vertices: frozenset
    edges: dict = field(default_factory=dict)  # vertex -> set of successors

    def succ(self, v):
        return self.edges.get(v, ())

    def edge_list(self):
        return sorted((u, v) for u in self.edges for v in self.edges[u])

    def has_edge(self, u, v):
        return v in self.edges.get(u, ())


def dependency_graph(p: Program | MProgram) -> Digraph:
    """Edge u -> v when u is in a head domain and v in a positive body domain of one mc rule."""
    mp = p if isinstance(p, MProgram) else mc_transform(p)
    vertices = set()
    edges: dict = {}
    for r in mp.rules:
        vertices |= r.head.domain
        body = set()
        for lit in r.body:
            vertices |= lit.domain
            if not lit.negated:
                body |= lit.domain
        if body:
            for u in r.head.domain:
                edges.setdefault(u, set()).update(body)
    if isinstance(p, Program):
        vertices |= p.atom_set()
    return Digraph(frozenset(vertices), edges)


def induced(g: Digraph, s) -> Digraph:
    s = frozenset(s) & g.vertices
    edges = {}
    for u in s:
        out = {v for v in g.succ(u) if v in s}
        if out:
            edges[u] = out
    return Digraph(s, edges)


def sccs(g: Digraph) -> list[frozenset]:
    """Tarjan's algorithm, iterative; components come out sinks first."""
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in sorted(g.vertices):
        if root in index:
            continue
        work = [(root, iter(sorted(g.succ(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(g.succ(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def maximal_loops(g: Digraph) -> list[frozenset]:
    return sorted(sccs(g), key=sorted)


def terminating_loops(g: Digraph) -> list[frozenset]:
    """Maximal loops with no edge into a different maximal loop."""
    comps = sccs(g)
    where = {v: i for i, c in enumerate(comps) for v in c}
    term = [c for i, c in enumerate(comps)
            if all(where[w] == i for v in c for w in g.succ(v))]
    return sorted(term, key=sorted)


def is_strongly_connected(g: Digraph, s) -> bool:
    s = frozenset(s)
    if not s:
        return False
    start = min(s)
    for forward in (True, False):
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            nbrs = g.succ(v) if forward else [u for u in s if v in g.succ(u)]
            for w in nbrs:
                if w in s and w not in seen:
                    seen.add(w)
                    todo.append(w)
        if seen != s:
            return False
    return True


def all_loops(g: Digraph) -> list[frozenset]:
    """Every nonempty vertex set inducing a strongly connected subgraph."""
    if len(g.vertices) > MAX_ALL_LOOPS:
        raise SizeError(f"loop enumeration over {len(g.vertices)} vertices (limit {MAX_ALL_LOOPS})")
    loops = []
    for comp in sccs(g):
        members = sorted(comp)
        for k in range(1, len(members) + 1):
            for combo in combinations(members, k):
                if k == 1 or is_strongly_connected(g, combo):
                    loops.append(frozenset(combo))
    return sorted(loops, key=lambda l: (len(l), sorted(l)))


def tight_on(p: Program | MProgram, m) -> bool:
    """True iff a level mapping exists on M, i.e. the relevance graph H is acyclic.

    H has an edge x -> a for every M-applicable mc rule with x in M and its
    head domain, and a in M and some positive body domain.
    """
    m = frozenset(m)
    mp = p if isinstance(p, MProgram) else mc_transform(p)
    edges: dict = {}
    for r in mp.rules:
        if not r.applicable(m):
            continue
        heads = r.head.domain & m
        body = set()
        for lit in r.body:
            if not lit.negated:
                body |= lit.domain & m
        for x in heads:
            edges.setdefault(x, set()).update(body)
    h = Digraph(m, edges)
    return all(len(c) == 1 and not h.has_edge(next(iter(c)), next(iter(c))) for c in sccs(h))


def format_loops(loops, atoms) -> str:
    """One loop per line, atom names sorted and space separated, lines sorted."""
    lines = sorted(" ".join(sorted(atoms.name(a) for a in loop)) for loop in loops)
    return "".join(line + "\n" for line in lines)
