"""Ground benchmark programs: magic square, vertex cover, TSP, weighted n-queens,
weighted Latin square and Towers of Hanoi.

Every generator builds a normalized program directly (no grounder), with
instance data inlined as facts and weight-atom coefficients.  Randomness
comes from ``random.Random(seed)`` only, so instances are reproducible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .program import FALSUM, AtomTable, Program, Rule, WeightAtom, WeightedElem


@dataclass
class Instance:
    kind: str
    program: Program
    data: dict = field(default_factory=dict)


class _Builder:
    def __init__(self):
        self.atoms = AtomTable()
        self.rules: list[Rule] = []

    def wa(self, lower, pairs, upper=None):
        """Weight atom over (name, weight) pairs."""
        elems = tuple(WeightedElem(self.atoms.intern(n), w) for n, w in pairs)
        return WeightAtom(lower, upper, elems)

    def card(self, lower, names, upper=None):
        return self.wa(lower, [(n, 1) for n in names], upper)

    def pos(self, name):
        return self.card(1, [name])

    def neg(self, name):
        return self.card(None, [name], 0)

    def rule(self, head, *body):
        self.rules.append(Rule(head, tuple(body)))

    def deny(self, *body):
        self.rules.append(Rule(FALSUM, tuple(body)))

    def program(self):
        return Program(self.rules, self.atoms)


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)


# --------------------------------------------------------------------------
# Magic square

def magic_square(n: int) -> Instance:
    _need(n >= 1, "magic square needs n >= 1")
    b = _Builder()
    N = n * n
    total = n * (N + 1) // 2
    v = lambda i, j, k: f"v_{i}_{j}_{k}"
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for i, j in cells:
        b.rule(b.card(1, [v(i, j, k) for k in range(1, N + 1)], 1))
    for k in range(1, N + 1):
        b.deny(b.card(2, [v(i, j, k) for i, j in cells]))
    lines = [[(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    lines += [[(i, j) for i in range(1, n + 1)] for j in range(1, n + 1)]
    lines.append([(i, i) for i in range(1, n + 1)])
    lines.append([(i, n + 1 - i) for i in range(1, n + 1)])
    for line in lines:
        pairs = [(v(i, j, k), k) for i, j in line for k in range(1, N + 1)]
        b.deny(b.wa(None, pairs, total - 1))
        b.deny(b.wa(total + 1, pairs))
    return Instance("magic-square", b.program(), {"n": n, "sum": total})


def decode_magic_square(inst: Instance, m) -> list[list[int]]:
    n = inst.data["n"]
    grid = [[0] * n for _ in range(n)]
    for name in inst.program.names(m):
        _, i, j, k = name.split("_")
        grid[int(i) - 1][int(j) - 1] = int(k)
    return grid


# --------------------------------------------------------------------------
# Vertex cover

def random_graph(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    pairs = list(combinations(range(1, n + 1), 2))
    _need(0 <= m <= len(pairs), f"cannot place {m} edges on {n} vertices")
    return sorted(rng.sample(pairs, m))


def min_vertex_cover(n: int, edges) -> int:
    """Exact minimum cover size by branching on an uncovered edge."""
    best = [n]

    def go(chosen, remaining):
        if len(chosen) >= best[0]:
            return
        if not remaining:
            best[0] = len(chosen)
            return
        u, v = remaining[0]
        for w in (u, v):
            go(chosen | {w}, [e for e in remaining if w not in e])

    go(frozenset(), list(edges))
    return best[0]


def vertex_cover(n: int, m: int, k: int | None = None, seed: int = 0) -> Instance:
    _need(n >= 1, "vertex cover needs at least one vertex")
    rng = random.Random(seed)
    edges = random_graph(n, m, rng)
    if k is None:
        k = min_vertex_cover(n, edges)
    _need(k >= 0, "cover bound must be non-negative")
    b = _Builder()
    name = lambda x: f"in_{x}"
    for x in range(1, n + 1):
        b.atoms.intern(name(x))
    for u, v in edges:
        b.rule(b.card(1, [name(u), name(v)]))
    b.deny(b.card(k + 1, [name(x) for x in range(1, n + 1)]))
    return Instance("vertex-cover", b.program(), {"n": n, "edges": edges, "k": k})


def decode_vertex_cover(inst: Instance, m) -> set[int]:
    return {int(s.split("_")[1]) for s in inst.program.names(m)}


# --------------------------------------------------------------------------
# Travelling salesperson

def tsp(n: int, maxw: int = 19, bound: int = 100, seed: int = 0) -> Instance:
    _need(n >= 3, "a Hamiltonian cycle needs at least 3 vertices")
    _need(maxw >= 1 and bound >= 0, "weights and bound must be non-negative")
    rng = random.Random(seed)
    weight = {}
    for i, j in combinations(range(1, n + 1), 2):
        weight[i, j] = weight[j, i] = rng.randint(1, maxw)
    b = _Builder()
    e = lambda i, j: f"in_{i}_{j}"
    r = lambda i: f"r_{i}"
    verts = range(1, n + 1)
    for i in verts:
        b.rule(b.card(1, [e(i, j) for j in verts if j != i], 1))
    for j in verts:
        into = [e(i, j) for i in verts if i != j]
        b.deny(b.card(None, into, 0))
        b.deny(b.card(2, into))
    b.rule(b.pos(r(1)))
    for i in verts:
        for j in verts:
            if j != i and j != 1:
                b.rule(b.pos(r(j)), b.pos(e(i, j)), b.pos(r(i)))
    for j in verts:
        b.deny(b.neg(r(j)))
    b.deny(b.wa(bound + 1, [(e(i, j), weight[i, j]) for i in verts for j in verts if i != j]))
    return Instance("tsp", b.program(), {"n": n, "weight": weight, "bound": bound})


def decode_tsp(inst: Instance, m) -> list[int]:
    """The tour as a vertex sequence starting at vertex 1."""
    succ = {}
    for s in inst.program.names(m):
        parts = s.split("_")
        if parts[0] == "in":
            succ[int(parts[1])] = int(parts[2])
    tour = [1]
    while len(tour) <= len(succ) and succ.get(tour[-1], 1) != 1:
        tour.append(succ[tour[-1]])
    return tour


# --------------------------------------------------------------------------
# Weighted n-queens

def wnqueens(n: int, bound: int, seed: int = 0, maxw: int = 19) -> Instance:
    _need(n >= 1 and bound >= 0, "n-queens needs n >= 1 and a non-negative bound")
    rng = random.Random(seed)
    weight = {(i, j): rng.randint(1, maxw) for i in range(1, n + 1) for j in range(1, n + 1)}
    b = _Builder()
    q = lambda i, j: f"q_{i}_{j}"
    rows = range(1, n + 1)
    for i in rows:
        b.rule(b.card(1, [q(i, j) for j in rows], 1))
    for j in rows:
        b.deny(b.card(2, [q(i, j) for i in rows]))
    for d in range(-(n - 1), n):
        diag = [q(i, i - d) for i in rows if 1 <= i - d <= n]
        if len(diag) > 1:
            b.deny(b.card(2, diag))
    for s in range(2, 2 * n + 1):
        anti = [q(i, s - i) for i in rows if 1 <= s - i <= n]
        if len(anti) > 1:
            b.deny(b.card(2, anti))
    b.deny(b.wa(bound + 1, [(q(i, j), weight[i, j]) for i, j in sorted(weight)]))
    return Instance("wnqueens", b.program(), {"n": n, "weight": weight, "bound": bound})


def decode_wnqueens(inst: Instance, m) -> list[tuple[int, int]]:
    return sorted(tuple(int(x) for x in s.split("_")[1:]) for s in inst.program.names(m))


# --------------------------------------------------------------------------
# Weighted Latin square

def wlatin(n: int, bound: int, seed: int = 0, maxw: int = 9) -> Instance:
    _need(n >= 1 and bound >= 0, "Latin square needs n >= 1 and a non-negative bound")
    rng = random.Random(seed)
    weight = {(i, j): rng.randint(1, maxw) for i in range(1, n + 1) for j in range(1, n + 1)}
    b = _Builder()
    x = lambda i, j, k: f"x_{i}_{j}_{k}"
    idx = range(1, n + 1)
    for i in idx:
        for j in idx:
            b.rule(b.card(1, [x(i, j, k) for k in idx], 1))
    for k in idx:
        for i in idx:
            row = [x(i, j, k) for j in idx]
            b.deny(b.card(2, row))
            b.deny(b.card(None, row, 0))
        for j in idx:
            col = [x(i, j, k) for i in idx]
            b.deny(b.card(2, col))
            b.deny(b.card(None, col, 0))
    b.deny(b.wa(bound + 1, [(x(i, j, k), k * weight[i, j]) for i in idx for j in idx for k in idx]))
    return Instance("wlatin", b.program(), {"n": n, "weight": weight, "bound": bound})


def decode_wlatin(inst: Instance, m) -> list[list[int]]:
    n = inst.data["n"]
    grid = [[0] * n for _ in range(n)]
    for s in inst.program.names(m):
        _, i, j, k = s.split("_")
        grid[int(i) - 1][int(j) - 1] = int(k)
    return grid


# --------------------------------------------------------------------------
# Towers of Hanoi

def hanoi(disks: int, steps: int, init: dict | None = None, goal_peg: int = 3) -> Instance:
    """Move every disk onto ``goal_peg`` in exactly ``steps`` moves.

    Disk 1 is the smallest.  ``init`` maps disk -> peg (default: all on peg 1).
    """
    _need(disks >= 1 and steps >= 0, "Hanoi needs at least one disk and non-negative steps")
    init = dict(init or {d: 1 for d in range(1, disks + 1)})
    _need(sorted(init) == list(range(1, disks + 1)) and all(p in (1, 2, 3) for p in init.values()),
          "initial configuration must place every disk on one of pegs 1..3")
    b = _Builder()
    on = lambda d, p, t: f"on_{d}_{p}_{t}"
    move = lambda d, p, t: f"move_{d}_{p}_{t}"
    moved = lambda d, t: f"moved_{d}_{t}"
    D, P = range(1, disks + 1), (1, 2, 3)
    for d in D:
        b.rule(b.pos(on(d, init[d], 0)))
    for t in range(1, steps + 1):
        b.rule(b.card(1, [move(d, p, t) for d in D for p in P], 1))
        for d in D:
            for p in P:
                b.rule(b.pos(moved(d, t)), b.pos(move(d, p, t)))
                b.rule(b.pos(on(d, p, t)), b.pos(move(d, p, t)))
                b.rule(b.pos(on(d, p, t)), b.pos(on(d, p, t - 1)), b.neg(moved(d, t)))
                b.deny(b.pos(move(d, p, t)), b.pos(on(d, p, t - 1)))
                for e in range(1, d):
                    # a smaller disk on the source or target peg blocks the move
                    b.deny(b.pos(moved(d, t)), b.pos(on(d, p, t - 1)), b.pos(on(e, p, t - 1)))
                    b.deny(b.pos(move(d, p, t)), b.pos(on(e, p, t - 1)))
    for d in D:
        b.deny(b.neg(on(d, goal_peg, steps)))
    return Instance("hanoi", b.program(),
                    {"disks": disks, "steps": steps, "init": init, "goal": goal_peg})


def decode_hanoi(inst: Instance, m) -> list[tuple[int, int]]:
    """Moves as (disk, target peg), in time order."""
    plan = {}
    for s in inst.program.names(m):
        parts = s.split("_")
        if parts[0] == "move":
            plan[int(parts[3])] = (int(parts[1]), int(parts[2]))
    return [plan[t] for t in sorted(plan)]


# --------------------------------------------------------------------------

KINDS = {
    "magic-square": (magic_square, decode_magic_square),
    "vertex-cover": (vertex_cover, decode_vertex_cover),
    "tsp": (tsp, decode_tsp),
    "wnqueens": (wnqueens, decode_wnqueens),
    "wlatin": (wlatin, decode_wlatin),
    "hanoi": (hanoi, decode_hanoi),
}

SEEDED = {"vertex-cover", "tsp", "wnqueens", "wlatin"}


def make_instance(kind: str, params: dict | None = None, seed: int = 0) -> Instance:
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    params = dict(params or {})
    if kind in SEEDED:
        params.setdefault("seed", seed)
    try:
        return KINDS[kind][0](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from None


def generate(kind: str, params: dict | None = None, seed: int = 0) -> Program:
    return make_instance(kind, params, seed).program


def decode(inst: Instance, m):
    return KINDS[inst.kind][1](inst, m)
