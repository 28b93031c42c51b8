"""Pseudo-boolean solving: a complete built-in search and an external adapter.

The built-in solver is a plain DPLL search.  Every constraint is kept as
``sum c_i * l_i >= d`` over literals with positive coefficients, together
with its slack ``sum of c_i over non-false literals - d``.  A negative slack
is a conflict; an unassigned literal whose coefficient exceeds the slack is
implied.  Variables are decided in index order, false first, with
chronological backtracking.
"""
from __future__ import annotations

import enum
import os
import re
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass

from .translate import PBConstraint, PBTheory, emit_opb


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolveResult:
    status: Status
    assignment: dict | None = None  # var -> 0/1, present iff SAT
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    wall_time: float = 0.0
    diagnostic: str = ""


@dataclass
class BackendConfig:
    kind: str = "builtin"  # "builtin" or "external"
    command: str | None = None  # template with an {opb} placeholder
    timeout: float | None = None

    def __post_init__(self):
        if self.kind not in ("builtin", "external"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "external" and not self.command:
            raise ValueError("an external backend needs a command template")


class _Timeout(Exception):
    pass


class BuiltinSolver:
    """Reusable search state for one theory; call :meth:`solve` repeatedly."""

    def __init__(self, num_vars: int, constraints):
        self.num_vars = num_vars
        self.lits: list[list[int]] = []
        self.coefs: list[list[int]] = []
        self.degree: list[int] = []
        self.occ: list[list[tuple[int, int]]] = [[] for _ in range(2 * num_vars + 2)]
        self.trivially_unsat = False
        for con in constraints:
            for g in con.as_geq():
                self._add(g)

    @classmethod
    def from_theory(cls, t: PBTheory) -> BuiltinSolver:
        return cls(t.num_vars, t.constraints)

    def _add(self, con: PBConstraint):
        d = con.bound
        items = []
        for c, v in con.terms:
            if c > 0:
                items.append((c, 2 * v))
            else:
                items.append((-c, 2 * v + 1))
                d -= c
        if d <= 0:
            return
        items.sort(key=lambda t: -t[0])
        if sum(c for c, _ in items) < d:
            self.trivially_unsat = True
        ci = len(self.degree)
        self.lits.append([l for _, l in items])
        self.coefs.append([min(c, d) for c, _ in items])
        self.degree.append(d)
        for c, l in zip(self.coefs[ci], self.lits[ci]):
            # the constraint loses c of slack when l becomes false, i.e. l^1 true
            self.occ[l ^ 1].append((ci, c))

    def solve(self, assumptions=(), timeout: float | None = None) -> SolveResult:
        """``assumptions`` is an iterable of (var, 0/1) pairs fixed before search."""
        start = time.monotonic()
        deadline = None if timeout is None else start + timeout
        res = SolveResult(Status.UNKNOWN)
        try:
            status, assignment = self._search(list(assumptions), deadline, res)
        except _Timeout:
            status, assignment = Status.UNKNOWN, None
            res.diagnostic = "timeout"
        res.status = status
        res.assignment = assignment
        res.wall_time = time.monotonic() - start
        return res

    def _search(self, assumptions, deadline, res):
        if self.trivially_unsat:
            return Status.UNSAT, None
        n = self.num_vars
        value = [-1] * (n + 1)
        slack = [sum(cs) - d for cs, d in zip(self.coefs, self.degree)]
        trail: list[int] = []  # true literals, slack already charged
        lits, coefs, occ = self.lits, self.coefs, self.occ

        def lit_value(l):
            v = value[l >> 1]
            return -1 if v < 0 else (v ^ (l & 1))

        def assign(l):
            value[l >> 1] = 1 ^ (l & 1)
            trail.append(l)
            for ci, c in occ[l]:
                slack[ci] -= c

        def check(ci):
            # returns False on conflict, otherwise assigns implied literals
            s = slack[ci]
            if s < 0:
                return False
            cl = coefs[ci]
            if cl[0] > s:
                for j, lj in enumerate(lits[ci]):
                    if cl[j] <= s:
                        break
                    if lit_value(lj) < 0:
                        assign(lj)
                        res.propagations += 1
            return True

        def propagate(qhead):
            while qhead < len(trail):
                l = trail[qhead]
                qhead += 1
                for ci, _ in occ[l]:
                    if not check(ci):
                        return False
            return True

        def undo_to(size):
            while len(trail) > size:
                l = trail.pop()
                value[l >> 1] = -1
                for ci, c in occ[l]:
                    slack[ci] += c

        for ci in range(len(self.degree)):
            if not check(ci):
                return Status.UNSAT, None
        for var, val in assumptions:
            l = 2 * var + (0 if val else 1)
            cur = lit_value(l)
            if cur == 0:
                return Status.UNSAT, None
            if cur < 0:
                assign(l)
        if not propagate(0):
            return Status.UNSAT, None

        decisions: list[tuple[int, int]] = []  # (trail size before, decided literal)
        nxt = 1
        while True:
            while nxt <= n and value[nxt] >= 0:
                nxt += 1
            if nxt > n:
                return Status.SAT, {v: value[v] for v in range(1, n + 1)}
            if deadline is not None and res.decisions % 64 == 0 and time.monotonic() > deadline:
                raise _Timeout
            res.decisions += 1
            size = len(trail)
            l = 2 * nxt + 1  # false first
            decisions.append((size, l))
            assign(l)
            ok = propagate(size)
            while not ok:
                res.conflicts += 1
                # flip the most recent decision still on its first branch
                while decisions and decisions[-1][1] & 1 == 0:
                    decisions.pop()
                if not decisions:
                    return Status.UNSAT, None
                size, l = decisions.pop()
                undo_to(size)
                decisions.append((size, l ^ 1))
                assign(l ^ 1)
                nxt = l >> 1
                ok = propagate(size)


def solve_builtin(t: PBTheory, timeout: float | None = None, assumptions=()) -> SolveResult:
    return BuiltinSolver.from_theory(t).solve(assumptions, timeout)


# --------------------------------------------------------------------------
# OPB input and external solvers

_TERM_RE = re.compile(r"([+-]?\d+)\s+(~?)x(\d+)")


def parse_opb(text: str) -> PBTheory:
    """Read OPB text (as written by :func:`emit_opb`) back into a theory."""
    num_vars = 0
    constraints = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            m = re.search(r"#variable=\s*(\d+)", line)
            if m:
                num_vars = max(num_vars, int(m.group(1)))
            continue
        if line.startswith(("min:", "max:")):
            raise ValueError("objective functions are not supported")
        line = line.rstrip(";").strip()
        m = re.match(r"(.*?)(>=|<=|=)\s*([+-]?\d+)$", line)
        if m is None:
            raise ValueError(f"malformed OPB constraint: {raw!r}")
        lhs, rel, bound = m.group(1), m.group(2), int(m.group(3))
        terms = []
        for c, neg, v in _TERM_RE.findall(lhs):
            c, v = int(c), int(v)
            num_vars = max(num_vars, v)
            if neg:  # c * ~x = c - c * x
                terms.append((-c, v))
                bound -= c
            else:
                terms.append((c, v))
        constraints.append(PBConstraint.make(terms, rel, bound))
    return PBTheory(tuple(constraints), tuple(("var", i) for i in range(1, num_vars + 1)))


def parse_solver_output(text: str) -> SolveResult:
    """Parse PB-competition style output: an ``s`` status line plus ``v`` lines."""
    status = None
    assignment: dict[int, int] = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "s" and len(parts) >= 2:
            word = " ".join(parts[1:])
            status = {"SATISFIABLE": Status.SAT, "OPTIMUM FOUND": Status.SAT,
                      "UNSATISFIABLE": Status.UNSAT, "UNKNOWN": Status.UNKNOWN}.get(word)
            if status is None:
                return SolveResult(Status.UNKNOWN, diagnostic=f"unrecognized status line: {line!r}")
        elif parts[0] == "v":
            for tok in parts[1:]:
                m = re.fullmatch(r"(-|~)?x(\d+)", tok)
                if m is None:
                    return SolveResult(Status.UNKNOWN, diagnostic=f"bad literal {tok!r} in value line")
                assignment[int(m.group(2))] = 0 if m.group(1) else 1
    if status is None:
        return SolveResult(Status.UNKNOWN, diagnostic="no status line in solver output")
    if status is Status.SAT:
        return SolveResult(status, assignment)
    return SolveResult(status)


def solve_external(t: PBTheory, cfg: BackendConfig) -> SolveResult:
    if cfg.kind != "external":
        raise ValueError("solve_external needs an external backend configuration")
    start = time.monotonic()
    fd, path = tempfile.mkstemp(suffix=".opb")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(emit_opb(t))
        cmd = cfg.command.replace("{opb}", shlex.quote(path))
        try:
            proc = subprocess.run(cmd, shell=True, capture_output=True, text=True,
                                  timeout=cfg.timeout)
        except subprocess.TimeoutExpired:
            return SolveResult(Status.UNKNOWN, diagnostic="external solver timed out",
                               wall_time=time.monotonic() - start)
        except OSError as exc:
            return SolveResult(Status.UNKNOWN, diagnostic=f"could not run solver: {exc}",
                               wall_time=time.monotonic() - start)
        res = parse_solver_output(proc.stdout)
        if res.status is Status.UNKNOWN and not res.diagnostic and proc.returncode not in (0, 10, 20):
            res.diagnostic = f"solver exited with status {proc.returncode}"
        if res.status is Status.SAT:
            res.assignment = {v: res.assignment.get(v, 0) for v in range(1, t.num_vars + 1)}
        res.wall_time = time.monotonic() - start
        return res
    finally:
        os.unlink(path)


def solve(t: PBTheory, cfg: BackendConfig | None = None) -> SolveResult:
    cfg = cfg or BackendConfig()
    if cfg.kind == "builtin":
        return solve_builtin(t, cfg.timeout)
    return solve_external(t, cfg)
