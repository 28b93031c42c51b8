"""The pbmodels loop: solve the completion as PB, check stability, add loop formulas."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .analysis import dependency_graph, induced, terminating_loops
from .constraints import mc_transform
from .errors import StablePBError
from .pbsolver import BackendConfig, SolveResult, Status, solve_builtin, solve_external
from .program import Program
from .semantics import stability
from .translate import (PBConstraint, PBTheory, Translator, clausify, completion,
                        loop_formula, pb_translate, translate_formulas)

log = logging.getLogger(__name__)

NO_MODELS = "no stable models found"


@dataclass
class Iteration:
    candidate: frozenset
    residue: frozenset
    loops: list = field(default_factory=list)
    stable: bool = False


@dataclass
class DriverTrace:
    iterations: list[Iteration] = field(default_factory=list)
    final: Status | None = None  # status of the solver call that ended the run
    diagnostic: str = ""
    solver_calls: int = 0

    @property
    def exhaustive(self) -> bool:
        """True when the run ended on an UNSAT answer of a complete backend."""
        return self.final is Status.UNSAT


def block_model(t: PBTheory, m) -> PBTheory:
    """Exclude every assignment whose projection onto program atoms is ``m``."""
    m = frozenset(m)
    av = t.atom_vars()
    terms = [(-1 if a in m else 1, v) for a, v in av.items()]
    inside = sum(1 for a in av if a in m)
    return t.with_constraints([PBConstraint.make(terms, ">=", 1 - inside)])


def _solve(t: PBTheory, cfg: BackendConfig) -> SolveResult:
    if cfg.kind == "builtin":
        return solve_builtin(t, cfg.timeout)
    return solve_external(t, cfg)


def _project(t: PBTheory, assignment) -> frozenset:
    return frozenset(a for a, v in t.atom_vars().items() if assignment.get(v, 0))


def pbmodels_solve(p: Program, cfg: BackendConfig | None = None, k: int | None = 1):
    """Up to ``k`` stable models of normalized ``p`` (all of them when ``k`` is None or 0).

    Returns ``(models, trace)``.  Loop formulas, once added, stay in the
    theory for the rest of the run; blocking constraints are added only
    for models already output.
    """
    cfg = cfg or BackendConfig()
    limit = None if not k else k
    mp = mc_transform(p)
    graph = dependency_graph(mp)
    tr = Translator.for_program(p)
    translate_formulas(completion(p), tr)
    blocks: list[PBConstraint] = []
    models: list[frozenset] = []
    trace = DriverTrace()
    while limit is None or len(models) < limit:
        t = tr.theory().with_constraints(blocks)
        res = _solve(t, cfg)
        trace.solver_calls += 1
        if res.status is not Status.SAT:
            trace.final = res.status
            trace.diagnostic = res.diagnostic
            break
        cand = _project(t, res.assignment)
        rep = stability(p, cand, mp)
        if not rep.is_model:
            # the completion contains every rule, so this means a broken backend
            raise StablePBError("solver returned an assignment that is not a model of the program")
        if rep.stable:
            trace.iterations.append(Iteration(cand, frozenset(), [], True))
            models.append(cand)
            blocks.append(block_model(t, cand).constraints[-1])
            continue
        loops = terminating_loops(induced(graph, rep.residue))
        if not loops:
            raise StablePBError(f"no terminating loop in a non-empty residue of {sorted(cand)}")
        for loop in loops:
            f = loop_formula(p, loop)
            if f.holds(cand):
                raise StablePBError("loop formula is not violated by its candidate")
            pb_translate(clausify(f, tr), tr)
        log.debug("candidate %s refuted by %d loop(s)", sorted(cand), len(loops))
        trace.iterations.append(Iteration(cand, rep.residue, loops, False))
    else:
        trace.final = Status.SAT
    return models, trace


def status_line(models, trace: DriverTrace) -> str:
    if models:
        return f"Stable models: {len(models)}"
    if trace.exhaustive:
        return f"{NO_MODELS} (exhaustive)"
    return NO_MODELS
