"""Reducts, canonical computations and stable/supported model checks.

Stability of a weight-atom program is always decided on its ``mc`` image:
M is stable when it is a model and the canonical computation of the reduct
``mc(P)^M`` inside M reaches all of M.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .constraints import MProgram, MRule, mc_transform, mp_is_model
from .errors import NotAModelError, SizeError
from .program import Program, applicable_rules, headset, is_model

MAX_ENUM_MODELS = 20
MAX_ENUM_STABLE = 16


@dataclass(frozen=True)
class StabilityReport:
    model: frozenset
    canonical: frozenset
    residue: frozenset
    stable: bool
    supported: bool
    is_model: bool


def reduct(mp: MProgram, m) -> MProgram:
    """Drop rules with an M-satisfied ``not(B)``, then strip the remaining negations."""
    rules = []
    for r in mp.rules:
        if any(lit.negated and lit.atom.holds(m) for lit in r.body):
            continue
        rules.append(MRule(r.head, tuple(l for l in r.body if not l.negated), r.origin))
    return MProgram(tuple(rules), mp.atoms, mp.origin)


def _canonical_naive(rules, m):
    x = frozenset()
    while True:
        nxt = set()
        for r in rules:
            if r.applicable(x):
                nxt |= r.head.domain
        nxt = frozenset(nxt) & m
        if nxt == x:
            return x
        x = nxt


def _canonical_counting(rules, m):
    # per positive literal: weight still missing to reach its lower bound;
    # per rule: number of literals not yet satisfied
    occurs: dict[int, list[tuple[int, int, int]]] = {}
    missing_weight = []
    pending = []
    queue = []
    derived = set()

    def fire(ri):
        for a in rules[ri].head.domain:
            if a in m and a not in derived:
                derived.add(a)
                queue.append(a)

    for ri, r in enumerate(rules):
        need = []
        for li, lit in enumerate(r.body):
            need.append(lit.atom.lo)
            for e in lit.atom.elems:
                occurs.setdefault(e.atom, []).append((ri, li, e.weight))
        missing_weight.append(need)
        pending.append(sum(1 for n in need if n > 0))
    for ri in range(len(rules)):
        if pending[ri] == 0:
            fire(ri)
    while queue:
        a = queue.pop()
        for ri, li, wt in occurs.get(a, ()):
            before = missing_weight[ri][li]
            missing_weight[ri][li] = before - wt
            if before > 0 >= before - wt:
                pending[ri] -= 1
                if pending[ri] == 0:
                    fire(ri)
    return frozenset(derived)


def canonical(hp: MProgram, m, naive: bool = False, check: bool = True) -> frozenset:
    """Can(P, M): the bottom-up fixpoint X_{k+1} = hset(P(X_k)) & M from the empty set."""
    m = frozenset(m)
    if any(l.negated for r in hp.rules for l in r.body):
        raise ValueError("canonical computation needs a Horn program (take the reduct first)")
    if check and not mp_is_model(m, hp):
        raise NotAModelError("canonical computation needs M to be a model of the program")
    if naive:
        return _canonical_naive(hp.rules, m)
    return _canonical_counting(hp.rules, m)


def is_derivable(hp: MProgram, m) -> bool:
    m = frozenset(m)
    return mp_is_model(m, hp) and canonical(hp, m, check=False) == m


def is_supported(p: Program, m) -> bool:
    m = frozenset(m)
    if not is_model(m, p):
        return False
    return m <= headset(p.rules[i] for i in applicable_rules(p, m))


def stability(p: Program, m, mp: MProgram | None = None) -> StabilityReport:
    """Full stability diagnosis of M; pass ``mp`` to reuse a precomputed mc(P)."""
    m = frozenset(m)
    if not is_model(m, p):
        return StabilityReport(m, frozenset(), m, False, False, False)
    mp = mp if mp is not None else mc_transform(p)
    can = canonical(reduct(mp, m), m, check=False)
    supported = m <= headset(p.rules[i] for i in applicable_rules(p, m))
    return StabilityReport(m, can, m - can, can == m, supported, True)


def is_stable(p: Program, m, mp: MProgram | None = None) -> bool:
    return stability(p, m, mp).stable


def subsets(atoms):
    atoms = sorted(atoms)
    for k in range(len(atoms) + 1):
        for combo in combinations(atoms, k):
            yield frozenset(combo)


def _atoms_for(p, limit):
    atoms = p.atom_set()
    if len(atoms) > limit:
        raise SizeError(f"brute-force enumeration over {len(atoms)} atoms (limit {limit})")
    return atoms


def enum_models(p: Program) -> set[frozenset]:
    return {m for m in subsets(_atoms_for(p, MAX_ENUM_MODELS)) if is_model(m, p)}


def enum_supported(p: Program) -> set[frozenset]:
    return {m for m in subsets(_atoms_for(p, MAX_ENUM_STABLE)) if is_supported(p, m)}


def enum_stable(p: Program) -> set[frozenset]:
    atoms = _atoms_for(p, MAX_ENUM_STABLE)
    mp = mc_transform(p)
    return {m for m in subsets(atoms) if is_stable(p, m, mp)}


def horn_from_program(p: Program) -> MProgram:
    """mc(P) for a program that must already be Horn after the encoding."""
    mp = mc_transform(p)
    if not mp.is_horn:
        raise ValueError("program has negated literals after the mc encoding")
    return mp
