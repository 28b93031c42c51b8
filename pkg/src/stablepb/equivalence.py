"""M-maximal models, SE/UE-models, strong and uniform equivalence.

All checks are brute force over the atoms of the two programs and are
meant for small programs (at most 16 atoms together).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

from .constraints import MProgram, mc_transform, mp_is_model
from .errors import NormalizationError, SizeError
from .program import Program, Rule, WeightAtom, WeightedElem, is_model, is_normalized
from .semantics import enum_stable, reduct, subsets

log = logging.getLogger(__name__)

MAX_UNIVERSE = 16


class SEPair(NamedTuple):
    x: frozenset
    y: frozenset


@dataclass
class EquivVerdict:
    equivalent: bool
    witness: SEPair | None = None
    witness_side: str | None = None  # "P" or "Q": the program that has the witness pair
    context: Program | None = None  # a program R telling P and Q apart, when one was found
    note: str = ""
    atoms: object = None  # atom table the witness and context refer to


def is_m_maximal(hp: MProgram, m, n) -> bool:
    """N |=_M P: N is a model of Horn ``hp`` inside M and closed under M-restricted derivation."""
    m, n = frozenset(m), frozenset(n)
    if not n <= m or not mp_is_model(n, hp):
        return False
    for r in hp.rules:
        if r.applicable(n) and not (r.head.domain & m) <= n:
            return False
    return True


def _require_normal(*ps):
    for p in ps:
        if not is_normalized(p):
            raise NormalizationError("equivalence checks need normalized programs")


def is_se_model(p: Program, pair, mp: MProgram | None = None) -> bool:
    x, y = frozenset(pair[0]), frozenset(pair[1])
    if not x <= y or not is_model(y, p):
        return False
    mp = mp if mp is not None else mc_transform(p)
    return is_m_maximal(reduct(mp, y), y, x)


def _universe(p, universe):
    u = frozenset(p.atom_set() if universe is None else universe)
    if len(u) > MAX_UNIVERSE:
        raise SizeError(f"SE enumeration over {len(u)} atoms (limit {MAX_UNIVERSE})")
    return u


def se_models(p: Program, universe=None) -> set[SEPair]:
    _require_normal(p)
    u = _universe(p, universe)
    mp = mc_transform(p)
    out = set()
    for y in subsets(u):
        if not is_model(y, p):
            continue
        hp = reduct(mp, y)
        for x in subsets(y):
            if is_m_maximal(hp, y, x):
                out.add(SEPair(x, y))
    return out


def ue_filter(se: set[SEPair]) -> set[SEPair]:
    """Keep (X,Y) when every SE pair (X',Y) with X below X' has X'=X or X'=Y."""
    by_y: dict = {}
    for x, y in se:
        by_y.setdefault(y, []).append(x)
    out = set()
    for x, y in se:
        if all(x2 == x or x2 == y for x2 in by_y[y] if x <= x2):
            out.add(SEPair(x, y))
    return out


def ue_models(p: Program, universe=None) -> set[SEPair]:
    return ue_filter(se_models(p, universe))


# --------------------------------------------------------------------------
# Deciding equivalence

def common_table(p: Program, q: Program) -> tuple[Program, Program]:
    """Both programs over one atom table (atoms identified by name)."""
    if p.atoms is q.atoms:
        return p, q
    joined = p | q
    return Program(joined.rules[:len(p.rules)], joined.atoms), Program(joined.rules[len(p.rules):], joined.atoms)


def all_of(atoms) -> WeightAtom:
    """|S|{S}: holds exactly when every atom of S is true."""
    atoms = sorted(atoms)
    return WeightAtom(len(atoms), None, tuple(WeightedElem(a, 1) for a in atoms))


def facts(atoms, table) -> Program:
    return Program([Rule(all_of(atoms))] if atoms else [], table)


def _pair_key(pair, table):
    return (len(pair.y), table.to_names(pair.y), len(pair.x), table.to_names(pair.x))


def se_context(has: Program, lacks: Program, pair: SEPair) -> Program:
    """A program R such that Y is stable for exactly one of ``has`` + R and ``lacks`` + R.

    When Y is a model of both, Y becomes stable for ``lacks`` + R only.
    """
    x, y = pair
    table = has.atoms
    if not is_model(y, lacks):
        # Y is a model of only one side; the facts Y already separate them
        return facts(y, table)
    hp = reduct(mc_transform(lacks), y)
    derived = set()
    for r in hp.rules:
        if r.applicable(x):
            derived |= r.head.domain
    x2 = (frozenset(derived) & y) - x
    rules = []
    if x:
        rules.append(Rule(all_of(x)))
    rules.append(Rule(all_of(y), (all_of(x2),) if x2 else ()))
    return Program(rules, table)


def _separates(p, q, r, y=None) -> bool:
    if y is not None:
        from .semantics import is_stable
        return is_stable(p | r, y) != is_stable(q | r, y)
    return enum_stable(p | r) != enum_stable(q | r)


def strongly_equivalent(p: Program, q: Program) -> EquivVerdict:
    _require_normal(p, q)
    p, q = common_table(p, q)
    universe = _universe(p, p.atom_set() | q.atom_set())
    sp, sq = se_models(p, universe), se_models(q, universe)
    if sp == sq:
        return EquivVerdict(True, atoms=p.atoms)
    diff = sorted(sp ^ sq, key=lambda pr: _pair_key(pr, p.atoms))
    pair = diff[0]
    side = "P" if pair in sp else "Q"
    has, lacks = (p, q) if side == "P" else (q, p)
    r = se_context(has, lacks, pair)
    if _separates(has, lacks, r, pair.y):
        return EquivVerdict(False, pair, side, r, atoms=p.atoms)
    log.warning("constructed context does not separate the programs; reporting the SE witness only")
    return EquivVerdict(False, pair, side, None, note="context construction failed to separate", atoms=p.atoms)


def uniformly_equivalent(p: Program, q: Program) -> EquivVerdict:
    _require_normal(p, q)
    p, q = common_table(p, q)
    universe = _universe(p, p.atom_set() | q.atom_set())
    up, uq = ue_models(p, universe), ue_models(q, universe)
    if up == uq:
        return EquivVerdict(True, atoms=p.atoms)
    diff = sorted(up ^ uq, key=lambda pr: _pair_key(pr, p.atoms))
    pair = diff[0]
    side = "P" if pair in up else "Q"
    for d in subsets(universe):
        r = facts(d, p.atoms)
        if _separates(p, q, r):
            return EquivVerdict(False, pair, side, r, atoms=p.atoms)
    log.warning("no fact context separates the programs; reporting the UE witness only")
    return EquivVerdict(False, pair, side, None, note="no separating fact context found", atoms=p.atoms)
