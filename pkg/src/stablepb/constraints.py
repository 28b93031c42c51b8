"""Explicit constraints (X, C) and the monotone-constraint normal form.

:class:`AbstractConstraint` stores its satisfier family as bitmasks over an
ordered domain and is meant for small domains only (tests, examples with
non-convex constraints).  The solving pipeline works on weight atoms; the
``mc`` encoding turns a weight-atom program into an :class:`MProgram` whose
body literals are lower-bound weight atoms, possibly under ``not``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain

from .errors import SizeError, NormalizationError
from .program import FALSUM, Program, Rule, WeightAtom, WeightedElem, is_normalized

MAX_DOMAIN = 16


def _check_size(n):
    if n > MAX_DOMAIN:
        raise SizeError(f"constraint domain of {n} atoms exceeds the limit of {MAX_DOMAIN}")


@dataclass(frozen=True)
class AbstractConstraint:
    domain: tuple[int, ...]
    satisfiers: frozenset[int]  # bitmasks over positions in ``domain``

    def __post_init__(self):
        _check_size(len(self.domain))
        full = (1 << len(self.domain)) - 1
        if any(s & ~full for s in self.satisfiers):
            raise ValueError("satisfier outside the constraint domain")

    @classmethod
    def from_sets(cls, domain, sets):
        domain = tuple(domain)
        pos = {a: i for i, a in enumerate(domain)}
        masks = set()
        for s in sets:
            mask = 0
            for a in s:
                mask |= 1 << pos[a]
            masks.add(mask)
        return cls(domain, frozenset(masks))

    @property
    def consistent(self) -> bool:
        return bool(self.satisfiers)

    def mask_of(self, m) -> int:
        mask = 0
        for i, a in enumerate(self.domain):
            if a in m:
                mask |= 1 << i
        return mask

    def holds(self, m) -> bool:
        return self.mask_of(m) in self.satisfiers

    def sets(self) -> set[frozenset[int]]:
        return {frozenset(a for i, a in enumerate(self.domain) if s >> i & 1)
                for s in self.satisfiers}

    def _full(self):
        return (1 << len(self.domain)) - 1

    def _with(self, masks):
        return AbstractConstraint(self.domain, frozenset(masks))


def eval_constraint(c: AbstractConstraint, m) -> bool:
    return c.holds(m)


def _submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_monotone(c: AbstractConstraint) -> bool:
    # closed under adding one element is enough for closure under superset
    return all((s | (1 << i)) in c.satisfiers
               for s in c.satisfiers for i in range(len(c.domain)) if not s >> i & 1)


def is_antimonotone(c: AbstractConstraint) -> bool:
    return all((s & ~(1 << i)) in c.satisfiers
               for s in c.satisfiers for i in range(len(c.domain)) if s >> i & 1)


def is_convex(c: AbstractConstraint) -> bool:
    sats = c.satisfiers
    for z in sats:
        for y in _submasks(z):
            if y in sats:
                continue
            if any(w in sats for w in _submasks(y)):
                return False
    return True


def upward_closure(c: AbstractConstraint) -> AbstractConstraint:
    full = c._full()
    out = set()
    for w in c.satisfiers:
        out.update(w | extra for extra in _submasks(full & ~w))
    return c._with(out)


def downward_closure(c: AbstractConstraint) -> AbstractConstraint:
    out = set()
    for w in c.satisfiers:
        out.update(_submasks(w))
    return c._with(out)


def dual(c: AbstractConstraint) -> AbstractConstraint:
    return c._with(set(range(c._full() + 1)) - c.satisfiers)


def expand(w: WeightAtom) -> AbstractConstraint:
    """The explicit (X, C) a normalized weight atom stands for."""
    if not w.is_normal or len(w.domain) != len(w.elems):
        raise NormalizationError("expand needs a normalized weight atom")
    _check_size(len(w.elems))
    domain = tuple(e.atom for e in w.elems)
    weights = [e.weight for e in w.elems]
    lo, up = w.lo, w.upper
    masks = []
    for mask in range(1 << len(domain)):
        s = sum(wt for i, wt in enumerate(weights) if mask >> i & 1)
        if s >= lo and (up is None or s <= up):
            masks.append(mask)
    return AbstractConstraint(domain, frozenset(masks))


# --------------------------------------------------------------------------
# Monotone-constraint programs

@dataclass(frozen=True)
class MonoLit:
    atom: WeightAtom  # lower-bound only
    negated: bool = False

    @property
    def domain(self):
        return self.atom.domain

    def holds(self, m) -> bool:
        return self.atom.holds(m) != self.negated


@dataclass(frozen=True)
class MRule:
    head: WeightAtom
    body: tuple[MonoLit, ...] = ()
    origin: int = -1

    @property
    def positive(self):
        return [l.atom for l in self.body if not l.negated]

    @property
    def negative(self):
        return [l.atom for l in self.body if l.negated]

    def applicable(self, m) -> bool:
        return all(l.holds(m) for l in self.body)


@dataclass
class MProgram:
    rules: tuple[MRule, ...]
    atoms: object = None
    origin: dict[int, list[int]] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    @property
    def is_horn(self) -> bool:
        return all(not l.negated for r in self.rules for l in r.body)


def mc_body(body) -> list[MonoLit]:
    """Split two-sided body atoms into a monotone part and a negated monotone part."""
    lits = []
    for b in body:
        if b.lo > 0:
            lits.append(MonoLit(b.lower_part()))
        if not b.upper_vacuous:
            lits.append(MonoLit(WeightAtom(b.upper + 1, None, b.elems), negated=True))
    return lits


def mc_transform(p: Program) -> MProgram:
    if not is_normalized(p):
        raise NormalizationError("mc_transform needs a normalized program")
    rules = []
    origin: dict[int, list[int]] = {}
    for i, r in enumerate(p.rules):
        body = tuple(mc_body(r.body))
        head = r.head if r.head == FALSUM else r.head.lower_part()
        origin[i] = [len(rules)]
        rules.append(MRule(head, body, i))
        if r.head != FALSUM and not r.head.upper_vacuous:
            over = MonoLit(WeightAtom(r.head.upper + 1, None, r.head.elems))
            origin[i].append(len(rules))
            rules.append(MRule(FALSUM, (over,) + body, i))
    return MProgram(tuple(rules), p.atoms, origin)


def cc_transform(mp: MProgram) -> Program:
    """Replace every ``not(l[e])`` with its dual, the upper-bound atom ``[e](l-1)``."""
    rules = []
    for r in mp.rules:
        body = []
        for lit in r.body:
            if not lit.negated:
                body.append(lit.atom)
            elif lit.atom.lo >= 1:
                body.append(WeightAtom(None, lit.atom.lo - 1, lit.atom.elems))
            else:
                # not(0[e]) never holds
                body.append(WeightAtom(lit.atom.total + 1, None, lit.atom.elems))
        rules.append(Rule(r.head, tuple(body)))
    return Program(rules, mp.atoms)


def mp_is_model(m, mp: MProgram) -> bool:
    return all(r.head.holds(m) for r in mp.rules if r.applicable(m))


def mp_atoms(mp: MProgram) -> frozenset[int]:
    return frozenset(chain.from_iterable(
        chain(r.head.domain, *(l.domain for l in r.body)) for r in mp.rules))
