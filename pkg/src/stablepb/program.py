"""Ground weight-constraint programs: atoms, weight atoms, rules, parsing.

A weight atom ``l[a1=w1,...,ak=wk]u`` is satisfied by an interpretation M
when the total weight of the true elements lies in ``[l, u]``.  A missing
lower bound means 0, a missing upper bound means the sum of all weights.
Interpretations are frozensets of integer atom ids handed out by an
:class:`AtomTable`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import NormalizationError, ParseError

AUX_PREFIX = "__aux_"
KEYWORDS = ("not", "false")


class AtomTable:
    """Bidirectional map between atom names and dense integer ids."""

    def __init__(self, names: Iterable[str] = ()):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        idx = self.index.get(name)
        if idx is None:
            idx = len(self.names)
            self.names.append(name)
            self.index[name] = idx
        return idx

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.index

    def name(self, atom: int) -> str:
        return self.names[atom]

    def id(self, name: str) -> int:
        return self.index[name]

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index[n] for n in names)

    def to_names(self, atoms: Iterable[int]) -> list[str]:
        return sorted(self.names[a] for a in atoms)

    def copy(self) -> AtomTable:
        return AtomTable(self.names)

    def fresh_aux(self, base: str) -> int:
        name = AUX_PREFIX + base
        k = 1
        while name in self.index:
            k += 1
            name = f"{AUX_PREFIX}{base}_{k}"
        return self.intern(name)

    def __repr__(self):
        return f"AtomTable({self.names!r})"


class WeightedElem(NamedTuple):
    atom: int
    weight: int = 1
    negated: bool = False


@dataclass(frozen=True)
class WeightAtom:
    lower: int | None
    upper: int | None
    elems: tuple[WeightedElem, ...]

    @classmethod
    def of(cls, lower, elems, upper=None):
        """Build from ``(atom, weight)`` pairs or bare atom ids."""
        out = []
        for e in elems:
            if isinstance(e, WeightedElem):
                out.append(e)
            elif isinstance(e, tuple):
                out.append(WeightedElem(*e))
            else:
                out.append(WeightedElem(e, 1))
        return cls(lower, upper, tuple(out))

    @property
    def total(self) -> int:
        return sum(e.weight for e in self.elems)

    @property
    def lo(self) -> int:
        return 0 if self.lower is None else self.lower

    @property
    def hi(self) -> int:
        return self.total if self.upper is None else self.upper

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(e.atom for e in self.elems)

    @property
    def is_normal(self) -> bool:
        return all(e.weight >= 0 and not e.negated for e in self.elems)

    def weight_in(self, m) -> int:
        return sum(e.weight for e in self.elems if (e.atom in m) != e.negated)

    def holds(self, m) -> bool:
        s = self.weight_in(m)
        if s < self.lo:
            return False
        return self.upper is None or s <= self.upper

    @property
    def lower_vacuous(self) -> bool:
        return self.lo <= 0

    @property
    def upper_vacuous(self) -> bool:
        return self.upper is None or self.upper >= self.total

    def lower_part(self) -> WeightAtom:
        return WeightAtom(self.lo, None, self.elems)

    def upper_part(self) -> WeightAtom:
        return WeightAtom(None, self.upper, self.elems)

    def key(self):
        """Order-insensitive structural key with both bounds materialized."""
        return (self.lo, self.hi, tuple(sorted(self.elems)))


FALSUM = WeightAtom(1, None, ())


@dataclass(frozen=True)
class Rule:
    head: object  # WeightAtom, or AbstractConstraint for hand-built programs
    body: tuple = ()

    @property
    def is_constraint(self) -> bool:
        return self.head == FALSUM


class Program:
    """An ordered list of rules over a (possibly shared) atom table."""

    def __init__(self, rules: Iterable[Rule] = (), atoms: AtomTable | None = None):
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.atoms = atoms if atoms is not None else AtomTable()

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        if self.atoms is other.atoms:
            return self.rules == other.rules
        return render_program(self) == render_program(other)

    def __repr__(self):
        return f"Program({len(self.rules)} rules)"

    def atom_set(self) -> frozenset[int]:
        """At(P): every atom occurring in a head or body domain."""
        out = set()
        for r in self.rules:
            out.update(r.head.domain)
            for b in r.body:
                out.update(b.domain)
        return frozenset(out)

    def interp(self, names: Iterable[str]) -> frozenset[int]:
        return self.atoms.ids(names)

    def names(self, m: Iterable[int]) -> list[str]:
        return self.atoms.to_names(m)

    def union(self, other: Program) -> Program:
        if other.atoms is self.atoms:
            return Program(self.rules + other.rules, self.atoms)
        table = self.atoms.copy()
        remap = {i: table.intern(n) for i, n in enumerate(other.atoms.names)}
        moved = [_remap_rule(r, remap) for r in other.rules]
        return Program(self.rules + tuple(moved), table)

    def __or__(self, other):
        return self.union(other)


def _remap_atom(w, remap):
    return WeightAtom(w.lower, w.upper, tuple(e._replace(atom=remap[e.atom]) for e in w.elems))


def _remap_rule(r, remap):
    return Rule(_remap_atom(r.head, remap), tuple(_remap_atom(b, remap) for b in r.body))


# --------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>%[^\n]*) |
    (?P<if>:-) |
    (?P<int>[0-9]+) |
    (?P<ident>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<punct>[.,{}\[\]=\-])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            yield kind, m.group(), line, col
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text, atoms, allow_aux):
        self.toks = list(_tokenize(text))
        self.i = 0
        self.atoms = atoms
        self.allow_aux = allow_aux

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg):
        _, value, line, col = self.tok
        found = repr(value) if value else "end of input"
        raise ParseError(f"{msg}, found {found}", line, col)

    def accept(self, value):
        if self.tok[1] == value and self.tok[0] in ("punct", "if", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            self.error(f"expected {value!r}")

    def atom(self):
        kind, value, line, col = self.tok
        if kind != "ident" or value in KEYWORDS:
            self.error("expected an atom")
        if value.startswith(AUX_PREFIX) and not self.allow_aux:
            raise ParseError(f"atom names starting with {AUX_PREFIX!r} are reserved", line, col)
        self.i += 1
        return self.atoms.intern(value)

    def integer(self):
        if self.tok[0] != "int":
            self.error("expected an integer")
        value = int(self.tok[1])
        self.i += 1
        return value

    def lit(self):
        negated = self.accept("not")
        return self.atom(), negated

    def watom(self):
        kind, value, _, _ = self.tok
        lower = None
        if kind == "int":
            lower = self.integer()
        elif kind == "ident":
            if self.accept("not"):
                return WeightAtom(None, 0, (WeightedElem(self.atom(), 1),))
            return WeightAtom(1, None, (WeightedElem(self.atom(), 1),))
        if self.accept("{"):
            elems = self.elem_list("}", weighted=False)
        elif self.accept("["):
            elems = self.elem_list("]", weighted=True)
        else:
            self.error("expected a weight atom")
        upper = self.integer() if self.tok[0] == "int" else None
        return WeightAtom(lower, upper, tuple(elems))

    def elem_list(self, close, weighted):
        elems = []
        if self.accept(close):
            return elems
        while True:
            atom, negated = self.lit()
            weight = 1
            if weighted:
                self.expect("=")
                sign = -1 if self.accept("-") else 1
                weight = sign * self.integer()
            elems.append(WeightedElem(atom, weight, negated))
            if self.accept(close):
                return elems
            self.expect(",")

    def rule(self):
        if self.accept("false"):
            head = FALSUM
        else:
            head = self.watom()
        body = []
        if self.accept(":-"):
            body.append(self.watom())
            while self.accept(","):
                body.append(self.watom())
        self.expect(".")
        return Rule(head, tuple(body))

    def program(self):
        rules = []
        while self.tok[0] != "eof":
            rules.append(self.rule())
        return rules


def parse_program(text: str, atoms: AtomTable | None = None, allow_aux: bool = False) -> Program:
    """Parse program text.  Pass ``atoms`` to share a table between programs."""
    atoms = atoms if atoms is not None else AtomTable()
    return Program(_Parser(text, atoms, allow_aux).program(), atoms)


def parse_watom(text: str, atoms: AtomTable, allow_aux: bool = False) -> WeightAtom:
    p = _Parser(text, atoms, allow_aux)
    w = p.watom()
    if p.tok[0] != "eof":
        p.error("trailing input after weight atom")
    return w


# --------------------------------------------------------------------------
# Rendering

def render_watom(w: WeightAtom, atoms: AtomTable) -> str:
    def lit(e):
        return ("not " if e.negated else "") + atoms.name(e.atom)

    if all(e.weight == 1 for e in w.elems):
        inner = "{" + ",".join(lit(e) for e in w.elems) + "}"
    else:
        inner = "[" + ",".join(f"{lit(e)}={e.weight}" for e in w.elems) + "]"
    lo = "" if w.lower is None else str(w.lower)
    hi = "" if w.upper is None else str(w.upper)
    return lo + inner + hi


def render_rule(r: Rule, atoms: AtomTable) -> str:
    if not isinstance(r.head, WeightAtom):
        raise TypeError("only weight-atom rules can be rendered")
    head = "false" if r.head == FALSUM else render_watom(r.head, atoms)
    if not r.body:
        return head + "."
    return head + " :- " + ", ".join(render_watom(b, atoms) for b in r.body) + "."


def render_program(p: Program) -> str:
    return "".join(render_rule(r, p.atoms) + "\n" for r in p.rules)


# --------------------------------------------------------------------------
# Normalization

def _normalize_watom(w, neg_atom_for):
    shift = 0
    merged: dict[tuple[int, bool], int] = {}
    for e in w.elems:
        atom, weight, negated = e
        if weight < 0:
            # a=w with w<0 is not(a)=-w after moving -w into both bounds
            negated = not negated
            weight = -weight
            shift += weight
        key = (atom, negated)
        merged[key] = merged.get(key, 0) + weight
    elems = []
    for (atom, negated), weight in merged.items():
        if negated:
            atom = neg_atom_for(atom)
        elems.append((atom, weight))
    combined: dict[int, int] = {}
    for atom, weight in elems:
        combined[atom] = combined.get(atom, 0) + weight
    lower, upper = w.lower, w.upper
    if shift:
        lower = (lower or 0) + shift
        if upper is not None:
            upper += shift
    return WeightAtom(lower, upper, tuple(WeightedElem(a, wt) for a, wt in combined.items()))


def normalize(p: Program) -> tuple[Program, dict[int, int]]:
    """Rewrite into non-negative weights over positive atoms only.

    Negative weights are flipped onto the negated literal with the bounds
    shifted; each negated element ``not a`` is then replaced by a fresh atom
    defined by ``1{__aux_a} :- {a}0.``.  Returns the program and a map from
    each fresh atom to the atom it negates.
    """
    if all(isinstance(r.head, WeightAtom) and r.head.is_normal
           and all(b.is_normal and _merged(b) for b in r.body) and _merged(r.head)
           for r in p.rules):
        return p, {}

    atoms = p.atoms
    aux_of: dict[int, int] = {}
    aux_map: dict[int, int] = {}

    def neg_atom_for(a):
        nonlocal atoms
        if a not in aux_of:
            if atoms is p.atoms:
                atoms = p.atoms.copy()
            aux = atoms.fresh_aux(atoms.name(a))
            aux_of[a] = aux
            aux_map[aux] = a
        return aux_of[a]

    def head_atom(w):
        if any(e.negated != (e.weight < 0) for e in w.elems):
            raise NormalizationError("negative literals are not allowed in rule heads")
        return _normalize_watom(w, neg_atom_for)

    rules = []
    for r in p.rules:
        head = r.head if r.head == FALSUM else head_atom(r.head)
        body = tuple(_normalize_watom(b, neg_atom_for) for b in r.body)
        rules.append(Rule(head, body))
    for a, aux in aux_of.items():
        rules.append(Rule(WeightAtom(1, None, (WeightedElem(aux, 1),)),
                          (WeightAtom(None, 0, (WeightedElem(a, 1),)),)))
    return Program(rules, atoms), aux_map


def _merged(w):
    return len({e.atom for e in w.elems}) == len(w.elems)


def is_normalized(p: Program) -> bool:
    return all(isinstance(r.head, WeightAtom) and r.head.is_normal and _merged(r.head)
               and all(isinstance(b, WeightAtom) and b.is_normal and _merged(b) for b in r.body)
               for r in p.rules)


# --------------------------------------------------------------------------
# Basic semantics

def satisfies_watom(m, w) -> bool:
    return w.holds(m)


def applicable_rules(p: Program, m) -> list[int]:
    """Indices of the M-applicable rules, P(M)."""
    return [i for i, r in enumerate(p.rules) if all(b.holds(m) for b in r.body)]


def headset(rules: Iterable[Rule]) -> frozenset[int]:
    out = set()
    for r in rules:
        out.update(r.head.domain)
    return frozenset(out)


def is_model(m, p: Program) -> bool:
    return all(r.head.holds(m) for r in p.rules if all(b.holds(m) for b in r.body))
