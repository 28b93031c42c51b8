"""Completion, loop formulas and their translation to pseudo-boolean constraints.

Formulas are kept in three shapes only: rule implications, support
implications ``x -> bd(r1) | ... | bd(rl)`` and loop formulas
``OR(L) -> beta_L(r1) | ...``.  :func:`clausify` turns each into weight-atom
clauses with auxiliary atoms, :func:`pb_translate` turns clauses into 0-1
linear constraints.  Both share a :class:`Translator`, which owns the PB
variable numbering (program atoms first, then auxiliary atoms in order of
creation) and remembers which weight atoms already have an indicator.
"""
from __future__ import annotations

from dataclasses import dataclass

from .analysis import all_loops, dependency_graph
from .errors import NormalizationError
from .program import FALSUM, Program, WeightAtom, WeightedElem, is_normalized, render_watom


@dataclass(frozen=True)
class RuleImpl:
    body: tuple[WeightAtom, ...]
    head: WeightAtom

    def holds(self, m) -> bool:
        return not all(b.holds(m) for b in self.body) or self.head.holds(m)


@dataclass(frozen=True)
class SupportImpl:
    atom: int
    bodies: tuple[tuple[WeightAtom, ...], ...]
    rules: tuple[int, ...] = ()

    def holds(self, m) -> bool:
        return self.atom not in m or any(all(b.holds(m) for b in body) for body in self.bodies)


@dataclass(frozen=True)
class LoopImpl:
    loop: frozenset
    supports: tuple[tuple[WeightAtom, ...], ...]
    rules: tuple[int, ...] = ()

    def holds(self, m) -> bool:
        return not (self.loop & m) or any(all(b.holds(m) for b in s) for s in self.supports)


def holds_all(formulas, m) -> bool:
    return all(f.holds(m) for f in formulas)


def unit(atom: int) -> WeightAtom:
    return WeightAtom(1, None, (WeightedElem(atom, 1),))


def _require_normal(p):
    if not is_normalized(p):
        raise NormalizationError("program must be normalized first")


def completion(p: Program) -> list:
    _require_normal(p)
    out = [RuleImpl(tuple(r.body), r.head) for r in p.rules]
    for x in sorted(p.atom_set()):
        idx = tuple(i for i, r in enumerate(p.rules) if x in r.head.domain)
        out.append(SupportImpl(x, tuple(tuple(p.rules[i].body) for i in idx), idx))
    return out


def restrict_watom(w: WeightAtom, loop) -> WeightAtom:
    """Drop elements over ``loop`` and keep the lower bound.

    This is the monotone reading of restricting a constraint to the sets
    that avoid the loop: both agree on every interpretation disjoint from
    the loop, and only this one stays monotone.
    """
    if w.upper is not None:
        raise ValueError("restriction is defined for lower-bound atoms only")
    return WeightAtom(w.lower, None, tuple(e for e in w.elems if e.atom not in loop))


def loop_support(body, loop) -> tuple[WeightAtom, ...]:
    conj = []
    for b in body:
        if b.lo > 0:
            conj.append(restrict_watom(b.lower_part(), loop))
        if not b.upper_vacuous:
            conj.append(b.upper_part())
    return tuple(conj)


def loop_formula(p: Program, loop) -> LoopImpl:
    _require_normal(p)
    loop = frozenset(loop)
    if not loop:
        raise ValueError("loop must be nonempty")
    idx = tuple(i for i, r in enumerate(p.rules)
                if r.head != FALSUM and loop & r.head.domain)
    return LoopImpl(loop, tuple(loop_support(p.rules[i].body, loop) for i in idx), idx)


def loop_completion(p: Program) -> list:
    return completion(p) + [loop_formula(p, l) for l in all_loops(dependency_graph(p))]


# --------------------------------------------------------------------------
# Clauses and PB theories

@dataclass(frozen=True)
class Clause:
    """B1 & ... & Bm -> H1 | ... | Hn over weight atoms on PB variables."""
    body: tuple[WeightAtom, ...]
    head: tuple[WeightAtom, ...]


@dataclass(frozen=True)
class PBConstraint:
    terms: tuple[tuple[int, int], ...]  # (coefficient, variable), sorted by variable
    relation: str  # ">=", "<=" or "="
    bound: int

    @classmethod
    def make(cls, terms, relation, bound):
        merged: dict[int, int] = {}
        for c, v in terms:
            merged[v] = merged.get(v, 0) + c
        return cls(tuple((c, v) for v, c in sorted(merged.items()) if c != 0), relation, bound)

    def holds(self, value) -> bool:
        s = sum(c * value(v) for c, v in self.terms)
        if self.relation == ">=":
            return s >= self.bound
        if self.relation == "<=":
            return s <= self.bound
        return s == self.bound

    def as_geq(self) -> list[PBConstraint]:
        if self.relation == ">=":
            return [self]
        neg = PBConstraint(tuple((-c, v) for c, v in self.terms), ">=", -self.bound)
        if self.relation == "<=":
            return [neg]
        return [PBConstraint(self.terms, ">=", self.bound), neg]


@dataclass(frozen=True)
class PBTheory:
    constraints: tuple[PBConstraint, ...]
    varmap: tuple[tuple, ...]  # provenance of variable i+1

    @property
    def num_vars(self) -> int:
        return len(self.varmap)

    def atom_vars(self) -> dict[int, int]:
        return {tag[1]: i + 1 for i, tag in enumerate(self.varmap) if tag[0] == "atom"}

    def with_constraints(self, extra) -> PBTheory:
        return PBTheory(self.constraints + tuple(extra), self.varmap)


class Translator:
    """Variable allocator and indicator memo shared by clausify and pb_translate."""

    def __init__(self, atoms):
        self.varmap: list[tuple] = []
        self.var_of: dict[int, int] = {}
        for a in sorted(atoms):
            self.varmap.append(("atom", a))
            self.var_of[a] = len(self.varmap)
        self.constraints: list[PBConstraint] = []
        self._indicator: dict = {}
        self._support_aux: dict = {}

    @classmethod
    def for_program(cls, p: Program) -> Translator:
        return cls(p.atom_set())

    def new_var(self, tag) -> int:
        self.varmap.append(tag)
        return len(self.varmap)

    def var(self, atom: int) -> int:
        if atom not in self.var_of:
            self.var_of[atom] = self.new_var(("atom", atom))
        return self.var_of[atom]

    def lift(self, w: WeightAtom) -> WeightAtom:
        """Rename program atoms to PB variables."""
        return WeightAtom(w.lower, w.upper, tuple(e._replace(atom=self.var(e.atom)) for e in w.elems))

    def theory(self) -> PBTheory:
        return PBTheory(tuple(self.constraints), tuple(self.varmap))

    # -- indicators -------------------------------------------------------

    def indicator(self, w: WeightAtom):
        """A variable equivalent to ``w``, or True/False when ``w`` is constant."""
        if w.lo > w.hi or w.lo > w.total:
            return False
        if w.lower_vacuous and w.upper_vacuous:
            return True
        if len(w.elems) == 1 and w.elems[0].weight >= w.lo > 0 and w.upper_vacuous:
            return w.elems[0].atom
        key = w.key()
        if key in self._indicator:
            return self._indicator[key]
        if w.upper_vacuous:
            b = self._lower_indicator(w)
        elif w.lower_vacuous:
            b = self._upper_indicator(w)
        else:
            b_plus = self.indicator(w.lower_part())
            b_minus = self.indicator(w.upper_part())
            b = self.new_var(("wa", key))
            self.constraints += [
                PBConstraint.make([(-1, b), (1, b_plus)], ">=", 0),
                PBConstraint.make([(-1, b), (1, b_minus)], ">=", 0),
                PBConstraint.make([(-1, b_plus), (-1, b_minus), (1, b)], ">=", -1),
            ]
        self._indicator[key] = b
        return b

    def _lower_indicator(self, w):
        l, total = w.lo, w.total
        b = self.new_var(("wa+", w.key()))
        sums = [(e.weight, e.atom) for e in w.elems]
        self.constraints += [
            PBConstraint.make([(-l, b)] + sums, ">=", 0),
            PBConstraint.make([(-(total - l + 1), b)] + sums, "<=", l - 1),
        ]
        return b

    def _upper_indicator(self, w):
        u, total = w.upper, w.total
        b = self.new_var(("wa-", w.key()))
        sums = [(e.weight, e.atom) for e in w.elems]
        self.constraints += [
            PBConstraint.make([(total - u, b)] + sums, "<=", total),
            PBConstraint.make([(u + 1, b)] + sums, ">=", u + 1),
        ]
        return b


def _conj_key(conj):
    return tuple(w.key() for w in conj)


def clausify(f, tr: Translator) -> list[Clause]:
    """Clausal form of one completion or loop formula, over PB variables."""
    if isinstance(f, RuleImpl):
        head = () if f.head == FALSUM else (tr.lift(f.head),)
        return [Clause(tuple(tr.lift(b) for b in f.body), head)]
    if isinstance(f, SupportImpl):
        clauses = []
        auxes = []
        for i, body in enumerate(f.bodies):
            conj = tuple(tr.lift(b) for b in body)
            key = _conj_key(conj)
            if key not in tr._support_aux:
                rule = f.rules[i] if f.rules else None
                b = tr.new_var(("body", rule, key))
                tr._support_aux[key] = b
                clauses.append(Clause(conj, (unit(b),)))
                clauses.extend(Clause((unit(b),), (a,)) for a in conj)
            auxes.append(unit(tr._support_aux[key]))
        clauses.insert(0, Clause((unit(tr.var(f.atom)),), tuple(auxes)))
        return clauses
    if isinstance(f, LoopImpl):
        members = sorted(tr.var(a) for a in f.loop)
        w_loop = WeightAtom(1, None, tuple(WeightedElem(v, 1) for v in members))
        clauses = []
        auxes = []
        for i, support in enumerate(f.supports):
            conj = tuple(tr.lift(b) for b in support)
            rule = f.rules[i] if f.rules else i
            b = tr.new_var(("bdf", tuple(sorted(f.loop)), rule, _conj_key(conj)))
            auxes.append(unit(b))
            clauses.append(Clause(conj, (unit(b),)))
            clauses.extend(Clause((unit(b),), (a,)) for a in conj)
        clauses.insert(0, Clause((w_loop,), tuple(auxes)))
        return clauses
    raise TypeError(f"cannot clausify {type(f).__name__}")


def clause_constraint(c: Clause, tr: Translator) -> PBConstraint | None:
    """-b1 - ... - bm + h1 + ... + hn >= 1 - m, after folding constant atoms."""
    body, head = [], []
    for w in c.body:
        b = tr.indicator(w)
        if b is False:
            return None
        if b is not True:
            body.append(b)
    for w in c.head:
        h = tr.indicator(w)
        if h is True:
            return None
        if h is not False:
            head.append(h)
    terms = [(-1, b) for b in body] + [(1, h) for h in head]
    con = PBConstraint.make(terms, ">=", 1 - len(body))
    if not con.terms and con.bound <= 0:
        return None
    return con


def pb_translate(clauses, tr: Translator | None = None) -> PBTheory:
    """Add the PB encoding of ``clauses`` to ``tr`` and return the whole theory."""
    if tr is None:
        atoms = {e.atom for c in clauses for w in c.body + c.head for e in w.elems}
        tr = Translator(())
        for a in sorted(atoms):
            tr.var_of[a] = a
        tr.varmap = [("atom", a) for a in range(1, max(atoms, default=0) + 1)]
    for c in clauses:
        con = clause_constraint(c, tr)
        if con is not None:
            tr.constraints.append(con)
    return tr.theory()


def translate_formulas(formulas, tr: Translator) -> PBTheory:
    for f in formulas:
        pb_translate(clausify(f, tr), tr)
    return tr.theory()


def translate_program(p: Program, loops: bool = False) -> tuple[PBTheory, Translator]:
    """T = tau_pb(tau_cl(Comp(P))), or of LComp(P) when ``loops`` is set."""
    tr = Translator.for_program(p)
    formulas = loop_completion(p) if loops else completion(p)
    return translate_formulas(formulas, tr), tr


# --------------------------------------------------------------------------
# OPB output and model projection

def _opb_line(con: PBConstraint, num_vars: int) -> str:
    terms = " ".join(f"{'+' if c > 0 else '-'}{abs(c)} x{v}" for c, v in con.terms)
    if not terms:
        terms = "0 x1" if num_vars else ""
    rel = "=" if con.relation == "=" else ">="
    return f"{terms} {rel} {con.bound} ;".lstrip()


def emit_opb(t: PBTheory) -> str:
    rows = [g for con in t.constraints
            for g in ([con] if con.relation == "=" else con.as_geq())]
    lines = [f"* #variable= {t.num_vars} #constraint= {len(rows)}"]
    lines += [_opb_line(con, t.num_vars) for con in rows]
    return "\n".join(lines) + "\n"


def project_model(t: PBTheory, assignment) -> frozenset:
    """Program atoms whose variable is 1; ``assignment`` maps var -> 0/1."""
    return frozenset(tag[1] for i, tag in enumerate(t.varmap)
                     if tag[0] == "atom" and assignment.get(i + 1, 0))


# --------------------------------------------------------------------------
# Text form of formulas

def _conj_text(conj, atoms):
    return " & ".join(render_watom(w, atoms) for w in conj) if conj else "true"


def _disj_text(conjs, atoms):
    if not conjs:
        return "false"
    return " | ".join(f"({_conj_text(c, atoms)})" if len(c) > 1 else _conj_text(c, atoms)
                      for c in conjs)


def render_formula(f, atoms) -> str:
    if isinstance(f, RuleImpl):
        head = "false" if f.head == FALSUM else render_watom(f.head, atoms)
        return f"{_conj_text(f.body, atoms)} -> {head}"
    if isinstance(f, SupportImpl):
        return f"{atoms.name(f.atom)} -> {_disj_text(f.bodies, atoms)}"
    names = sorted(atoms.name(a) for a in f.loop)
    return f"{' | '.join(names)} -> {_disj_text(f.supports, atoms)}"
