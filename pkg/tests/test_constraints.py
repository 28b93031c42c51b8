import random

import pytest

from randprog import programs, subsets
from stablepb.constraints import (AbstractConstraint, MonoLit, cc_transform, downward_closure,
                                  dual, eval_constraint, expand, is_antimonotone, is_convex,
                                  is_monotone, mc_transform, mp_is_model, upward_closure)
from stablepb.errors import SizeError
from stablepb.program import FALSUM, AtomTable, is_model, parse_program, parse_watom, render_watom


def mlit_text(lit, atoms):
    return ("not " if lit.negated else "") + render_watom(lit.atom, atoms)


def mrule_text(r, atoms):
    head = "false" if r.head == FALSUM else render_watom(r.head, atoms)
    return head + " <- " + ", ".join(mlit_text(l, atoms) for l in r.body)


def random_constraint(rng, max_atoms=5):
    n = rng.randint(0, max_atoms)
    full = 1 << n
    density = rng.random()
    return AbstractConstraint(tuple(range(n)), frozenset(s for s in range(full) if rng.random() < density))


def test_eval_examples():
    c = AbstractConstraint.from_sets([0], [{0}])
    assert eval_constraint(c, {0, 1})
    assert not eval_constraint(c, {1})
    empty = AbstractConstraint((0, 1), frozenset())
    assert not empty.consistent
    assert not any(eval_constraint(empty, m) for m in subsets({0, 1}))


def test_expand_examples():
    t = AtomTable("ab")
    c = expand(parse_watom("1{a,b}", t))
    assert c.sets() == {frozenset({0}), frozenset({1}), frozenset({0, 1})}
    assert [eval_constraint(c, m) for m in subsets({0, 1})] == [False, True, True, True]
    assert expand(FALSUM).sets() == set() and expand(FALSUM).domain == ()
    assert expand(parse_watom("2[a=1,b=2]2", t)).sets() == {frozenset({1})}


def test_shape_checks():
    t = AtomTable("abc")
    c = expand(parse_watom("2{a,b,c}", t))
    assert is_monotone(c) and is_convex(c)
    assert is_antimonotone(expand(parse_watom("{a,b}1", t)))
    c = expand(parse_watom("1{a,b}1", t))
    assert is_convex(c) and not is_monotone(c) and not is_antimonotone(c)
    # {c},{d},{e},{c,d,e}: the non-convex head of the supported-model example
    nc = AbstractConstraint.from_sets("cde", [{"c"}, {"d"}, {"e"}, {"c", "d", "e"}])
    assert not is_convex(nc)


def test_size_limit():
    with pytest.raises(SizeError):
        AbstractConstraint(tuple(range(17)), frozenset())
    t = AtomTable([f"x{i}" for i in range(17)])
    with pytest.raises(SizeError):
        expand(parse_watom("1{" + ",".join(t.names) + "}", t))


def test_closure_properties():
    rng = random.Random(7)
    for _ in range(300):
        c = random_constraint(rng)
        assert dual(dual(c)) == c
        assert is_monotone(upward_closure(c))
        assert is_antimonotone(downward_closure(c))
        if is_monotone(c):
            assert is_antimonotone(dual(c))


def test_convex_iff_closure_intersection():
    rng = random.Random(11)
    seen = {True: 0, False: 0}
    for _ in range(1000):
        c = random_constraint(rng)
        meet = upward_closure(c).satisfiers & downward_closure(c).satisfiers
        assert is_convex(c) == (c.satisfiers == meet)
        seen[is_convex(c)] += 1
    assert seen[True] > 50 and seen[False] > 50


def test_expand_agrees_with_weight_atoms():
    rng = random.Random(3)
    for p in programs(200, seed=5):
        for r in p.rules:
            for w in (r.head,) + r.body:
                c = expand(w)
                for m in subsets(w.domain):
                    assert eval_constraint(c, m) == w.holds(m)
                assert is_convex(c)


def test_mc_simple_fact():
    p = parse_program("1{a}.")
    mp = mc_transform(p)
    assert [mrule_text(r, p.atoms) for r in mp.rules] == ["1{a} <- "]


def test_mc_head_upper_bound():
    # upper bound 2 on two unit-weight elements is vacuous, so no r'' is produced
    p = parse_program("1{a,b}2 :- 1{c}3.")
    assert [mrule_text(r, p.atoms) for r in mc_transform(p).rules] == ["1{a,b} <- 1{c}"]
    p = parse_program("1{a,b,d}2 :- 1{c}3.")
    assert [mrule_text(r, p.atoms) for r in mc_transform(p).rules] == [
        "1{a,b,d} <- 1{c}", "false <- 3{a,b,d}, 1{c}"]
    assert mc_transform(p).origin == {0: [0, 1]}


def test_mc_two_sided_body():
    p = parse_program("2{a,b,c} :- 1{a,d}, {c}0.")
    assert [mrule_text(r, p.atoms) for r in mc_transform(p).rules] == ["2{a,b,c} <- 1{a,d}, not 1{c}"]
    p = parse_program("a :- 1{b,c}1, 0{d}.")
    assert [mrule_text(r, p.atoms) for r in mc_transform(p).rules] == ["1{a} <- 1{b,c}, not 2{b,c}"]


def test_cc_examples():
    p = parse_program("2{a,b,c} :- 1{a,d}, {c}0.\nb :- c.")
    mp = mc_transform(p)
    back = cc_transform(mp)
    assert render_watom(back.rules[0].body[1], back.atoms) == "{c}0"
    assert back.rules[1].body == p.rules[1].body
    assert mc_transform(back).rules == mp.rules


def test_cc_of_zero_bound_is_unsatisfiable():
    t = AtomTable("a")
    mp = mc_transform(parse_program("b :- 1{a}.", t))
    lit = MonoLit(parse_watom("0{a}", t), negated=True)
    mp.rules = (mp.rules[0].__class__(mp.rules[0].head, (lit,), 0),)
    back = cc_transform(mp)
    assert not any(back.rules[0].body[0].holds(m) for m in subsets({t.id("a")}))


def test_models_preserved_by_mc():
    for p in programs(300, seed=9):
        mp = mc_transform(p)
        for m in subsets(p.atom_set()):
            assert is_model(m, p) == mp_is_model(m, mp)
