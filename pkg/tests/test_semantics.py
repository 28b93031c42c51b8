import pytest

from randprog import programs, subsets
from stablepb.constraints import AbstractConstraint, MonoLit, mc_transform, mp_is_model
from stablepb.errors import NotAModelError, SizeError
from stablepb.program import AtomTable, Program, Rule, headset, parse_program, render_watom
from stablepb.semantics import (canonical, enum_models, enum_stable, enum_supported,
                                horn_from_program, is_derivable, is_stable, is_supported, reduct,
                                stability)

EX23 = "2{a,b,c} :- 1{a,d}, {c}0.\n1{b,c,d} :- 1{a}, {a,b,d}2.\n1{a}.\n"


def sets(p, family):
    return {frozenset(p.atoms.to_names(m)) for m in family}


def horn_text(hp, atoms):
    return [render_watom(r.head, atoms) + " <- " + ", ".join(render_watom(l.atom, atoms) for l in r.body)
            for r in hp.rules]


def supported_example():
    """The two-rule program with a non-convex head from the supported-model discussion."""
    t = AtomTable("abcde")
    c = lambda names, fam: AbstractConstraint.from_sets([t.id(x) for x in names],
                                                        [{t.id(x) for x in s} for s in fam])
    head1 = c("cde", ["c", "d", "e", "cde"])
    head2 = c("ab", ["a", "b"])
    body = (MonoLit(c("cd", ["c", "cd"])), MonoLit(c("e", ["e"]), negated=True))
    return Program([Rule(head1), Rule(head2, body)], t)


def test_derivable_models_of_choice_fact():
    p = parse_program("1{a,b}.")
    hp = horn_from_program(p)
    got = {m for m in subsets(p.atom_set()) if is_derivable(hp, m)}
    assert sets(p, got) == {frozenset("a"), frozenset("b"), frozenset("ab")}
    assert not is_derivable(hp, frozenset())
    assert sets(p, enum_stable(p)) == sets(p, got)


def test_supported_example():
    p = supported_example()
    assert is_supported(p, p.interp("ac"))
    assert not is_supported(p, p.interp("acde"))


def test_reducts_of_two_sided_example():
    p = parse_program(EX23)
    mp = mc_transform(p)
    assert horn_text(reduct(mp, p.interp("ab")), p.atoms) == [
        "2{a,b,c} <- 1{a,d}", "1{b,c,d} <- 1{a}", "1{a} <- "]
    assert horn_text(reduct(mp, p.interp("abc")), p.atoms) == ["1{b,c,d} <- 1{a}", "1{a} <- "]
    hp = horn_from_program(parse_program("a :- b.\nb."))
    assert reduct(hp, frozenset()).rules == hp.rules


def test_canonical_examples():
    p = parse_program("1{a,b}.")
    assert canonical(horn_from_program(p), p.interp("ab")) == p.interp("ab")
    p = parse_program("1{a} :- 1{b}.\n1{b} :- 1{a}.")
    assert canonical(horn_from_program(p), p.interp("ab")) == frozenset()
    p = parse_program(EX23)
    m = p.interp("ab")
    assert canonical(reduct(mc_transform(p), m), m) == m


def test_canonical_errors():
    p = parse_program("1{a}.")
    with pytest.raises(NotAModelError):
        canonical(horn_from_program(p), frozenset())
    q = parse_program("a :- not b.")
    with pytest.raises(ValueError):
        canonical(mc_transform(q), frozenset())


def test_stability_examples():
    p = parse_program(EX23)
    for names in ("ab", "abc"):
        rep = stability(p, p.interp(names))
        assert rep.stable and rep.supported and rep.is_model and rep.residue == frozenset()
    p = parse_program("1{a} :- 1{a}.")
    rep = stability(p, p.interp("a"))
    assert rep.supported and not rep.stable
    assert rep.residue == p.interp("a") and rep.canonical == frozenset()


def test_enum_examples():
    p = parse_program("p :- not q.\nq :- not p.")
    assert sets(p, enum_stable(p)) == {frozenset("p"), frozenset("q")}
    assert enum_supported(parse_program("")) == {frozenset()}
    big = parse_program("1{" + ",".join(f"x{i}" for i in range(17)) + "}.")
    with pytest.raises(SizeError):
        enum_stable(big)
    assert len(enum_models(parse_program("1{a,b,c}."))) == 7


def test_two_sided_example_stable_models():
    p = parse_program(EX23)
    got = sets(p, enum_stable(p))
    assert {frozenset("ab"), frozenset("abc")} <= got
    # the reduct under {a,c} keeps 1{b,c,d} <- 1{a}, so {a,c} and {a,c,d} are stable too
    assert got == {frozenset("ab"), frozenset("abc"), frozenset("ac"), frozenset("acd")}


def test_counting_matches_naive():
    for p in programs(300, seed=21):
        mp = mc_transform(p)
        for m in subsets(p.atom_set()):
            if not mp_is_model(m, mp):
                continue
            hp = reduct(mp, m)
            fast = canonical(hp, m)
            assert fast == canonical(hp, m, naive=True)
            # fixpoint property and derivability of the result
            applicable = [r for r in hp.rules if r.applicable(fast)]
            assert headset(applicable) & m == fast
            assert fast <= m


def test_stable_supported_model_chain():
    for p in programs(300, seed=22):
        mp = mc_transform(p)
        for m in subsets(p.atom_set()):
            rep = stability(p, m, mp)
            if rep.stable:
                assert rep.supported
            if rep.supported:
                assert rep.is_model
            assert rep.residue == m - rep.canonical


def test_horn_stable_equals_derivable():
    for p in programs(200, seed=23):
        mp = mc_transform(p)
        if not mp.is_horn:
            continue
        derivable = {m for m in subsets(p.atom_set()) if is_derivable(mp, m)}
        assert enum_stable(p) == derivable


def test_minimal_models_are_derivable():
    for p in programs(200, seed=24):
        mp = mc_transform(p)
        if not mp.is_horn:
            continue
        models = enum_models(p)
        for m in models:
            if not any(o < m for o in models):
                assert is_derivable(mp, m)
