import random

import pytest

from randprog import programs, random_program, subsets
from stablepb.equivalence import (SEPair, common_table, is_m_maximal, is_se_model, se_context,
                                  se_models, strongly_equivalent, ue_models,
                                  uniformly_equivalent)
from stablepb.errors import NormalizationError
from stablepb.program import is_model, parse_program, render_program
from stablepb.semantics import enum_stable, horn_from_program, is_stable

P = "1{p,q} :- {p,q}1.\n"
Q = "p :- not q.\nq :- not p.\n"
P2 = P + "p.\n"
Q2 = Q + "p :- q.\n"


def pair(p, x, y):
    return SEPair(p.interp(x), p.interp(y))


def named(p, pairs):
    return {("".join(sorted(p.atoms.to_names(x))), "".join(sorted(p.atoms.to_names(y)))) for x, y in pairs}


def random_pairs(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = random_program(rng, max_atoms=5, max_rules=4)
        q = random_program(rng, max_atoms=5, max_rules=4)
        out.append(common_table(p, q))
    return out


def test_m_maximal_examples():
    p = parse_program("1{p,q,r} :- 1{s,t}.")
    hp = horn_from_program(p)
    m = p.interp("pqst")
    assert is_m_maximal(hp, m, p.interp("pqs"))
    assert not is_m_maximal(hp, m, p.interp("ps"))
    assert is_m_maximal(hp, m, m)
    assert not is_m_maximal(hp, m, p.interp("pqr"))  # not inside M


def test_se_and_ue_examples():
    p = parse_program(P)
    se = se_models(p)
    assert named(p, se) == {("p", "p"), ("q", "q"), ("p", "pq"), ("q", "pq"), ("pq", "pq"), ("", "pq")}
    assert named(p, ue_models(p)) == named(p, se) - {("", "pq")}
    assert not is_se_model(p, pair(p, "pq", "p"))


def test_strong_equivalence_examples():
    p, q = parse_program(P), parse_program(Q)
    assert strongly_equivalent(p, q).equivalent
    v = strongly_equivalent(parse_program(P2), parse_program(Q2))
    assert not v.equivalent and v.witness_side == "Q"
    assert (set(v.atoms.to_names(v.witness.x)), set(v.atoms.to_names(v.witness.y))) == (set(), {"p", "q"})
    assert render_program(v.context) == "2{p,q} :- 1{p}.\n"


def test_uniform_equivalence_examples():
    assert uniformly_equivalent(parse_program(P2), parse_program(Q2)).equivalent
    v = uniformly_equivalent(parse_program("a."), parse_program("a :- b.\nb :- a."))
    assert not v.equivalent and render_program(v.context) == ""


def test_extension_by_rule_separates():
    extra = "q :- p.\n"
    p, q = common_table(parse_program(P2 + extra), parse_program(Q2 + extra))
    assert enum_stable(p) != enum_stable(q)


def test_requires_normalized_programs():
    with pytest.raises(NormalizationError):
        se_models(parse_program("a :- [b=-1]."))
    with pytest.raises(NormalizationError):
        strongly_equivalent(parse_program("a."), parse_program("a :- [b=-1]."))


def test_model_pairs():
    for p in programs(200, seed=51):
        for m in subsets(p.atom_set()):
            assert is_se_model(p, SEPair(m, m)) == is_model(m, p)


def test_can_pair_is_se_model():
    from stablepb.constraints import mc_transform
    from stablepb.semantics import canonical, reduct
    for p in programs(200, seed=52):
        mp = mc_transform(p)
        for m in subsets(p.atom_set()):
            if is_model(m, p):
                assert is_se_model(p, SEPair(canonical(reduct(mp, m), m), m), mp)


def test_se_of_union_is_intersection():
    for p, r in random_pairs(150, seed=53):
        u = p.atom_set() | r.atom_set()
        assert se_models(p | r, u) == se_models(p, u) & se_models(r, u)


def test_strong_implies_uniform():
    for p, q in random_pairs(150, seed=54):
        if strongly_equivalent(p, q).equivalent:
            assert uniformly_equivalent(p, q).equivalent


def test_contexts_separate():
    seen = 0
    for p, q in random_pairs(200, seed=55):
        v = strongly_equivalent(p, q)
        if v.equivalent:
            continue
        seen += 1
        has, lacks = (p, q) if v.witness_side == "P" else (q, p)
        r = se_context(has, lacks, v.witness)
        assert v.context == r
        # Y is stable on exactly one side once R is added
        assert is_stable(lacks | r, v.witness.y) != is_stable(has | r, v.witness.y)
        assert enum_stable(p | r) != enum_stable(q | r)
    assert seen > 100


def test_uniform_verdicts_have_fact_contexts():
    for p, q in random_pairs(100, seed=56):
        v = uniformly_equivalent(p, q)
        if not v.equivalent:
            assert v.context is not None
            assert enum_stable(p | v.context) != enum_stable(q | v.context)
