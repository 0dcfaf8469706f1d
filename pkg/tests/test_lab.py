from __future__ import annotations

import random

import pytest

import oracle
from gamering import Arena
from gamering.classes import run_deep
from gamering.lab import (Lab, RingConfig, check_ring_axioms, classify, ideal_experiments,
                          lemma_suite, open_problem_probe, option_regularity_scan,
                          paper_example_suite)
from gamering.relations import Relations

# Independently recomputed by tests/oracle.py with all-pairs comparison.
CONWAY_CLASSES_DAY2 = 22
ITER_CLASSES_DAY2 = 241


def test_oracle_class_counts():
    u = oracle.forms(2)
    assert oracle.count_classes(u, oracle.conway_eq) == CONWAY_CLASSES_DAY2
    assert oracle.count_classes(u, oracle.iter_eq) == ITER_CLASSES_DAY2


def test_classify_examples(lab, u1, u2):
    assert classify(lab, u1, "conway_eq").class_count == 4
    assert classify(lab, u2, "iso").class_count == 256
    assert classify(lab, u2, "conway_eq").class_count == CONWAY_CLASSES_DAY2
    rep = classify(lab, u2, "iter_eq")
    assert rep.class_count == ITER_CLASSES_DAY2
    assert rep.representatives == sorted(min(c) for c in rep.classes)


def test_classify_order_independent(lab, u2):
    base = classify(lab, u2, "iter_eq")
    shuffled = list(u2)
    random.Random(11).shuffle(shuffled)
    other = classify(lab, shuffled, "iter_eq")
    assert other.classes == base.classes
    assert other.representatives == base.representatives


def test_refinement_monotone(lab, u2):
    counts = [classify(lab, u2, r).class_count for r in ("iso", "iter_eq", "conway_eq")]
    assert counts[0] >= counts[1] >= counts[2]


def test_ring_axioms_small():
    lab = Lab()
    rep = run_deep(check_ring_axioms, lab, RingConfig(max_birthday=1, seed=3))
    assert rep.passed, rep.failures[:3]
    assert rep.counts["associativity ≡i"] == 64 + 64
    assert rep.counts["distributivity ≡i (pairwise)"] == 64


def test_ring_axioms_budget_is_reported_as_failure():
    lab = Lab()
    rep = run_deep(check_ring_axioms, lab,
                   RingConfig(max_birthday=2, triple_sample=4, well_defined_sample=4, seed=1,
                              step_limit=5))
    budget = [f for f in rep.failures if f.got == "work budget exhausted"]
    assert budget and len(budget) == rep.info["budgetExhausted"]
    assert all(f.got == "work budget exhausted" for f in rep.failures)


def test_zero_divisors(lab):
    a, rel = lab.arena, lab.rel
    two, star = a.integer(2), a.constant("*")
    assert rel.iter_eq(a.product(two, star), 0)
    assert not rel.iter_eq(two, 0) and not rel.iter_eq(star, 0)
    one = a.integer(1)
    assert rel.iter_eq(a.product(a.add(one, one), star),
                       a.add(a.product(one, star), a.product(one, star)))


def test_paper_examples():
    rep = run_deep(paper_example_suite, Lab())
    assert rep.passed, rep.failures[:3]


def test_lemmas():
    rep = run_deep(lemma_suite, Lab(), seed=2, absorption_sample=200)
    assert rep.passed, rep.failures[:3]
    assert rep.counts["absorption (sampled)"] == 200


def test_ideals():
    rep = run_deep(ideal_experiments, Lab(), 2)
    assert rep.passed, rep.failures[:3]
    assert rep.counts["no set ≡i 2o·2o"] == 16


def test_option_regularity_small(lab, u1):
    for relation in ("iter_eq", "conway_eq"):
        rep = option_regularity_scan(lab, relation, u1)
        assert rep.passed and rep.checks_run == 16


def test_probe(lab, u2):
    a = lab.arena
    m3 = a.constant("M3")
    k = a.intern([0], [0, a.constant("*")])
    rep = open_problem_probe(lab, [m3, 0], [k])
    assert rep.passed
    assert rep.info["separated"][0]["pair"] == sorted([0, m3])
    assert rep.info["separated"][0]["witness"]["games"] == [k]
    empty = open_problem_probe(lab, [], u2)
    assert empty.checks_run == 0 and not empty.info["separated"]
    star_pair = a.intern([a.constant("*")], [a.constant("*")])
    excluded = open_problem_probe(lab, [0, star_pair], u2)
    assert excluded.info["excludedIterEqual"] == 1


def test_failures_replay():
    lab = Lab()
    cfg = RingConfig(max_birthday=2, triple_sample=3, well_defined_sample=3, seed=4, step_limit=20)
    first = run_deep(check_ring_axioms, lab, cfg).to_json()
    second = run_deep(check_ring_axioms, Lab(), cfg).to_json()
    first.pop("elapsedMs"), second.pop("elapsedMs")
    assert first == second


def test_witnesses_replay_on_cold_cache(lab):
    a = lab.arena
    m3 = a.constant("M3")
    w = lab.rel.gro_tsen_refute(m3, 0, a.enumerate_forms(2))
    assert Relations(a).replay(w, m3, 0)
