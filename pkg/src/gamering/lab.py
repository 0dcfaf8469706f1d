"""Verification campaigns: classification, ring axioms, lemmas, paper examples, probes."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .arena import Arena
from .classes import IterClasses, WorkBudgetExceeded
from .notation import eval_text
from .relations import Outcome, Relations
from .taxonomy import Taxonomy

EXHAUSTIVE_LIMIT = 100_000
DEFAULT_TRIPLE_SAMPLE = 500
DEFAULT_STEP_LIMIT = 50_000


@dataclass
class ClassReport:
    relation: str
    universe: str
    class_count: int
    representatives: list[int]
    pairs_tested: int
    elapsed_ms: float
    classes: list[list[int]] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "relationName": self.relation,
            "universeDescription": self.universe,
            "classCount": self.class_count,
            "representatives": self.representatives,
            "pairTested": self.pairs_tested,
            "elapsedMs": round(self.elapsed_ms, 3),
        }


@dataclass
class Failure:
    check: str
    inputs: Any
    expected: Any
    got: Any

    def to_json(self) -> dict:
        return {"check": self.check, "inputs": _jsonable(self.inputs),
                "expected": _jsonable(self.expected), "got": _jsonable(self.got)}


@dataclass
class SuiteReport:
    suite: str
    checks_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    elapsed_ms: float = 0.0
    info: dict = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, name: str, inputs: Any, expected: Any, got: Any) -> bool:
        self.checks_run += 1
        self.counts[name] = self.counts.get(name, 0) + 1
        ok = expected == got
        if not ok:
            self.failures.append(Failure(name, inputs, expected, got))
        return ok

    def fail(self, name: str, inputs: Any, expected: Any, got: Any) -> None:
        self.checks_run += 1
        self.counts[name] = self.counts.get(name, 0) + 1
        self.failures.append(Failure(name, inputs, expected, got))

    def to_json(self) -> dict:
        return {
            "suiteName": self.suite,
            "passed": self.passed,
            "checksRun": self.checks_run,
            "checksByName": dict(sorted(self.counts.items())),
            "failureCount": len(self.failures),
            "failures": [f.to_json() for f in self.failures],
            "info": _jsonable(self.info),
            "elapsedMs": round(self.elapsed_ms, 3),
        }


def _jsonable(x: Any) -> Any:
    if isinstance(x, Outcome):
        return x.value
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class Lab:
    """Shared state for campaigns: one arena, its relation engine and flags."""

    def __init__(self, arena: Arena | None = None, rel: Relations | None = None):
        self.arena = arena if arena is not None else Arena()
        self.rel = rel if rel is not None else Relations(self.arena)
        self.tax = Taxonomy(self.rel)

    def game(self, text: str) -> int:
        return eval_text(self.arena, text)

    def universe(self, max_birthday: int) -> list[int]:
        return self.arena.enumerate_forms(max_birthday)

    def relation(self, name: str) -> Callable[[int, int], bool]:
        return self.rel.relation(name)


def _timed(fn: Callable[..., SuiteReport]) -> Callable[..., SuiteReport]:
    def wrapper(*args, **kwargs) -> SuiteReport:
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed_ms = (time.perf_counter() - t0) * 1000
        return report
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- classification -------------------------------------------------------------

def classify(lab: Lab, universe: Sequence[int], relation: str,
             description: str = "") -> ClassReport:
    """Partition ``universe``, testing each game against one member per class."""
    t0 = time.perf_counter()
    rel = lab.relation(relation)
    classes: list[list[int]] = []
    pairs = 0
    for g in universe:
        for cls in classes:
            pairs += 1
            if rel(g, cls[0]):
                cls.append(g)
                break
        else:
            classes.append([g])
    classes = sorted(sorted(c) for c in classes)
    return ClassReport(
        relation=relation,
        universe=description or f"{len(universe)} games",
        class_count=len(classes),
        representatives=[c[0] for c in classes],
        pairs_tested=pairs,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
        classes=classes,
    )


# -- paper examples ---------------------------------------------------------------

@_timed
def paper_example_suite(lab: Lab, seed: int = 0) -> SuiteReport:
    """Worked examples and counterexamples, each as an independent check."""
    a, rel, tax = lab.arena, lab.rel, lab.tax
    rep = SuiteReport("paper-examples")
    g = lab.game
    star, one, two, two_c = g("*"), g("1"), g("2"), g("2o")

    # iteratively zero examples
    rep.check("iz {-1|2o}", "{-1|2o}", True, rel.is_iteratively_zero(g("{-1|2o}")))
    rep.check("iz {-1|2}", "{-1|2}", False, rel.is_iteratively_zero(g("{-1|2}")))
    k_half = g("K_half")
    rep.check("iz K_half", k_half, False, rel.is_iteratively_zero(k_half))
    rep.check("outcome K_half", k_half, Outcome.SECOND, rel.outcome(k_half))
    k_bullet = g("K_bullet")
    rep.check("K_bullet notation", "{0|K_half||0|0}", k_bullet, g("{0|K_half||0|0}"))
    rep.check("outcome K_bullet", k_bullet, Outcome.SECOND, rel.outcome(k_bullet))
    rep.check("iz K_bullet", k_bullet, False, rel.is_iteratively_zero(k_bullet))

    # product is not well defined modulo Conway equivalence
    k_rm = g("K_rm")
    rep.check("outcome K_rm", k_rm, Outcome.SECOND, rel.outcome(k_rm))
    rep.check("*·* = *", "*·*", star, a.product(star, star))
    rep.check("G_ex·* form", "G_ex·*", g("{0,*|0,*}"), a.product(g("G_ex"), star))
    k_sq = a.product(k_rm, k_rm)
    rep.check("outcome K_rm²", k_rm, Outcome.FIRST, rel.outcome(k_sq))
    rep.check("K_rm ≡c 0 but K_rm² not", k_rm, (True, False),
              (rel.conway_eq(k_rm, 0), rel.conway_eq(k_sq, a.product(0, 0))))

    # ring remarks and numbers
    two_star = a.product(two, star)
    rep.check("2·* ≡i 0", "2·*", True, rel.iter_eq(two_star, 0))
    rep.check("2 ≢i 0 and * ≢i 0", "2,*", (False, False), (rel.iter_eq(two, 0), rel.iter_eq(star, 0)))
    rep.check("1/2+1/2 ≢i 1", "1/2+1/2", False, rel.iter_eq(g("1/2+1/2"), one))
    rep.check("1/2+1/2 ≡c 1", "1/2+1/2", True, rel.conway_eq(g("1/2+1/2"), one))
    ss = g("{*|*}")
    rep.check("{*|*} not a number", ss, False, tax.is_number(ss))
    rep.check("{*|*} ≡i 0", ss, True, rel.iter_eq(ss, 0))
    for name in ("0", "1", "-1", "1/2", "2", "2o"):
        rep.check("is number", name, True, tax.is_number(g(name)))
    rep.check("is number", "*", False, tax.is_number(star))
    rep.check("2 ≢i 2o", "2,2o", False, rel.iter_eq(two, two_c))
    rep.check("2 ≡c 2o", "2,2o", True, rel.conway_eq(two, two_c))

    # Conway equivalence is invisible to any added context
    rng = random.Random(seed)
    u1, u2 = lab.universe(1), lab.universe(2)
    contexts = list(u1) + sorted(rng.sample(u2, 32))
    for lhs, rhs in ((k_rm, 0), (g("1/2+1/2"), one), (two, two_c), (k_bullet, 0)):
        for k in contexts:
            rep.check("o(G+K) = o(H+K)", [lhs, rhs, k], rel.outcome(a.add(rhs, k)),
                      rel.outcome(a.add(lhs, k)))

    # sets
    sq = a.product(two_c, two_c)
    expected_sq = a.intern([0, two_c, a.sub(a.add(two_c, two_c), one)], [])
    rep.check("2o·2o form", "2o·2o", expected_sq, sq)
    rep.check("2o·2o ≢i 2o+2o", "2o·2o", False, rel.iter_eq(sq, a.add(two_c, two_c)))
    sets3 = tax.sets_up_to(3)
    rep.check("set count birthday<=3", 3, 16, len(sets3))
    for s in sets3:
        rep.check("no set ≡i 2o·2o", s, False, rel.iter_eq(s, sq))
        rep.check("rank collapse", s, True,
                  rel.conway_eq(s, tax.von_neumann(tax.von_neumann_rank(s))))
    for n in range(4):
        rep.check("zermelo ≡c von neumann", n, True,
                  rel.conway_eq(tax.zermelo(n), tax.von_neumann(n)))
    rep.check("zermelo(2) ≢i von_neumann(2)", 2, False,
              rel.iter_eq(tax.zermelo(2), tax.von_neumann(2)))
    rep.check("von_neumann(2) = 2o", 2, two_c, tax.von_neumann(2))
    rep.check("zermelo(2) = 2", 2, two, tax.zermelo(2))

    # {-3|}
    m3 = g("M3")
    k = g("{0|0,*}")
    w = rel.gro_tsen_refute(m3, 0, [k])
    rep.check("M3 separated from 0 by {0|0,*}", [m3, 0, k], [k], None if w is None else w.games)
    rep.check("M3 witness replays", [m3, 0, k], True, w is not None and Relations(a).replay(w, m3, 0))
    rep.check("M3 ≡c 0", m3, True, rel.conway_eq(m3, 0))
    numbers2 = [h for h in u2 if tax.is_number(h)]
    impartial3 = _impartial_up_to(lab, 3)
    for h in numbers2:
        rep.check("M3·number ≡c 0", h, True, rel.conway_eq(a.product(m3, h), 0))
    for h in impartial3:
        rep.check("M3·impartial ≡c 0", h, True, rel.conway_eq(a.product(m3, h), 0))
    rep.check("M3·{0|0,*} outcome", k, Outcome.LEFT, rel.outcome(a.product(m3, k)))
    rep.info = {"numbersBirthday2": len(numbers2), "impartialBirthday3": len(impartial3), "seed": seed}
    return rep


def _impartial_up_to(lab: Lab, max_birthday: int) -> list[int]:
    layer = [0]
    for _ in range(max_birthday):
        subsets = [[x for i, x in enumerate(layer) if mask >> i & 1] for mask in range(1 << len(layer))]
        layer = sorted({lab.arena.intern(s, s) for s in subsets})
    return layer


# -- lemmas ------------------------------------------------------------------------

@_timed
def lemma_suite(lab: Lab, seed: int = 0, absorption_sample: int = 1000) -> SuiteReport:
    """Closure properties of iteratively zero games, and absorption under products."""
    a, rel, tax = lab.arena, lab.rel, lab.tax
    iz = rel.is_iteratively_zero
    rep = SuiteReport("lemmas")
    u1, u2 = lab.universe(1), lab.universe(2)
    zeros = [g for g in u2 if iz(g)]

    for g in _impartial_up_to(lab, 3):
        rep.check("impartial: iz iff second-player win", g, rel.outcome(g) is Outcome.SECOND, iz(g))
    for g in u2:
        if tax.is_impartial(g):
            rep.check("impartial: iz iff second-player win", g, rel.outcome(g) is Outcome.SECOND, iz(g))
        if iz(g):
            rep.check("iz implies second-player win", g, Outcome.SECOND, rel.outcome(g))
            rep.check("negation preserves iz", g, True, iz(a.neg(g)))
        rep.check("H - H is iz", g, True, iz(a.sub(g, g)))
    for g in zeros:
        for h in zeros:
            rep.check("sum of iz is iz", [g, h], True, iz(a.add(g, h)))
    vacuous = 0
    for h in u1 + zeros:
        for g in u2:
            if iz(h) and iz(a.add(g, h)):
                rep.check("cancellation", [g, h], True, iz(g))
            else:
                vacuous += 1
    for g in zeros:
        for h in u1:
            rep.check("absorption", [g, h], True, iz(a.product(g, h)))
    rng = random.Random(seed)
    for _ in range(absorption_sample):
        g, h = rng.choice(zeros), rng.choice(u2)
        rep.check("absorption (sampled)", [g, h], True, iz(a.product(g, h)))
    rep.info = {"seed": seed, "iterZeroBirthday2": len(zeros), "absorptionSample": absorption_sample,
                "cancellationVacuous": vacuous}
    return rep


# -- option regularity ------------------------------------------------------------------

@_timed
def option_regularity_scan(lab: Lab, relation: str, universe: Sequence[int]) -> SuiteReport:
    rep = SuiteReport(f"option-regularity-{relation}")
    rel = lab.rel
    matched = 0
    for g in universe:
        for h in universe:
            v = rel.option_regularity_violation(relation, g, h)
            matched += rel.options_match(rel.relation(relation), g, h)
            rep.check("option regular", [g, h], None, None if v is None else v.to_json())
    rep.info = {"pairs": len(universe) ** 2, "optionMatchedPairs": matched}
    return rep


# -- ring axioms -------------------------------------------------------------------

@dataclass
class RingConfig:
    max_birthday: int = 2
    triple_sample: int = DEFAULT_TRIPLE_SAMPLE
    well_defined_sample: int = DEFAULT_TRIPLE_SAMPLE
    seed: int = 0
    step_limit: int = DEFAULT_STEP_LIMIT


@_timed
def check_ring_axioms(lab: Lab, config: RingConfig | None = None) -> SuiteReport:
    """Identities at form level, then distributivity, associativity and
    well-definedness of the product modulo iterative equivalence.

    Small triples are checked twice: on interned difference games and with
    the pairwise class engine.  Sampled large triples use the class engine
    only, each in a scratch arena under ``step_limit`` engine steps; a check
    that runs out is recorded as a failure, never as a pass.
    """
    cfg = config or RingConfig()
    a, rel = lab.arena, lab.rel
    rep = SuiteReport("ring-axioms")
    u = lab.universe(cfg.max_birthday)
    u1 = lab.universe(min(1, cfg.max_birthday))
    one = a.integer(1)
    rng = random.Random(cfg.seed)

    for g in u:
        rep.check("G + 0 = G", g, g, a.add(g, 0))
        rep.check("-(-G) = G", g, g, a.neg(a.neg(g)))
        rep.check("G·0 = 0", g, 0, a.product(g, 0))
        rep.check("G·1 = G", g, g, a.product(g, one))
        rep.check("G - G ≡i 0", g, True, rel.is_iteratively_zero(a.sub(g, g)))
    for g in u:
        for h in u:
            rep.check("G + H = H + G", [g, h], a.add(h, g), a.add(g, h))
            rep.check("-(G + H) = -G + -H", [g, h], a.add(a.neg(g), a.neg(h)), a.neg(a.add(g, h)))
            rep.check("GH = HG", [g, h], a.product(h, g), a.product(g, h))
            rep.check("(-G)H = -(GH)", [g, h], a.neg(a.product(g, h)), a.product(a.neg(g), h))

    small = [(g, h, k) for g in u1 for h in u1 for k in u1]
    big = _triples(u, cfg.triple_sample, rng)
    for g, h, k in small:
        rep.check("(G + H) + K = G + (H + K)", [g, h, k], a.add(g, a.add(h, k)), a.add(a.add(g, h), k))
    for g, h, k in big:
        rep.check("(G + H) + K = G + (H + K)", [g, h, k], a.add(g, a.add(h, k)), a.add(a.add(g, h), k))

    eng = IterClasses(a)
    for g, h, k in small:
        lhs, rhs = a.product(a.add(g, h), k), a.add(a.product(g, k), a.product(h, k))
        rep.check("distributivity ≡i", [g, h, k], True, rel.iter_eq(lhs, rhs))
        rep.check("distributivity ≡i (pairwise)", [g, h, k], True, eng.eq(lhs, rhs))
        lhs, rhs = a.product(a.product(g, h), k), a.product(g, a.product(h, k))
        rep.check("associativity ≡i", [g, h, k], True, rel.iter_eq(lhs, rhs))
        rep.check("associativity ≡i (pairwise)", [g, h, k], True, eng.eq(lhs, rhs))

    # well-definedness on equivalent pairs drawn from the universe
    classes: dict[int, list[int]] = {}
    for g in u:
        classes.setdefault(eng.representative(g), []).append(g)
    eq_pairs = [(g, h) for c in classes.values() for g in c for h in c if g != h]
    for _ in range(cfg.well_defined_sample if eq_pairs else 0):
        g, h = rng.choice(eq_pairs)
        k = rng.choice(u)
        gk, hk = a.product(g, k), a.product(h, k)
        rep.check("well-defined ≡i", [g, h, k], True, rel.iter_eq(gk, hk))
        rep.check("well-defined ≡i (pairwise)", [g, h, k], True, eng.eq(gk, hk))

    # each sampled check gets a scratch arena so memory stays bounded
    exhausted = 0
    for g, h, k in big:
        for name, route in (("distributivity ≡i", _distributive), ("associativity ≡i", _associative)):
            scratch = Arena(budget=a.budget)
            local = [scratch.import_game(a, x) for x in (g, h, k)]
            sub = IterClasses(scratch)
            sub.step_limit = cfg.step_limit
            try:
                ok = route(sub, *local)
            except WorkBudgetExceeded:
                exhausted += 1
                rep.fail(name, [g, h, k], True, "work budget exhausted")
                continue
            rep.check(name, [g, h, k], True, ok)
    rep.info = {
        "seed": cfg.seed,
        "universeSize": len(u),
        "sampledTriples": len(big),
        "equivalentPairs": len(eq_pairs),
        "stepLimitPerCheck": cfg.step_limit,
        "budgetExhausted": exhausted,
    }
    return rep


def _triples(u: Sequence[int], n: int, rng: random.Random) -> list[tuple[int, int, int]]:
    if len(u) ** 3 <= EXHAUSTIVE_LIMIT:
        return [(g, h, k) for g in u for h in u for k in u]
    return [(rng.choice(u), rng.choice(u), rng.choice(u)) for _ in range(n)]


def _distributive(eng: IterClasses, g: int, h: int, k: int) -> bool:
    a = eng.arena
    lhs = eng.product(a.add(g, h), k)
    rhs = eng.add(eng.product(g, k), eng.product(h, k))
    return eng.eq(lhs, rhs)


def _associative(eng: IterClasses, g: int, h: int, k: int) -> bool:
    a = eng.arena
    return eng.eq(eng.product(a.product(g, h), k), eng.product(g, a.product(h, k)))


# -- ideals and subrings ------------------------------------------------------------------

@_timed
def ideal_experiments(lab: Lab, max_birthday: int = 2) -> SuiteReport:
    a, rel, tax = lab.arena, lab.rel, lab.tax
    rep = SuiteReport("ideals")
    u = lab.universe(max_birthday)

    impartial = _impartial_up_to(lab, max_birthday + 1)
    for g in impartial:
        for h in impartial:
            rep.check("impartial + impartial", [g, h], True, tax.is_impartial(a.add(g, h)))
    for g in u:
        for h in (x for x in u if tax.is_impartial(x)):
            rep.check("G · impartial is impartial", [g, h], True, tax.is_impartial(a.product(g, h)))

    numbers = [g for g in u if tax.is_number(g)]
    zero_numbers = [g for g in numbers if rel.conway_eq(g, 0)]
    for g in numbers:
        rep.check("-number is a number", g, True, tax.is_number(a.neg(g)))
        for h in numbers:
            rep.check("number + number", [g, h], True, tax.is_number(a.add(g, h)))
            rep.check("number · number", [g, h], True, tax.is_number(a.product(g, h)))
    for z in zero_numbers:
        for h in numbers:
            rep.check("Conway-zero number absorbs", [z, h], True, rel.conway_eq(a.product(z, h), 0))

    two_c, one = a.constant("2°"), a.integer(1)
    sq = a.product(two_c, two_c)
    rep.check("2o·2o form", "2o·2o", a.intern([0, two_c, a.sub(a.add(two_c, two_c), one)], []), sq)
    rep.check("2o·2o is not a set", sq, False, tax.is_set(sq))
    rep.check("2o·2o ≢i 2o+2o", sq, False, rel.iter_eq(sq, a.add(two_c, two_c)))
    sets = tax.sets_up_to(max_birthday + 1)
    for s in sets:
        rep.check("no set ≡i 2o·2o", s, False, rel.iter_eq(s, sq))
    for s in sets:
        for t in sets:
            rep.check("set + set is a set", [s, t], True, tax.is_set(a.add(s, t)))
            rep.check("sets: ≡i iff identical", [s, t], s == t, rel.iter_eq(s, t))
    rep.info = {"numbers": len(numbers), "conwayZeroNumbers": len(zero_numbers),
                "impartial": len(impartial), "sets": len(sets)}
    return rep


# -- Gro-Tsen probe ----------------------------------------------------------------------

@_timed
def open_problem_probe(lab: Lab, universe: Sequence[int], pool: Sequence[int]) -> SuiteReport:
    """Look for multipliers separating games that are not iteratively equivalent.

    Unresolved pairs are only listed; nothing is concluded about them.
    """
    rel = lab.rel
    rep = SuiteReport("probe")
    separated, unresolved, excluded = [], [], 0
    universe = sorted(set(universe))
    for i, g in enumerate(universe):
        for h in universe[i + 1:]:
            if rel.iter_eq(g, h):
                excluded += 1
                continue
            w = rel.gro_tsen_refute(g, h, pool)
            if w is None:
                unresolved.append([g, h])
                continue
            separated.append({"pair": [g, h], "witness": w.to_json()})
            rep.check("witness replays on a cold cache", [g, h, w.games[0]], True,
                      Relations(lab.arena).replay(w, g, h))
    rep.info = {"separated": separated, "unresolved": unresolved, "excludedIterEqual": excluded,
                "poolSize": len(set(pool))}
    return rep
