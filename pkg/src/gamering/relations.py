"""Outcomes, Conway order/equivalence, iterative equivalence and bounded refuters."""

from __future__ import annotations

import enum
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .arena import Arena, BudgetExceeded
from .notation import Add, Expr, Mul, Name, Neg, format_expr

log = logging.getLogger(__name__)


class Player(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"

    @property
    def other(self) -> "Player":
        return Player.RIGHT if self is Player.LEFT else Player.LEFT


class Outcome(enum.Enum):
    LEFT = "LeftWins"
    RIGHT = "RightWins"
    FIRST = "FirstWins"
    SECOND = "SecondWins"

    @classmethod
    def from_bits(cls, left_first: bool, right_first: bool) -> "Outcome":
        if left_first:
            return cls.FIRST if right_first else cls.LEFT
        return cls.RIGHT if right_first else cls.SECOND

    def mirror(self) -> "Outcome":
        return {Outcome.LEFT: Outcome.RIGHT, Outcome.RIGHT: Outcome.LEFT}.get(self, self)


@dataclass
class RefutationWitness:
    """Evidence that two games are separated by some context.

    ``games`` holds the multiplier (Gro-Tsen) or the term arguments K0, K1, ...
    (≡_S); ``outcomes`` are the outcomes observed for the lhs and rhs.
    """

    kind: str
    games: list[int]
    outcomes: tuple[Outcome, Outcome]
    term: Expr | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "games": list(self.games),
            "outcomes": [o.value for o in self.outcomes],
        }
        if self.term is not None:
            out["term"] = format_expr(self.term)
        return out


@dataclass
class QueryStats:
    nodes_created: int = 0
    cache_hits: int = 0
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "nodesCreated": self.nodes_created,
            "cacheHits": self.cache_hits,
            "elapsedMs": round(self.elapsed_ms, 3),
        }


@dataclass
class OptionRegularityViolation:
    relation: str
    lhs: int
    rhs: int

    def to_json(self) -> dict:
        return {"relation": self.relation, "lhs": self.lhs, "rhs": self.rhs}


class Relations:
    """Relation engine over one arena, with persistent memo tables.

    Caches: outcome bits per (player, game) and the iteratively-zero flag
    per game.  All verdicts are pure functions of the interned forms, so the
    caches may be cleared or persisted freely.
    """

    def __init__(self, arena: Arena):
        self.arena = arena
        self._wins: dict[tuple[bool, int], bool] = {}
        self._iz: dict[int, bool] = {}
        self.cache_hits = 0

    def clear(self) -> None:
        self._wins.clear()
        self._iz.clear()
        self.cache_hits = 0

    # -- outcomes ----------------------------------------------------------

    def wins_moving_first(self, player: Player, g: int) -> bool:
        return self._wins_first(player is Player.LEFT, g)

    def _wins_first(self, left: bool, g: int) -> bool:
        key = (left, g)
        r = self._wins.get(key)
        if r is not None:
            self.cache_hits += 1
            return r
        opts = self.arena.left[g] if left else self.arena.right[g]
        r = any(not self._wins_first(not left, x) for x in opts)
        self._wins[key] = r
        return r

    def outcome(self, g: int) -> Outcome:
        return Outcome.from_bits(self._wins_first(True, g), self._wins_first(False, g))

    def conway_leq(self, g: int, h: int) -> bool:
        """G <= H, i.e. Left does not lose H - G moving second."""
        return self.outcome(self.arena.sub(h, g)) in (Outcome.SECOND, Outcome.LEFT)

    def conway_lt(self, g: int, h: int) -> bool:
        return self.conway_leq(g, h) and not self.conway_leq(h, g)

    def conway_eq(self, g: int, h: int) -> bool:
        return g == h or self.outcome(self.arena.sub(g, h)) is Outcome.SECOND

    # -- iterative equivalence --------------------------------------------

    def is_iteratively_zero(self, g: int) -> bool:
        """Every first move has a reply, by the opposite side, into an iteratively zero game."""
        r = self._iz.get(g)
        if r is not None:
            self.cache_hits += 1
            return r
        a = self.arena
        iz = self.is_iteratively_zero
        r = (all(any(iz(y) for y in a.right[x]) for x in a.left[g])
             and all(any(iz(y) for y in a.left[x]) for x in a.right[g]))
        self._iz[g] = r
        return r

    def iter_eq(self, g: int, h: int) -> bool:
        return self.is_iteratively_zero(self.arena.sub(g, h))

    def relation(self, name: str) -> Callable[[int, int], bool]:
        try:
            return {
                "iso": lambda g, h: g == h,
                "isomorphism": lambda g, h: g == h,
                "iter": self.iter_eq,
                "iter_eq": self.iter_eq,
                "conway": self.conway_eq,
                "conway_eq": self.conway_eq,
            }[name]
        except KeyError:
            raise ValueError(f"unknown relation {name!r}") from None

    # -- option regularity harness ----------------------------------------

    def options_match(self, rel: Callable[[int, int], bool], g: int, h: int) -> bool:
        a = self.arena

        def covered(xs: Sequence[int], ys: Sequence[int]) -> bool:
            return all(any(rel(x, y) for y in ys) for x in xs)

        return (covered(a.left[g], a.left[h]) and covered(a.left[h], a.left[g])
                and covered(a.right[g], a.right[h]) and covered(a.right[h], a.right[g]))

    def option_regularity_violation(self, relation: str, g: int, h: int
                                    ) -> OptionRegularityViolation | None:
        rel = self.relation(relation)
        if self.options_match(rel, g, h) and not rel(g, h):
            return OptionRegularityViolation(relation, g, h)
        return None

    # -- bounded refuters ---------------------------------------------------

    def gro_tsen_refute(self, g: int, h: int, pool: Iterable[int]) -> RefutationWitness | None:
        """First K (ascending id) with GK and HK Conway-inequivalent, if any.

        A ``None`` result only means no separating K exists in the pool.
        """
        if g == h:
            return None
        a = self.arena
        for k in sorted(set(pool)):
            try:
                gk, hk = a.product(g, k), a.product(h, k)
                separated = not self.conway_eq(gk, hk)
            except BudgetExceeded as exc:
                log.warning("skipping multiplier %d: %s", k, exc)
                continue
            if separated:
                return RefutationWitness("multiplier", [k], (self.outcome(gk), self.outcome(hk)))
        return None

    def equiv_s_refute(self, g: int, h: int, ops: Iterable[str], max_depth: int,
                       pool: Iterable[int], max_terms: int = 200_000
                       ) -> tuple[RefutationWitness | None, dict]:
        """Search terms t(x, K0, K1, ...) over ``ops`` separating G from H by outcome.

        ``ops`` is a subset of ``{"+", "-", "·"}`` where ``-`` is unary negation.
        Terms are enumerated by operation count up to ``max_depth``; only terms
        mentioning ``x`` are tested.  Returns the witness (or None) and search
        statistics, including whether the term cap was hit.
        """
        ops = _normalize_ops(ops)
        pool = sorted(set(pool))
        stats = {"termsTested": 0, "capped": False, "skipped": 0}
        if g == h:
            return None, stats
        env = {f"K{i}": k for i, k in enumerate(pool)}
        for term in _terms(ops, max_depth, list(env), max_terms, stats):
            stats["termsTested"] += 1
            try:
                tg = self._eval_term(term, g, env)
                th = self._eval_term(term, h, env)
            except BudgetExceeded as exc:
                log.warning("skipping term %s: %s", format_expr(term), exc)
                stats["skipped"] += 1
                continue
            og, oh = self.outcome(tg), self.outcome(th)
            if og is not oh:
                used = sorted(_names(term) - {"x"}, key=lambda s: int(s[1:]))
                return RefutationWitness("term", [env[n] for n in used], (og, oh), term), stats
        return None, stats

    def _eval_term(self, term: Expr, x: int, env: dict[str, int]) -> int:
        a = self.arena
        if isinstance(term, Name):
            return x if term.name == "x" else env[term.name]
        if isinstance(term, Neg):
            return a.neg(self._eval_term(term.operand, x, env))
        lhs = self._eval_term(term.lhs, x, env)
        rhs = self._eval_term(term.rhs, x, env)
        return a.add(lhs, rhs) if isinstance(term, Add) else a.product(lhs, rhs)

    def replay(self, witness: RefutationWitness, g: int, h: int) -> bool:
        """Recompute a witness from scratch and confirm the outcome discrepancy."""
        if witness.kind == "multiplier":
            k = witness.games[0]
            og = self.outcome(self.arena.product(g, k))
            oh = self.outcome(self.arena.product(h, k))
            return og is not oh and not self.conway_eq(self.arena.product(g, k),
                                                       self.arena.product(h, k))
        used = sorted(_names(witness.term) - {"x"}, key=lambda s: int(s[1:]))
        env = dict(zip(used, witness.games))
        og = self.outcome(self._eval_term(witness.term, g, env))
        oh = self.outcome(self._eval_term(witness.term, h, env))
        return (og, oh) == tuple(witness.outcomes) and og is not oh

    # -- persistence ---------------------------------------------------------

    def memo_lines(self) -> Iterator[str]:
        yield "MEMO v1"
        for (left, g), r in sorted(self._wins.items(), key=lambda kv: (kv[0][1], not kv[0][0])):
            yield f"wins {'L' if left else 'R'} {g} {int(r)}"
        for g, r in sorted(self._iz.items()):
            yield f"iz {g} {int(r)}"

    def load_memo(self, lines: Iterable[str]) -> None:
        it = iter(line for line in lines if line.strip())
        header = next(it, None)
        if header is None:
            return
        if header.strip() != "MEMO v1":
            raise ValueError(f"unexpected memo header {header!r}")
        n = len(self.arena)
        for line in it:
            parts = line.split()
            if parts[0] == "wins" and len(parts) == 4:
                g = int(parts[2])
                key = (parts[1] == "L", g)
                val = parts[3] == "1"
                if g >= n:
                    raise ValueError(f"memo line refers to unknown game: {line!r}")
                self._wins[key] = val
            elif parts[0] == "iz" and len(parts) == 3:
                g = int(parts[1])
                if g >= n:
                    raise ValueError(f"memo line refers to unknown game: {line!r}")
                self._iz[g] = parts[2] == "1"
            else:
                raise ValueError(f"malformed memo line {line!r}")


def timed_query(rel: Relations, fn: Callable[[], object]) -> tuple[object, QueryStats]:
    n0, h0, t0 = len(rel.arena), rel.cache_hits, time.perf_counter()
    result = fn()
    return result, QueryStats(len(rel.arena) - n0, rel.cache_hits - h0,
                              (time.perf_counter() - t0) * 1000)


_OP_ALIASES = {"+": "+", "-": "-", "−": "-", "·": "·", "*": "·", ".": "·"}


def _normalize_ops(ops: Iterable[str]) -> tuple[str, ...]:
    out = []
    for op in ops:
        if op not in _OP_ALIASES:
            raise ValueError(f"unsupported operation {op!r}")
        out.append(_OP_ALIASES[op])
    return tuple(o for o in ("+", "-", "·") if o in out)


def _names(term: Expr) -> set[str]:
    if isinstance(term, Name):
        return {term.name}
    if isinstance(term, Neg):
        return _names(term.operand)
    return _names(term.lhs) | _names(term.rhs)


def _terms(ops: tuple[str, ...], max_depth: int, consts: list[str], cap: int,
           stats: dict) -> Iterator[Expr]:
    """Yield terms containing ``x`` by operation count, then by number of ``x`` leaves.

    Putting single-``x`` terms first keeps cheap contexts such as ``x·K`` ahead
    of self-products like ``x·x``, which can be far more expensive.
    """
    by_depth: list[list[tuple[Expr, int]]] = [
        [(Name("x"), 1)] + [(Name(c), 0) for c in consts]
    ]
    produced = 0
    for d in range(max_depth + 1):
        if d > 0:
            layer: list[tuple[Expr, int]] = []
            if "-" in ops:
                layer.extend((Neg(t), nx) for t, nx in by_depth[d - 1])
            for op in ("+", "·"):
                if op not in ops:
                    continue
                ctor = Add if op == "+" else Mul
                for d1 in range(d):
                    for (t1, n1), (t2, n2) in itertools.product(by_depth[d1], by_depth[d - 1 - d1]):
                        layer.append((ctor(t1, t2), n1 + n2))
                        if len(layer) > cap:
                            stats["capped"] = True
                            break
            by_depth.append(layer)
        for t, _ in sorted((p for p in by_depth[d] if p[1]), key=lambda p: p[1]):
            produced += 1
            if produced > cap:
                stats["capped"] = True
                return
            yield t
