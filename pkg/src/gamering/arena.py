"""Interned arena of finite partizan game forms.

Every form is stored once, bottom-up, with its option sets sorted and
deduplicated.  Two forms therefore get the same id exactly when they are
extensionally equal, and id 0 is always ``{|}``.
"""

from __future__ import annotations

import itertools
import re
from pathlib import Path
from typing import Iterable, Iterator

DEFAULT_BUDGET = 5_000_000
BUDGET_ENV_VAR = "GAMERING_BUDGET"
DB_HEADER = "GAMEDB v1"
MAX_ENUM_BIRTHDAY = 2


class BudgetExceeded(RuntimeError):
    """Raised when interning would grow the arena past its node budget."""

    def __init__(self, budget: int, what: str = "intern"):
        super().__init__(f"node budget of {budget} exceeded while building {what}")
        self.budget = budget
        self.what = what


class GameDbError(ValueError):
    pass


class Arena:
    """Append-only table of game forms plus memoized structural operations.

    >>> a = Arena()
    >>> star = a.intern([0], [0])
    >>> a.neg(star) == star
    True
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        if budget < 1:
            raise ValueError("budget must allow at least the zero game")
        self.budget = budget
        self.left: list[tuple[int, ...]] = []
        self.right: list[tuple[int, ...]] = []
        self._index: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
        self._neg: dict[int, int] = {}
        self._add: dict[tuple[int, int], int] = {}
        self._mul: dict[tuple[int, int], int] = {}
        self._birthday: list[int] = []
        self._context = "intern"
        self.intern((), ())

    def __len__(self) -> int:
        return len(self.left)

    def intern(self, left: Iterable[int], right: Iterable[int]) -> int:
        lo = tuple(sorted(set(left)))
        ro = tuple(sorted(set(right)))
        key = (lo, ro)
        gid = self._index.get(key)
        if gid is not None:
            return gid
        n = len(self.left)
        for x in itertools.chain(lo, ro):
            if not 0 <= x < n:
                raise ValueError(f"option id {x} is not interned")
        if n >= self.budget:
            raise BudgetExceeded(self.budget, self._context)
        self.left.append(lo)
        self.right.append(ro)
        self._birthday.append(
            1 + max(self._birthday[x] for x in itertools.chain(lo, ro)) if lo or ro else 0
        )
        self._index[key] = n
        return n

    def options(self, g: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.left[g], self.right[g]

    def birthday(self, g: int) -> int:
        return self._birthday[g]

    def neg(self, g: int) -> int:
        r = self._neg.get(g)
        if r is None:
            r = self.intern([self.neg(x) for x in self.right[g]],
                            [self.neg(x) for x in self.left[g]])
            self._neg[g] = r
            self._neg[r] = g
        return r

    def add(self, g: int, h: int) -> int:
        """Disjunctive sum; memoized on the unordered pair."""
        if g > h:
            g, h = h, g
        key = (g, h)
        r = self._add.get(key)
        if r is None:
            add = self.add
            lo = [add(x, h) for x in self.left[g]] + [add(g, x) for x in self.left[h]]
            ro = [add(x, h) for x in self.right[g]] + [add(g, x) for x in self.right[h]]
            r = self.intern(lo, ro)
            self._add[key] = r
        return r

    def sub(self, g: int, h: int) -> int:
        return self.add(g, self.neg(h))

    def product(self, g: int, h: int) -> int:
        """Conway product.

        Left options come from (G^L, H^L) and (G^R, H^R) pairs, right options
        from (G^L, H^R) and (G^R, H^L) pairs, each as ``G'H + GH' - G'H'``.
        """
        if g > h:
            g, h = h, g
        key = (g, h)
        r = self._mul.get(key)
        if r is not None:
            return r
        product, add, neg = self.product, self.add, self.neg

        def term(a: int, b: int) -> int:
            return add(add(product(a, h), product(g, b)), neg(product(a, b)))

        gl, gr, hl, hr = self.left[g], self.right[g], self.left[h], self.right[h]
        lo = [term(a, b) for a in gl for b in hl] + [term(a, b) for a in gr for b in hr]
        ro = [term(a, b) for a in gl for b in hr] + [term(a, b) for a in gr for b in hl]
        saved, self._context = self._context, f"product({g}, {h})"
        try:
            r = self.intern(lo, ro)
        finally:
            self._context = saved
        self._mul[key] = r
        return r

    def subpositions(self, g: int) -> set[int]:
        seen = {g}
        stack = [g]
        while stack:
            x = stack.pop()
            for y in itertools.chain(self.left[x], self.right[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def import_game(self, other: "Arena", g: int) -> int:
        """Intern the form ``g`` of another arena here; returns its local id."""
        local: dict[int, int] = {}
        for x in sorted(other.subpositions(g)):  # options precede their parents
            local[x] = self.intern([local[y] for y in other.left[x]],
                                   [local[y] for y in other.right[x]])
        return local[g]

    def integer(self, n: int) -> int:
        g = 0
        for _ in range(abs(n)):
            g = self.intern([g], [])
        return self.neg(g) if n < 0 else g

    def constant(self, name: str) -> int:
        """Intern a named game: integers, ``*``, ``1/2``, ``2°`` and the worked examples.

        ``G_ex = {-1,0|0,1}``, ``K_half = 1/2+1/2-1``, ``K_bullet = {0|K_half || 0|0}``,
        ``K_rm = G_ex + *`` and ``M3 = {-3|}``.
        """
        name = CONSTANT_ALIASES.get(name, name)
        if _INT_NAME.fullmatch(name):
            return self.integer(int(name))
        build = _CONSTANTS.get(name)
        if build is None:
            raise KeyError(f"unknown game constant {name!r}")
        return build(self)

    def enumerate_forms(self, max_birthday: int, allow_large: bool = False) -> list[int]:
        """All forms of birthday <= max_birthday, in deterministic order.

        Layer n+1 interns every (left, right) pair of subsets of the
        birthday-<=n universe; subsets are taken in combination order and
        the final list is sorted by id.
        """
        if max_birthday < 0:
            raise ValueError("birthday must be nonnegative")
        limit = 3 if allow_large else MAX_ENUM_BIRTHDAY
        if max_birthday > limit:
            raise ValueError(f"enumeration beyond birthday {limit} is not supported")
        universe = [0]
        for _ in range(max_birthday):
            if 4 ** len(universe) > self.budget:
                raise BudgetExceeded(self.budget, f"enumerate_forms({max_birthday})")
            subsets = list(_powerset(universe))
            layer = {self.intern(lo, ro) for lo in subsets for ro in subsets}
            universe = sorted(layer.union(universe))
        return universe

    # -- persistence -------------------------------------------------------

    def dump_lines(self) -> Iterator[str]:
        yield DB_HEADER
        for gid, (lo, ro) in enumerate(zip(self.left, self.right)):
            yield f"{gid} := {{{','.join(map(str, lo))}|{','.join(map(str, ro))}}}"

    def save(self, path: str | Path, extra_lines: Iterable[str] = ()) -> None:
        text = "\n".join(itertools.chain(self.dump_lines(), extra_lines)) + "\n"
        Path(path).write_text(text, encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path, budget: int = DEFAULT_BUDGET) -> tuple["Arena", list[str]]:
        """Re-intern a GAMEDB file; returns the arena and any trailing memo lines."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0].strip() != DB_HEADER:
            raise GameDbError(f"{path}: missing '{DB_HEADER}' header")
        arena = cls(budget=budget)
        rest: list[str] = []
        for lineno, line in enumerate(lines[1:], start=2):
            if rest or not line or not line[0].isdigit():
                rest.append(line)
                continue
            try:
                gid_s, body = line.split(" := ", 1)
                gid = int(gid_s)
                if not (body.startswith("{") and body.endswith("}")):
                    raise ValueError(body)
                lo_s, ro_s = body[1:-1].split("|")
                lo = [int(x) for x in lo_s.split(",") if x]
                ro = [int(x) for x in ro_s.split(",") if x]
            except ValueError as exc:
                raise GameDbError(f"{path}:{lineno}: malformed node line {line!r}") from exc
            try:
                got = arena.intern(lo, ro)
            except ValueError as exc:
                raise GameDbError(f"{path}:{lineno}: {exc}") from None
            if got != gid:
                raise GameDbError(f"{path}:{lineno}: node {gid} re-interned as {got}")
        return arena, rest


def _powerset(items: list[int]) -> Iterator[tuple[int, ...]]:
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


_INT_NAME = re.compile(r"-?\d+")


def _star(a: Arena) -> int:
    return a.intern([0], [0])


def _half(a: Arena) -> int:
    return a.intern([0], [a.integer(1)])


def _two_circ(a: Arena) -> int:
    return a.intern([0, a.integer(1)], [])


def _g_ex(a: Arena) -> int:
    return a.intern([a.integer(-1), 0], [0, a.integer(1)])


def _k_half(a: Arena) -> int:
    h = _half(a)
    return a.sub(a.add(h, h), a.integer(1))


def _k_bullet(a: Arena) -> int:
    return a.intern([a.intern([0], [_k_half(a)])], [_star(a)])


def _k_rm(a: Arena) -> int:
    return a.add(_g_ex(a), _star(a))


def _m3(a: Arena) -> int:
    return a.intern([a.integer(-3)], [])


_CONSTANTS = {
    "*": _star,
    "1/2": _half,
    "2°": _two_circ,
    "G_ex": _g_ex,
    "K_half": _k_half,
    "K_bullet": _k_bullet,
    "K_rm": _k_rm,
    "M3": _m3,
}
CONSTANT_ALIASES = {"2o": "2°", "star": "*", "half": "1/2"}
CONSTANT_NAMES = tuple(_CONSTANTS)
