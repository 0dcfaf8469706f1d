"""Numbers, impartial games and sets-as-games."""

from __future__ import annotations

import itertools
from typing import Iterable

from .arena import Arena
from .relations import Relations


class Taxonomy:
    """Memoized class flags over one arena."""

    def __init__(self, rel: Relations):
        self.rel = rel
        self.arena: Arena = rel.arena
        self._number: dict[int, bool] = {}
        self._impartial: dict[int, bool] = {}
        self._set: dict[int, bool] = {}

    def is_number(self, g: int) -> bool:
        """Every subposition has each left option strictly below each right option."""
        r = self._number.get(g)
        if r is None:
            a, lt = self.arena, self.rel.conway_lt
            r = (all(self.is_number(x) for x in a.left[g] + a.right[g])
                 and all(lt(x, y) for x in a.left[g] for y in a.right[g]))
            self._number[g] = r
        return r

    def is_impartial(self, g: int) -> bool:
        r = self._impartial.get(g)
        if r is None:
            a = self.arena
            r = a.left[g] == a.right[g] and all(self.is_impartial(x) for x in a.left[g])
            self._impartial[g] = r
        return r

    def is_set(self, g: int) -> bool:
        r = self._set.get(g)
        if r is None:
            a = self.arena
            r = not a.right[g] and all(self.is_set(x) for x in a.left[g])
            self._set[g] = r
        return r

    def set_from_elements(self, elements: Iterable[int]) -> int:
        elements = list(elements)
        for e in elements:
            if not self.is_set(e):
                raise ValueError(f"game {e} is not a set")
        return self.arena.intern(elements, ())

    def zermelo(self, n: int) -> int:
        _check_natural(n)
        g = 0
        for _ in range(n):
            g = self.arena.intern([g], ())
        return g

    def von_neumann(self, n: int) -> int:
        _check_natural(n)
        elems: list[int] = []
        for _ in range(n):
            elems.append(self.arena.intern(elems, ()))
        return self.arena.intern(elems, ())

    def von_neumann_rank(self, g: int) -> int:
        if not self.is_set(g):
            raise ValueError(f"game {g} is not a set")
        return max((self.von_neumann_rank(x) + 1 for x in self.arena.left[g]), default=0)

    def sets_up_to(self, max_birthday: int) -> list[int]:
        """All sets of birthday <= max_birthday (hereditarily finite, so 1, 2, 4, 16, 65536, ...)."""
        if max_birthday > 4:
            raise ValueError("set enumeration is limited to birthday 4")
        layer = [0]
        for _ in range(max_birthday):
            layer = sorted({self.arena.intern(c, ()) for k in range(len(layer) + 1)
                            for c in itertools.combinations(layer, k)})
        return layer

    def flags(self, g: int) -> dict:
        return {
            "id": g,
            "birthday": self.arena.birthday(g),
            "isNumber": self.is_number(g),
            "isImpartial": self.is_impartial(g),
            "isSet": self.is_set(g),
        }


def _check_natural(n: int) -> None:
    if n < 0:
        raise ValueError("expected a nonnegative integer")
