"""Exact iterative-equivalence engine working on pairs instead of difference games.

``G − H`` is iteratively zero exactly when

* every ``G^L`` has a right option ``G^{LR} ≡i H`` or matches some ``H^L ≡i G^L``,
* every ``G^R`` has a left option ``G^{RL} ≡i H`` or matches some ``H^R ≡i G^R``,
* every ``H^R`` has a left option ``H^{RL} ≡i G`` or matches some ``G^R ≡i H^R``,
* every ``H^L`` has a right option ``H^{LR} ≡i G`` or matches some ``G^L ≡i H^L``,

which is the iteratively-zero recursion unfolded on the options of ``G − H``.
So :meth:`IterClasses.eq` decides ``≡i`` without interning the difference.

On top of it the engine keeps one representative per class seen so far and
evaluates sums and products of *actual* forms into representatives.  Each
option is replaced by an equivalent one, which is sound by option-regularity,
and summands by equivalent ones, which is sound because ``≡i`` respects ``+``.
Neither step relies on the product being well defined modulo ``≡i``.
"""

from __future__ import annotations

import sys
import threading
from typing import Callable, TypeVar

from .arena import Arena

T = TypeVar("T")


class WorkBudgetExceeded(RuntimeError):
    """The engine ran out of its deterministic step allowance (class lookups plus pair tests)."""

    def __init__(self, limit: int):
        super().__init__(f"work budget of {limit} engine steps exhausted")
        self.limit = limit


class IterClasses:
    def __init__(self, arena: Arena):
        self.arena = arena
        a = arena
        one = a.integer(1)
        star = a.constant("*")
        half = a.constant("1/2")
        up = a.intern([0], [star])
        # outcomes of g + t for these t are invariant under ≡i (it refines ≡c)
        self.tests = [0, star, one, a.neg(one), half, a.neg(half), up, a.neg(up),
                      a.intern([0, star], [0]), a.intern([0], [0, star])]
        self._eq: dict[tuple[int, int], bool] = {}
        self._wins: dict[tuple[int, int, bool], bool] = {}
        self._grundy: dict[int, int] = {}
        self._cls: dict[int, int] = {}
        self._buckets: dict[tuple, list[int]] = {}
        self._neg: dict[int, int] = {}
        self._sum: dict[tuple[int, int], int] = {}
        self._prod: dict[tuple[int, int], int] = {}
        self.steps = 0
        self.step_limit: int | None = None

    def _tick(self) -> None:
        self.steps += 1
        if self.step_limit is not None and self.steps > self.step_limit:
            raise WorkBudgetExceeded(self.step_limit)

    # -- exact decision ------------------------------------------------------

    def eq(self, g: int, h: int) -> bool:
        if g == h:
            return True
        key = (g, h) if g < h else (h, g)
        r = self._eq.get(key)
        if r is None:
            self._tick()
            a, eq = self.arena, self.eq
            gl, gr, hl, hr = a.left[g], a.right[g], a.left[h], a.right[h]
            r = (all(any(eq(x, h) for x in a.right[y]) or any(eq(y, z) for z in hl) for y in gl)
                 and all(any(eq(x, h) for x in a.left[y]) or any(eq(y, z) for z in hr) for y in gr)
                 and all(any(eq(g, x) for x in a.left[z]) or any(eq(y, z) for y in gr) for z in hr)
                 and all(any(eq(g, x) for x in a.right[z]) or any(eq(y, z) for y in gl) for z in hl))
            self._eq[key] = r
        return r

    # -- bucketing invariants -------------------------------------------------

    def _wins_sum(self, g: int, t: int, left: bool) -> bool:
        """Whether the player moving first wins ``g + t`` (without interning the sum)."""
        key = (g, t, left)
        r = self._wins.get(key)
        if r is None:
            a, w = self.arena, self._wins_sum
            if left:
                r = (any(not w(x, t, False) for x in a.left[g])
                     or any(not w(g, x, False) for x in a.left[t]))
            else:
                r = (any(not w(x, t, True) for x in a.right[g])
                     or any(not w(g, x, True) for x in a.right[t]))
            self._wins[key] = r
        return r

    def grundy(self, g: int) -> int:
        """Grundy value of the impartial game where either player may use any option.

        Second's iterative replies are legal moves of that game, so ``G ≡i H``
        forces equal values here.
        """
        r = self._grundy.get(g)
        if r is None:
            a = self.arena
            seen = {self.grundy(x) for x in a.left[g] + a.right[g]}
            r = 0
            while r in seen:
                r += 1
            self._grundy[g] = r
        return r

    def signature(self, g: int) -> tuple:
        return (self.grundy(g),) + tuple(
            (self._wins_sum(g, t, True), self._wins_sum(g, t, False)) for t in self.tests)

    # -- representatives ---------------------------------------------------------

    def representative(self, g: int) -> int:
        r = self._cls.get(g)
        if r is None:
            self._tick()
            bucket = self._buckets.setdefault(self.signature(g), [])
            for c in bucket:
                if self.eq(g, c):
                    r = c
                    break
            else:
                bucket.append(g)
                r = g
            self._cls[g] = r
            self._cls[r] = r
        return r

    @property
    def class_count(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def neg(self, r: int) -> int:
        x = self._neg.get(r)
        if x is None:
            a = self.arena
            x = self.representative(a.intern([self.neg(y) for y in a.right[r]],
                                             [self.neg(y) for y in a.left[r]]))
            self._neg[r] = x
            self._neg[x] = r
        return x

    def add(self, g: int, h: int) -> int:
        """Representative of ``g + h``."""
        if g > h:
            g, h = h, g
        if g == 0:
            return self.representative(h)
        key = (g, h)
        r = self._sum.get(key)
        if r is None:
            a, add = self.arena, self.add
            lo = [add(x, h) for x in a.left[g]] + [add(g, x) for x in a.left[h]]
            ro = [add(x, h) for x in a.right[g]] + [add(g, x) for x in a.right[h]]
            r = self.representative(a.intern(lo, ro))
            self._sum[key] = r
        return r

    def product(self, g: int, h: int) -> int:
        """Representative of the Conway product of the forms ``g`` and ``h``."""
        if g > h:
            g, h = h, g
        key = (g, h)
        r = self._prod.get(key)
        if r is None:
            a, add, prod = self.arena, self.add, self.product

            def term(x: int, y: int) -> int:
                return add(add(prod(x, h), prod(g, y)), self.neg(prod(x, y)))

            gl, gr, hl, hr = a.left[g], a.right[g], a.left[h], a.right[h]
            lo = [term(x, y) for x in gl for y in hl] + [term(x, y) for x in gr for y in hr]
            ro = [term(x, y) for x in gl for y in hr] + [term(x, y) for x in gr for y in hl]
            r = self.representative(a.intern(lo, ro))
            self._prod[key] = r
        return r


def run_deep(fn: Callable[..., T], *args, stack_mb: int = 512, **kwargs) -> T:
    """Run ``fn`` in a thread with a large C stack and a high recursion limit."""
    box: dict[str, object] = {}

    def target() -> None:
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 1_000_000))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target, name="gamering-deep")
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]  # type: ignore[misc]
    return box["value"]  # type: ignore[return-value]
