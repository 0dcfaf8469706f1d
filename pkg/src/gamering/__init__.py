"""Exact algebra of finite partizan game forms under iterative equivalence."""

from .arena import Arena, BudgetExceeded, GameDbError
from .notation import ParseError, evaluate, format_game, parse
from .relations import Outcome, Player, Relations

__all__ = [
    "Arena", "BudgetExceeded", "GameDbError", "Outcome", "ParseError", "Player",
    "Relations", "evaluate", "format_game", "parse",
]
