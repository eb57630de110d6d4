"""Registry for the bundled BDDL model corpus.

Each named instance pairs a domain file with a problem file from the
``models/`` package data directory.  Names follow ``game-<m>x<n>`` with the
board width first (matching ``#boardsize m n``).
"""

from __future__ import annotations

from importlib import resources

from .parser import parse_domain, parse_problem
from .syntax import GameDomain, GameInstance

MODELS: dict[str, tuple[str, str]] = {
    "tic-5x4": ("positional.domain", "tic-5x4.problem"),
    "tictactoe-3x3": ("positional.domain", "tictactoe-3x3.problem"),
    "lines2-3x3": ("positional.domain", "lines2-3x3.problem"),
    "positional-1x1": ("positional.domain", "positional-1x1.problem"),
    "unreachable-2x2": ("positional.domain", "unreachable-2x2.problem"),
    "connect2-2x2": ("connectc.domain", "connect2-2x2.problem"),
    "connect2-3x3": ("connectc.domain", "connect2-3x3.problem"),
    "connect2-4x4": ("connectc.domain", "connect2-4x4.problem"),
    "connect3-3x3": ("connectc.domain", "connect3-3x3.problem"),
    "connect3-4x4": ("connectc.domain", "connect3-4x4.problem"),
    "connect4-7x6": ("connectc.domain", "connect4-7x6.problem"),
    "breakthrough-2x4": ("breakthrough.domain", "breakthrough-2x4.problem"),
    "breakthrough-2x4-d3": ("breakthrough.domain", "breakthrough-2x4-d3.problem"),
    "knightthrough-3x4": ("knightthrough.domain", "knightthrough-3x4.problem"),
    "evader-pursuer-3x3": ("evader-pursuer.domain", "evader-pursuer-3x3.problem"),
    "evader-pursuer-4x4": ("evader-pursuer.domain", "evader-pursuer-4x4.problem"),
    "evader-pursuer-8x8": ("evader-pursuer.domain", "evader-pursuer-8x8.problem"),
    "domineering-2x2": ("domineering.domain", "domineering-2x2.problem"),
    "domineering-3x2": ("domineering.domain", "domineering-3x2.problem"),
    "domineering-2x3": ("domineering.domain", "domineering-2x3.problem"),
    "domineering-3x3": ("domineering.domain", "domineering-3x3.problem"),
    "domineering-2x4": ("domineering.domain", "domineering-2x4.problem"),
    "domineering-3x4": ("domineering.domain", "domineering-3x4.problem"),
    "domineering-4x4": ("domineering.domain", "domineering-4x4.problem"),
    "domineering-6x6": ("domineering.domain", "domineering-6x6.problem"),
}


def list_models() -> list[str]:
    return sorted(MODELS)


def model_text(filename: str) -> str:
    return resources.files("bddlqbf").joinpath("models", filename).read_text("utf-8")


def load_model(name: str) -> tuple[GameDomain, GameInstance]:
    """Parse a bundled instance by registry name."""
    try:
        domain_file, problem_file = MODELS[name]
    except KeyError:
        raise KeyError(
            f"unknown bundled model {name!r}; known: {', '.join(list_models())}"
        ) from None
    dom = parse_domain(model_text(domain_file))
    inst = parse_problem(model_text(problem_file))
    return dom, inst
