"""Action and observation types, plus the canonical flat action encoding.

Tabular agents address actions by a single integer.  The canonical
order is verb-major (read < deepread < search), then file ascending;
at level 3 each file block starts with the parameterless variant
followed by the M*O parameter pairs ordered by (name, value).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .model import Level, ParamPair


class Verb(Enum):
    READ = "read"
    DEEPREAD = "deepread"
    SEARCH = "search"


# Canonical verb order per level.
_VERBS = {
    Level.L1: (Verb.READ, Verb.SEARCH),
    Level.L2: (Verb.READ, Verb.DEEPREAD, Verb.SEARCH),
    Level.L3: (Verb.READ, Verb.DEEPREAD, Verb.SEARCH),
}


@dataclass(frozen=True)
class Action:
    verb: Verb
    file: int
    param: Optional[ParamPair] = None


class ObsKind(Enum):
    REVEALED = "revealed"
    FLAG_FOUND = "flag_found"
    NOTHING = "nothing"
    INVALID = "invalid"


@dataclass(frozen=True)
class Observation:
    """The webserver's response: revealed (file, hint) pairs or a signal."""

    kind: ObsKind
    revealed: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind != ObsKind.REVEALED and self.revealed:
            raise ValueError("only Revealed observations carry revealed items")


NOTHING = Observation(ObsKind.NOTHING)
INVALID = Observation(ObsKind.INVALID)
FLAG_FOUND = Observation(ObsKind.FLAG_FOUND)


def verbs_for(level: Level):
    return _VERBS[level]


def action_count(level: Level, n: int, m: int = 0, o: int = 0) -> int:
    """Size of the flat action space: 2N at L1, 3N at L2, 3(N + NMO) at L3."""
    if n < 1:
        raise ValueError("need at least one file")
    if level == Level.L1:
        return 2 * n
    if level == Level.L2:
        return 3 * n
    if m < 1 or o < 1:
        raise ValueError("L3 requires M >= 1 and O >= 1")
    return 3 * (n + n * m * o)


def check_action(action: Action, level: Level, n: int, m: int = 0, o: int = 0) -> None:
    """Raise ValueError if the action is outside the level's action space."""
    if action.verb not in _VERBS[level]:
        raise ValueError(f"{action.verb.value} is not available at L{int(level)}")
    if not (0 <= action.file < n):
        raise ValueError(f"file {action.file} outside [0, {n})")
    if action.param is not None:
        if level != Level.L3:
            raise ValueError(f"parameters are not available at L{int(level)}")
        if not (0 <= action.param.name < m and 0 <= action.param.value < o):
            raise ValueError(f"parameter pair {action.param} outside [0, {m}) x [0, {o})")


def action_index(action: Action, level: Level, n: int, m: int = 0, o: int = 0) -> int:
    check_action(action, level, n, m, o)
    verb_pos = _VERBS[level].index(action.verb)
    if level != Level.L3:
        return verb_pos * n + action.file
    per_file = 1 + m * o
    offset = 0
    if action.param is not None:
        offset = 1 + action.param.name * o + action.param.value
    return verb_pos * n * per_file + action.file * per_file + offset


def action_from_index(index: int, level: Level, n: int, m: int = 0, o: int = 0) -> Action:
    total = action_count(level, n, m, o)
    if not (0 <= index < total):
        raise ValueError(f"action index {index} outside [0, {total})")
    verbs = _VERBS[level]
    if level != Level.L3:
        return Action(verbs[index // n], index % n)
    per_file = 1 + m * o
    verb = verbs[index // (n * per_file)]
    rest = index % (n * per_file)
    file, offset = divmod(rest, per_file)
    if offset == 0:
        return Action(verb, file)
    name, value = divmod(offset - 1, o)
    return Action(verb, file, ParamPair(name, value))
