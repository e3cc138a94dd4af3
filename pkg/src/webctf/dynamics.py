"""Level-specific transition functions.

Each transition is a pure function of (challenge, action): the website
is static, so repeating a request always yields the same response.
Action legality with respect to what the agent has discovered is the
caller's concern (the episode engine); these functions only model the
server side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import (
    FLAG_FOUND,
    INVALID,
    NOTHING,
    Action,
    ObsKind,
    Observation,
    Verb,
)
from .model import ChallengeGraph, Level, LinkKind, out_links


class ContractViolation(RuntimeError):
    """An operation was invoked outside its contract."""


@dataclass(frozen=True)
class TransitionOutcome:
    observation: Observation
    flag_taken: bool = False

    def __post_init__(self):
        if self.flag_taken and self.observation.kind != ObsKind.FLAG_FOUND:
            raise ValueError("flag_taken requires a FlagFound observation")


def _revealed(items) -> Observation:
    return Observation(ObsKind.REVEALED, frozenset(items))


def transition_l1(challenge: ChallengeGraph, action: Action) -> TransitionOutcome:
    if action.verb == Verb.DEEPREAD:
        raise ContractViolation("deepread is not available at L1")
    if action.verb == Verb.READ:
        return TransitionOutcome(_revealed(out_links(challenge, action.file, LinkKind.EXPLICIT)))
    if action.file == challenge.flag.file:
        return TransitionOutcome(FLAG_FOUND, flag_taken=True)
    return TransitionOutcome(NOTHING)


def transition_l2(challenge: ChallengeGraph, action: Action) -> TransitionOutcome:
    if action.verb == Verb.READ:
        return TransitionOutcome(_revealed(out_links(challenge, action.file, LinkKind.EXPLICIT)))
    if action.verb == Verb.DEEPREAD:
        return TransitionOutcome(_revealed(out_links(challenge, action.file, LinkKind.IMPLICIT)))
    if action.file == challenge.flag.file:
        return TransitionOutcome(FLAG_FOUND, flag_taken=True)
    return TransitionOutcome(NOTHING)


def transition_l3(challenge: ChallengeGraph, action: Action) -> TransitionOutcome:
    param = action.param
    if param is not None:
        if not (0 <= param.name < challenge.n_param_names
                and 0 <= param.value < challenge.n_param_values):
            return TransitionOutcome(INVALID)
    if action.verb == Verb.READ:
        return TransitionOutcome(_revealed(out_links(challenge, action.file, LinkKind.EXPLICIT, param)))
    if action.verb == Verb.DEEPREAD:
        return TransitionOutcome(_revealed(out_links(challenge, action.file, LinkKind.IMPLICIT, param)))
    flag = challenge.flag
    if action.file == flag.file and (flag.guard is None or flag.guard == param):
        return TransitionOutcome(FLAG_FOUND, flag_taken=True)
    return TransitionOutcome(NOTHING)


_TRANSITIONS = {
    Level.L1: transition_l1,
    Level.L2: transition_l2,
    Level.L3: transition_l3,
}


def transition(challenge: ChallengeGraph, action: Action) -> TransitionOutcome:
    return _TRANSITIONS[challenge.level](challenge, action)
