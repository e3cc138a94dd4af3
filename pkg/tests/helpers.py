"""Independent oracles and fixture builders shared across tests.

Everything here deliberately avoids the library's breadth-first solver:
the exhaustive search is an iterative-deepening DFS over the full
action set, and the random-policy success probability is an exact
Markov-chain computation.
"""

from __future__ import annotations

from fractions import Fraction

from webctf.actions import Action, ObsKind, Verb, action_count, action_from_index, verbs_for
from webctf.dynamics import transition
from webctf.model import (
    ChallengeGraph,
    FlagSpec,
    Level,
    Link,
    LinkKind,
    ParamPair,
)


def chain_l1(n: int) -> ChallengeGraph:
    """f0 -> f1 -> ... -> f(n-1), flag in the last file."""
    links = tuple(Link(i, i + 1, LinkKind.EXPLICIT) for i in range(n - 1))
    return ChallengeGraph(Level.L1, n, 0, 0, links, FlagSpec(n - 1), seed=0)


def mixed_l2() -> ChallengeGraph:
    """Explicit f0->f1, implicit f1->f2; the flag needs a deepread."""
    links = (Link(0, 1, LinkKind.EXPLICIT), Link(1, 2, LinkKind.IMPLICIT))
    return ChallengeGraph(Level.L2, 3, 0, 0, links, FlagSpec(2), seed=0)


def guarded_l3() -> ChallengeGraph:
    """f0 -> f1 guarded by (0,0); hint on the f0 -> f2 link; flag guarded."""
    g = ParamPair(0, 0)
    fg = ParamPair(1, 1)
    links = (
        Link(0, 2, LinkKind.EXPLICIT, hint=g),
        Link(0, 1, LinkKind.EXPLICIT, guard=g, hint=fg),
    )
    return ChallengeGraph(Level.L3, 3, 2, 2, links, FlagSpec(1, fg), seed=0)


def _all_param_choices(challenge: ChallengeGraph):
    if challenge.level != Level.L3:
        return [None]
    return [None] + [ParamPair(j, k)
                     for j in range(challenge.n_param_names)
                     for k in range(challenge.n_param_values)]


def _apply(challenge, discovered, known, action):
    """(next_discovered, next_known, flag_taken) for one action."""
    outcome = transition(challenge, action)
    if outcome.flag_taken:
        return discovered, known, True
    if outcome.observation.kind != ObsKind.REVEALED:
        return discovered, known, False
    nd, nk = set(discovered), set(known)
    for dst, hint in outcome.observation.revealed:
        nd.add(dst)
        if hint is not None:
            nk.add(hint)
    return frozenset(nd), frozenset(nk), False


def solvable_within(challenge: ChallengeGraph, depth: int) -> bool:
    """Depth-bounded exhaustive DFS over the full action set."""
    params = _all_param_choices(challenge)

    def dfs(discovered, known, left):
        if left == 0:
            return False
        for verb in verbs_for(challenge.level):
            for file in sorted(discovered):
                for param in params:
                    action = Action(verb, file, param)
                    nd, nk, won = _apply(challenge, discovered, known, action)
                    if won:
                        return True
                    # A step that changes nothing can never shorten a
                    # solution in a deterministic environment.
                    if (nd, nk) != (discovered, known) and dfs(nd, nk, left - 1):
                        return True
        return False

    return dfs(frozenset({0}), frozenset(), depth)


def exhaustive_optimum(challenge: ChallengeGraph, max_depth: int):
    """Shortest solution length by iterative deepening, or None."""
    for depth in range(1, max_depth + 1):
        if solvable_within(challenge, depth):
            return depth
    return None


def exact_random_solve_probability(challenge: ChallengeGraph, max_steps: int) -> float:
    """P(uniform-random action indices retrieve the flag within max_steps)."""
    n_actions = action_count(challenge.level, challenge.n_files,
                             challenge.n_param_names, challenge.n_param_values)
    ch = challenge

    def summarize(state):
        discovered, known = state
        nexts = []
        for idx in range(n_actions):
            action = action_from_index(idx, ch.level, ch.n_files,
                                       ch.n_param_names, ch.n_param_values)
            if action.file not in discovered:
                nexts.append(state)
                continue
            nd, nk, won = _apply(ch, discovered, known, action)
            nexts.append("WIN" if won else (nd, nk))
        return nexts

    summaries = {}
    memo = {}

    def prob(state, steps_left) -> Fraction:
        if steps_left == 0:
            return Fraction(0)
        key = (state, steps_left)
        if key in memo:
            return memo[key]
        if state not in summaries:
            summaries[state] = summarize(state)
        total = Fraction(0)
        for nxt in summaries[state]:
            total += Fraction(1) if nxt == "WIN" else prob(nxt, steps_left - 1)
        result = total / n_actions
        memo[key] = result
        return result

    start = (frozenset({0}), frozenset())
    return float(prob(start, max_steps))
