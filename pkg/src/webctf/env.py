"""Episode state machine: reset/step lifecycle, reward and termination.

An episode walks a single agent through one challenge.  The engine
tracks the agent-side knowledge (discovered files, known parameter
pairs, tried actions), enforces the discovery rule (actions only on
files already discovered), pays the flag reward exactly once, and
truncates at the step budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .actions import (
    INVALID,
    Action,
    ObsKind,
    Observation,
    action_count,
    action_from_index,
    action_index,
    check_action,
)
from .dynamics import ContractViolation, transition
from .model import ChallengeGraph, Level, ParamPair


@dataclass
class KnowledgeState:
    """What the agent knows: discovered files, known hints, tried actions."""

    discovered: set = field(default_factory=lambda: {0})
    known_params: set = field(default_factory=set)
    tried: set = field(default_factory=set)


@dataclass(frozen=True)
class EpisodeConfig:
    challenge: ChallengeGraph
    max_steps: Optional[int] = None  # None: 20x the action-space size
    step_reward: float = 0.0
    flag_reward: float = 1.0

    def resolved_max_steps(self) -> int:
        if self.max_steps is not None:
            return self.max_steps
        ch = self.challenge
        return 20 * action_count(ch.level, ch.n_files, ch.n_param_names, ch.n_param_values)

    def check(self) -> None:
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not self.flag_reward > self.step_reward:
            raise ValueError("flag_reward must exceed step_reward")


def knowledge_index(state: KnowledgeState, level: Level, n: int,
                    m: int = 0, o: int = 0) -> int:
    """Pack the tried-set into an integer: bit i = canonical action i tried."""
    total = action_count(level, n, m, o)
    code = 0
    for i in state.tried:
        if not (0 <= i < total):
            raise ValueError(f"tried action index {i} outside [0, {total})")
        code |= 1 << i
    return code


def joint_state_code(state: KnowledgeState, n: int) -> int:
    """Tried-set code joined with the discovered-files bitmask (injective)."""
    tried = 0
    for i in state.tried:
        tried |= 1 << i
    discovered = 0
    for f in state.discovered:
        discovered |= 1 << f
    return (tried << n) | discovered


def _hint_to_json(pair: Optional[ParamPair]):
    return None if pair is None else {"name": pair.name, "value": pair.value}


class EnvHandle:
    """One live episode.  Mutated by a single caller at a time."""

    def __init__(self, config: EpisodeConfig, rng_seed: Optional[int] = None):
        config.check()
        ch = config.challenge
        self.config = config
        self.challenge = ch
        self.rng_seed = rng_seed
        self.action_count = action_count(ch.level, ch.n_files,
                                         ch.n_param_names, ch.n_param_values)
        self.max_steps = config.resolved_max_steps()
        self.state = KnowledgeState()
        self.steps = 0
        self.done = False
        self.truncated = False
        self.records = []
        self.initial_observation = Observation(ObsKind.REVEALED,
                                               frozenset({(0, None)}))

    def _index_of(self, action: Action) -> Optional[int]:
        ch = self.challenge
        try:
            return action_index(action, ch.level, ch.n_files,
                                ch.n_param_names, ch.n_param_values)
        except ValueError:
            # L3 out-of-range parameter pair: a soft Invalid, not indexable.
            return None

    def step(self, action: Action) -> Tuple[Observation, float, bool, dict]:
        if self.done:
            raise ContractViolation("episode already finished; reset for a new one")
        ch = self.challenge

        # Structural legality (verb availability, parameter presence) is a
        # caller error; only out-of-range L3 parameters degrade to Invalid.
        if action.param is not None and ch.level != Level.L3:
            check_action(action, ch.level, ch.n_files)
        if not (0 <= action.file < ch.n_files):
            raise ValueError(f"file {action.file} outside [0, {ch.n_files})")
        idx = self._index_of(action)
        if idx is None and (action.param is None or ch.level != Level.L3):
            check_action(action, ch.level, ch.n_files,
                         ch.n_param_names, ch.n_param_values)

        flag_taken = False
        if idx is None:
            observation = INVALID
        elif action.file not in self.state.discovered:
            observation = INVALID
        else:
            outcome = transition(ch, action)
            observation = outcome.observation
            flag_taken = outcome.flag_taken

        self.steps += 1
        reward = self.config.flag_reward if flag_taken else self.config.step_reward
        if flag_taken:
            self.done = True
        elif self.steps >= self.max_steps:
            self.done = True
            self.truncated = True

        if idx is not None:
            self.state.tried.add(idx)
        if observation.kind == ObsKind.REVEALED:
            for dst, hint in observation.revealed:
                self.state.discovered.add(dst)
                if hint is not None:
                    self.state.known_params.add(hint)

        info = {"step": self.steps, "truncated": self.truncated,
                "action_index": idx}
        self.records.append({
            "step": self.steps,
            "action_index": idx,
            "observation_kind": observation.kind.value,
            "revealed": [{"file": dst, "hint": _hint_to_json(hint)}
                         for dst, hint in sorted(
                             observation.revealed,
                             key=lambda fh: (fh[0], (-1, -1) if fh[1] is None
                                             else (fh[1].name, fh[1].value)))],
            "reward": reward,
            "done": self.done,
        })
        return observation, reward, self.done, info

    def step_index(self, index: int) -> Tuple[Observation, float, bool, dict]:
        ch = self.challenge
        action = action_from_index(index, ch.level, ch.n_files,
                                   ch.n_param_names, ch.n_param_values)
        return self.step(action)


def reset(config: EpisodeConfig, rng_seed: Optional[int] = None
          ) -> Tuple[EnvHandle, Observation]:
    """Start a fresh episode: only the entry file is discovered."""
    env = EnvHandle(config, rng_seed)
    return env, env.initial_observation
