"""Conventional reset/step RL wrapper around the webctf engine.

The wrapper adds no game logic: every transition decision is made by
the core engine.  It only flattens observations into a fixed-length
integer vector suitable for generic agent toolkits:

    [kind_code, revealed-file bitmask chunks (32 bits each), hint count]

with the raw structured observation available through ``info["observation"]``.
"""

from __future__ import annotations

import os
from typing import Optional, Tuple, Union

from webctf import (
    ChallengeGraph,
    EnvHandle,
    EpisodeConfig,
    GeneratorConfig,
    Observation,
    ObsKind,
    action_count,
    generate,
    load_challenge,
)

__all__ = ["WrappedEnv", "make", "generate_challenge", "KIND_CODES"]

KIND_CODES = {
    ObsKind.REVEALED: 0,
    ObsKind.FLAG_FOUND: 1,
    ObsKind.NOTHING: 2,
    ObsKind.INVALID: 3,
}

_CHUNK_BITS = 32


def generate_challenge(level: int, n_files: int, n_param_names: int = 0,
                       n_param_values: int = 0, explicit_density: float = 0.25,
                       implicit_fraction: float = 0.3, guard_fraction: float = 0.3,
                       seed: int = 0) -> ChallengeGraph:
    """Mirror of the core generator config, for toolkit-side convenience."""
    return generate(GeneratorConfig(
        level=level, n_files=n_files, n_param_names=n_param_names,
        n_param_values=n_param_values, explicit_density=explicit_density,
        implicit_fraction=implicit_fraction, guard_fraction=guard_fraction,
        seed=seed))


class WrappedEnv:
    """One challenge exposed through the reset/step convention."""

    def __init__(self, challenge: ChallengeGraph,
                 max_steps: Optional[int] = None,
                 step_reward: float = 0.0, flag_reward: float = 1.0):
        self.challenge = challenge
        self._config = EpisodeConfig(challenge, max_steps, step_reward, flag_reward)
        self.action_space_n = action_count(
            challenge.level, challenge.n_files,
            challenge.n_param_names, challenge.n_param_values)
        self._n_chunks = (challenge.n_files + _CHUNK_BITS - 1) // _CHUNK_BITS
        self.observation_size = 1 + self._n_chunks + 1
        self._handle: Optional[EnvHandle] = None

    def _encode(self, observation: Observation) -> list:
        mask = 0
        hints = 0
        for dst, hint in observation.revealed:
            mask |= 1 << dst
            hints += hint is not None
        chunks = [(mask >> (_CHUNK_BITS * i)) & ((1 << _CHUNK_BITS) - 1)
                  for i in range(self._n_chunks)]
        return [KIND_CODES[observation.kind]] + chunks + [hints]

    def reset(self) -> list:
        self._handle = EnvHandle(self._config)
        return self._encode(self._handle.initial_observation)

    def step(self, action_index: int) -> Tuple[list, float, bool, bool, dict]:
        if self._handle is None:
            raise RuntimeError("call reset() before step()")
        observation, reward, done, info = self._handle.step_index(action_index)
        info = dict(info, observation=observation)
        return self._encode(observation), reward, done, info["truncated"], info

    @property
    def records(self) -> list:
        """The core engine's episode log (JSON-ready records)."""
        return [] if self._handle is None else self._handle.records


def make(source: Union[str, os.PathLike, ChallengeGraph, GeneratorConfig],
         **episode_kwargs) -> WrappedEnv:
    """Build an environment from a challenge file, graph or generator config."""
    if isinstance(source, ChallengeGraph):
        challenge = source
    elif isinstance(source, GeneratorConfig):
        challenge = generate(source)
    else:
        challenge = load_challenge(source)
    return WrappedEnv(challenge, **episode_kwargs)
