"""Ground-truth solver and a tabular Q-learning baseline.

The oracle expands knowledge states breadth-first, applying every legal
action (parameterized variants are restricted to pairs the agent could
actually know from hints), so it returns a provably shortest solution
or an unsolvable verdict.  The learner is plain epsilon-greedy
Q-learning over the joint tried/discovered state code.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .actions import Action, ObsKind, Verb, action_count, verbs_for
from .dynamics import transition
from .env import EnvHandle, EpisodeConfig, joint_state_code
from .model import ChallengeGraph, Level
from .rng import SplitMix64


def _candidate_actions(challenge: ChallengeGraph, discovered, known_params):
    """Legal actions in canonical order, parameters limited to known hints."""
    params = [None]
    if challenge.level == Level.L3:
        params += sorted(known_params)
    for verb in verbs_for(challenge.level):
        for file in sorted(discovered):
            for param in params:
                yield Action(verb, file, param)


def oracle_solve(challenge: ChallengeGraph) -> Optional[list]:
    """A shortest flag-retrieving action sequence, or None if unsolvable.

    Breadth-first over (discovered files, known parameter pairs); ties
    between equal-length solutions break toward lower canonical action
    indices because candidates are expanded in canonical order.
    """
    start = (frozenset({0}), frozenset())
    queue = deque([(start, ())])
    seen = {start}
    while queue:
        (discovered, known), path = queue.popleft()
        for action in _candidate_actions(challenge, discovered, known):
            outcome = transition(challenge, action)
            if outcome.flag_taken:
                return list(path) + [action]
            if action.verb == Verb.SEARCH:
                continue
            if outcome.observation.kind != ObsKind.REVEALED:
                continue
            new_discovered = set(discovered)
            new_known = set(known)
            for dst, hint in outcome.observation.revealed:
                new_discovered.add(dst)
                if hint is not None:
                    new_known.add(hint)
            state = (frozenset(new_discovered), frozenset(new_known))
            if state != (discovered, known) and state not in seen:
                seen.add(state)
                queue.append((state, path + (action,)))
    return None


# ---------------------------------------------------------------------------
# Policies
# ---------------------------------------------------------------------------

@dataclass
class Policy:
    """Deterministic state-code -> action-index table with a default."""

    table: dict = field(default_factory=dict)
    default_action: int = 0

    def action_for(self, state_code: int, rng: Optional[SplitMix64] = None) -> int:
        return self.table.get(state_code, self.default_action)

    def max_action_index(self) -> int:
        indices = list(self.table.values()) + [self.default_action]
        return max(indices)

    def to_json_obj(self) -> dict:
        return {str(code): act for code, act in sorted(self.table.items())}

    @classmethod
    def from_json_obj(cls, obj: dict, default_action: int = 0) -> "Policy":
        return cls({int(code): int(act) for code, act in obj.items()}, default_action)


class UniformRandomPolicy:
    """Picks uniformly over the full action space; needs the caller's rng."""

    def __init__(self, n_actions: int):
        self.n_actions = n_actions

    def action_for(self, state_code: int, rng: SplitMix64) -> int:
        return rng.randrange(self.n_actions)

    def max_action_index(self) -> int:
        return self.n_actions - 1


# ---------------------------------------------------------------------------
# Q-learning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QLearningParams:
    alpha: float = 0.1
    gamma: float = 0.95
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    anneal_fraction: float = 0.8  # epsilon reaches its floor after this share
    action_cap: int = 10_000

    def check(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if not 0 <= self.gamma <= 1:
            raise ValueError("gamma must be in [0, 1]")


@dataclass
class TrainResult:
    policy: Policy
    curve: list  # (episode, steps, reward) rows
    q_table: dict  # state code -> list of action values
    episodes_run: int


def _greedy(values) -> int:
    best, best_v = 0, values[0]
    for i in range(1, len(values)):
        if values[i] > best_v:
            best, best_v = i, values[i]
    return best


def train(challenge: ChallengeGraph,
          episodes: int,
          params: QLearningParams = QLearningParams(),
          training_seed: int = 0,
          max_steps: Optional[int] = None,
          step_reward: float = 0.0,
          flag_reward: float = 1.0,
          stop_when_solved_within: Optional[int] = None,
          eval_every: int = 500) -> TrainResult:
    """Epsilon-greedy Q-learning; deterministic in (challenge, params, seed).

    With stop_when_solved_within set, training checks the greedy policy
    every eval_every episodes and stops once it retrieves the flag in at
    most that many steps.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    params.check()
    n_actions = action_count(challenge.level, challenge.n_files,
                             challenge.n_param_names, challenge.n_param_values)
    if n_actions > params.action_cap:
        raise ValueError(
            f"action space of {n_actions} exceeds the tabular cap of "
            f"{params.action_cap}; tabular Q-learning will not scale here")

    config = EpisodeConfig(challenge, max_steps, step_reward, flag_reward)
    rng = SplitMix64(training_seed)
    q: dict = {}
    n = challenge.n_files
    anneal_span = max(1, int(params.anneal_fraction * episodes))
    curve = []
    episodes_run = 0

    for episode in range(episodes):
        frac = min(1.0, episode / anneal_span)
        epsilon = params.epsilon_start + (params.epsilon_end - params.epsilon_start) * frac
        env = EnvHandle(config)
        state = joint_state_code(env.state, n)
        total_reward = 0.0
        done = False
        while not done:
            values = q.get(state)
            if values is None:
                values = [0.0] * n_actions
                q[state] = values
            if rng.random() < epsilon:
                act = rng.randrange(n_actions)
            else:
                act = _greedy(values)
            _, reward, done, _ = env.step_index(act)
            next_state = joint_state_code(env.state, n)
            total_reward += reward
            if done:
                target = reward
            else:
                next_values = q.get(next_state)
                target = reward + params.gamma * (max(next_values) if next_values else 0.0)
            values[act] += params.alpha * (target - values[act])
            state = next_state
        curve.append((episode, env.steps, total_reward))
        episodes_run = episode + 1
        if stop_when_solved_within is not None and episodes_run % eval_every == 0:
            policy = _extract_policy(q)
            stats = evaluate(policy, challenge, episodes=1,
                             max_steps=stop_when_solved_within,
                             step_reward=step_reward, flag_reward=flag_reward)
            if stats.solve_rate == 1.0:
                break

    return TrainResult(_extract_policy(q), curve, q, episodes_run)


def _extract_policy(q: dict) -> Policy:
    return Policy({state: _greedy(values) for state, values in q.items()})


def curve_to_csv(curve) -> str:
    lines = ["episode,steps,reward"]
    lines += [f"{e},{s},{r}" for e, s, r in curve]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvalStats:
    solve_rate: float
    mean_steps: float
    mean_reward: float

    def to_json_obj(self) -> dict:
        return {"solve_rate": self.solve_rate, "mean_steps": self.mean_steps,
                "mean_reward": self.mean_reward}


def evaluate(policy, challenge: ChallengeGraph, episodes: int,
             max_steps: Optional[int] = None, seed: int = 0,
             step_reward: float = 0.0, flag_reward: float = 1.0) -> EvalStats:
    """Roll the policy out and report exact stats over the episode count."""
    n_actions = action_count(challenge.level, challenge.n_files,
                             challenge.n_param_names, challenge.n_param_values)
    if policy.max_action_index() >= n_actions:
        raise ValueError("policy addresses actions outside this challenge's space")
    config = EpisodeConfig(challenge, max_steps, step_reward, flag_reward)
    rng = SplitMix64(seed)
    n = challenge.n_files
    solved = 0
    total_steps = 0
    total_reward = 0.0
    for _ in range(episodes):
        env = EnvHandle(config)
        done = False
        while not done:
            act = policy.action_for(joint_state_code(env.state, n), rng)
            _, reward, done, _ = env.step_index(act)
            total_reward += reward
        if not env.truncated:
            solved += 1
        total_steps += env.steps
    return EvalStats(solve_rate=solved / episodes,
                     mean_steps=total_steps / episodes,
                     mean_reward=total_reward / episodes)
