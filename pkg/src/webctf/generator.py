"""Seeded random challenge factory.

Challenges are solvable by construction: a solution path from the entry
file to the flag is planted first (with every guard's hint disclosed on
an earlier path link), then distractor links are sprinkled in by
density.  The oracle solver runs as a final safety net, so an
unsolvable output can never escape.

Randomness comes exclusively from the pinned SplitMix64 stream, making
generation a pure function of the config: identical configs produce
byte-identical challenge files.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ChallengeGraph,
    FlagSpec,
    Level,
    Link,
    LinkKind,
    ParamPair,
    SchemaError,
    from_json_bytes,
    load_challenge,
    to_json_bytes,
    validate,
)
from .rng import SplitMix64

_MAX_ATTEMPTS = 16


class GenerationError(RuntimeError):
    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


@dataclass(frozen=True)
class GeneratorConfig:
    level: Level
    n_files: int
    n_param_names: int = 0
    n_param_values: int = 0
    explicit_density: float = 0.25
    implicit_fraction: float = 0.3
    guard_fraction: float = 0.3
    seed: int = 0

    def check(self) -> None:
        if self.n_files < 2:
            raise ValueError("need at least two files")
        if self.level == Level.L3 and (self.n_param_names < 1 or self.n_param_values < 1):
            raise ValueError("L3 requires at least one parameter name and value")
        if self.level != Level.L3 and (self.n_param_names or self.n_param_values):
            raise ValueError(f"L{int(self.level)} takes no parameter space")
        if not 0 < self.explicit_density <= 1:
            raise ValueError("explicit_density must be in (0, 1]")
        if not 0 <= self.implicit_fraction < 1:
            raise ValueError("implicit_fraction must be in [0, 1)")
        if not 0 <= self.guard_fraction < 1:
            raise ValueError("guard_fraction must be in [0, 1)")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")


def _random_kind(cfg: GeneratorConfig, rng: SplitMix64) -> LinkKind:
    if cfg.level != Level.L1 and rng.random() < cfg.implicit_fraction:
        return LinkKind.IMPLICIT
    return LinkKind.EXPLICIT


def _random_pair(cfg: GeneratorConfig, rng: SplitMix64) -> ParamPair:
    return ParamPair(rng.randrange(cfg.n_param_names),
                     rng.randrange(cfg.n_param_values))


def _build(cfg: GeneratorConfig, rng: SplitMix64) -> ChallengeGraph:
    n = cfg.n_files
    flag_file = 1 + rng.randrange(n - 1)

    # Solution path: entry -> intermediates -> flag file.
    others = [f for f in range(1, n) if f != flag_file]
    path = [0] + rng.sample(others, rng.randrange(len(others) + 1)) + [flag_file]

    edges = []  # [src, dst, kind, guard, hint]
    for i in range(len(path) - 1):
        edges.append([path[i], path[i + 1], _random_kind(cfg, rng), None, None])

    if cfg.level == Level.L3:
        # Guards on later path links; each hint rides a strictly earlier
        # link so it is always revealed before the guard is needed.
        for i in range(1, len(edges)):
            if rng.random() >= cfg.guard_fraction:
                continue
            carriers = [j for j in range(i) if edges[j][4] is None]
            if not carriers:
                continue
            guard = _random_pair(cfg, rng)
            edges[i][3] = guard
            edges[rng.choice(carriers)][4] = guard
        if rng.random() < cfg.guard_fraction:
            carriers = [j for j in range(len(edges)) if edges[j][4] is None]
            if carriers:
                flag_guard = _random_pair(cfg, rng)
                edges[rng.choice(carriers)][4] = flag_guard
            else:
                flag_guard = None
        else:
            flag_guard = None
    else:
        flag_guard = None

    # Distractor links.  The entry file is never a target: every agent
    # starts there, so links back to it carry no information.
    taken = {(e[0], e[1]) for e in edges}
    for src in range(n):
        for dst in range(1, n):
            if src == dst or (src, dst) in taken:
                continue
            if rng.random() >= cfg.explicit_density:
                continue
            kind = _random_kind(cfg, rng)
            guard = None
            if cfg.level == Level.L3 and rng.random() < cfg.guard_fraction:
                guard = _random_pair(cfg, rng)
            edges.append([src, dst, kind, guard, None])
            taken.add((src, dst))

    links = tuple(Link(src, dst, kind, guard, hint)
                  for src, dst, kind, guard, hint in edges)
    return ChallengeGraph(
        level=cfg.level,
        n_files=n,
        n_param_names=cfg.n_param_names,
        n_param_values=cfg.n_param_values,
        links=links,
        flag=FlagSpec(flag_file, flag_guard),
        seed=cfg.seed,
    )


def generate(cfg: GeneratorConfig) -> ChallengeGraph:
    """Produce a validated, solvable challenge; pure in the config."""
    cfg.check()
    rng = SplitMix64(cfg.seed)
    for attempt in range(1, _MAX_ATTEMPTS + 1):
        challenge = _build(cfg, rng)
        if not validate(challenge, check_solvability=True):
            return challenge
    raise GenerationError("could not generate a valid solvable challenge",
                          _MAX_ATTEMPTS)


def regenerate_from_file(path) -> ChallengeGraph:
    """Load a challenge file, enforcing schema and structural invariants."""
    challenge = load_challenge(path)
    violations = validate(challenge)
    if violations:
        lines = "; ".join(f"{v.field}: {v.message}" for v in violations)
        raise SchemaError(f"challenge file violates invariants: {lines}")
    # Canonical serialization must round-trip byte-exactly.
    data = to_json_bytes(challenge)
    if to_json_bytes(from_json_bytes(data)) != data:
        raise SchemaError("challenge file does not round-trip canonically")
    return challenge
