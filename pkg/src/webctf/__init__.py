"""Deterministic CTF-style web-hacking challenge simulator.

Seedable generation of link-graph challenges at three abstraction
levels, an episode-based reset/step environment, closed-form
action/state complexity calculators, a brute-force oracle solver and a
tabular Q-learning baseline.
"""

from .actions import (
    Action,
    ObsKind,
    Observation,
    Verb,
    action_count,
    action_from_index,
    action_index,
)
from .agents import (
    EvalStats,
    Policy,
    QLearningParams,
    TrainResult,
    UniformRandomPolicy,
    evaluate,
    oracle_solve,
    train,
)
from .complexity import (
    ComplexityReport,
    count_actions,
    count_actions_l4,
    count_states,
    count_states_l4,
)
from .dynamics import ContractViolation, TransitionOutcome, transition
from .env import EnvHandle, EpisodeConfig, KnowledgeState, joint_state_code, knowledge_index, reset
from .generator import GenerationError, GeneratorConfig, generate, regenerate_from_file
from .model import (
    ChallengeGraph,
    FlagSpec,
    Level,
    Link,
    LinkKind,
    ParamPair,
    SchemaError,
    Violation,
    from_json_bytes,
    load_challenge,
    out_links,
    save_challenge,
    to_json_bytes,
    validate,
)

__version__ = "0.1.0"
