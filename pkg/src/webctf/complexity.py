"""Closed-form action and state counting for abstraction levels 1-4.

Levels 1-3 count 2N, 3N and 3(N + NMO) actions respectively, with
2^(actions - 1) knowledge states.  Level 4 is a calculator only (its
dynamics are not simulated): with full-length parameter lists the
action count is 2N * sum_i C(M, i) * O^i, which collapses to the
closed form 2N(1 + O)^M; the state count convention there is
2^actions.  All counts are exact arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

from .model import Level


@dataclass(frozen=True)
class ComplexityReport:
    level: int
    n_files: int
    n_param_names: int
    n_param_values: int
    max_params: Optional[int]  # level 4 only
    actions: int
    states: int

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "n_files": self.n_files,
            "n_param_names": self.n_param_names,
            "n_param_values": self.n_param_values,
            "max_params": self.max_params,
            "actions": self.actions,
            "states": str(self.states),  # may exceed JSON number precision
        }


def count_actions(level: Level, n: int, m: int = 0, o: int = 0) -> int:
    if n < 1:
        raise ValueError("need at least one file")
    if level == Level.L1:
        return 2 * n
    if level == Level.L2:
        return 3 * n
    if m < 1 or o < 1:
        raise ValueError("L3 requires M >= 1 and O >= 1")
    return 3 * (n + n * m * o)


def count_states(level: Level, n: int, m: int = 0, o: int = 0) -> int:
    return 1 << (count_actions(level, n, m, o) - 1)


def count_actions_l4(n: int, m: int, o: int, max_params: Optional[int] = None) -> int:
    """Level-4 action count for parameter lists of length up to max_params.

    Only list bounds 0, 1 and M are defined; anything in between is
    rejected rather than guessed.  The full-length case is computed both
    as the explicit subset sum and as 2N(1+O)^M and cross-checked.
    """
    if n < 0 or m < 0 or o < 0:
        raise ValueError("counts must be non-negative")
    if max_params is None:
        max_params = m
    if max_params == 0:
        return 2 * n
    if max_params == 1:
        return 2 * n + 2 * n * m * o
    if max_params != m:
        raise ValueError(f"parameter list bound {max_params} is undefined; use 0, 1 or M={m}")
    summation = 2 * n * sum(comb(m, i) * o ** i for i in range(m + 1))
    closed = 2 * n * (1 + o) ** m
    assert summation == closed
    return summation


def count_states_l4(n: int, m: int, o: int, max_params: Optional[int] = None) -> int:
    return 1 << count_actions_l4(n, m, o, max_params)


def report(level: int, n: int, m: int = 0, o: int = 0,
           max_params: Optional[int] = None) -> ComplexityReport:
    if level == 4:
        actions = count_actions_l4(n, m, o, max_params)
        states = count_states_l4(n, m, o, max_params)
        resolved = m if max_params is None else max_params
        return ComplexityReport(4, n, m, o, resolved, actions, states)
    lv = Level(level)
    return ComplexityReport(level, n, m, o, None,
                            count_actions(lv, n, m, o),
                            count_states(lv, n, m, o))


def format_table(rep: ComplexityReport) -> str:
    """Aligned text table in the layout of the published level tables."""
    if rep.level == 3:
        header = ["#files", "#pars", "#pvals", "#actions", "#states"]
        row = [rep.n_files, rep.n_param_names, rep.n_param_values,
               rep.actions, rep.states]
    elif rep.level == 4:
        header = ["#files", "#pars", "#pvals", "#maxlist", "#actions", "#states"]
        row = [rep.n_files, rep.n_param_names, rep.n_param_values,
               rep.max_params, rep.actions, rep.states]
    else:
        header = ["Number of files", "Number of actions", "Number of states"]
        row = [rep.n_files, rep.actions, rep.states]
    cells = [str(c) for c in row]
    widths = [max(len(h), len(c)) for h, c in zip(header, cells)]
    line1 = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    line2 = "  ".join(c.ljust(w) for c, w in zip(cells, widths))
    return line1 + "\n" + line2
