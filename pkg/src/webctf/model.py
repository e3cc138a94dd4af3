"""Static challenge structures: files, typed links, guards and the flag.

A challenge is a directed graph over files 0..N-1.  File 0 is the entry
point (the site index) and is always known to the agent.  Links are
explicit (revealed by a plain read) or implicit (revealed only by a deep
read).  At level 3 a link or the flag may be guarded by a single
(parameter name, parameter value) pair, and links may carry a truthful
hint disclosing such a pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Optional


class Level(IntEnum):
    L1 = 1
    L2 = 2
    L3 = 3


class LinkKind(Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


@dataclass(frozen=True, order=True)
class ParamPair:
    """A (parameter name, parameter value) index pair."""

    name: int
    value: int


@dataclass(frozen=True)
class Link:
    src: int
    dst: int
    kind: LinkKind
    guard: Optional[ParamPair] = None
    hint: Optional[ParamPair] = None

    def sort_key(self):
        return (
            self.src,
            self.dst,
            self.kind.value,
            _pair_key(self.guard),
            _pair_key(self.hint),
        )


@dataclass(frozen=True)
class FlagSpec:
    file: int
    guard: Optional[ParamPair] = None


@dataclass(frozen=True)
class ChallengeGraph:
    level: Level
    n_files: int
    n_param_names: int
    n_param_values: int
    links: tuple
    flag: FlagSpec
    seed: int


@dataclass(frozen=True)
class Violation:
    """One broken invariant, pointing at the offending element."""

    field: str
    index: Optional[int]
    message: str

    def sort_key(self):
        return (self.field, -1 if self.index is None else self.index, self.message)


class SchemaError(ValueError):
    """A challenge file does not conform to the JSON schema."""


def _pair_key(pair: Optional[ParamPair]):
    return (-1, -1) if pair is None else (pair.name, pair.value)


def out_links(challenge: ChallengeGraph, file: int, kind: LinkKind,
              supplied: Optional[ParamPair] = None):
    """Destinations (with hints) reachable from `file` over `kind` links.

    A link responds when its guard is absent or equals the supplied
    pair, so the result with a supplied pair is always a superset of the
    parameterless result.  Returned as a tuple sorted by destination.
    """
    found = set()
    for link in challenge.links:
        if link.src != file or link.kind != kind:
            continue
        if link.guard is not None and link.guard != supplied:
            continue
        found.add((link.dst, link.hint))
    return tuple(sorted(found, key=lambda fh: (fh[0], _pair_key(fh[1]))))


def _reachable_from(challenge: ChallengeGraph, start: int) -> set:
    """Files reachable from `start` over any link, ignoring guards."""
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for link in challenge.links:
            if link.src == node and link.dst not in seen:
                seen.add(link.dst)
                frontier.append(link.dst)
    return seen


def _check_pair(pair: ParamPair, what: str, index, challenge, out: list):
    if not (0 <= pair.name < challenge.n_param_names):
        out.append(Violation("links" if index is not None else "flag", index,
                             f"{what} name {pair.name} outside [0, {challenge.n_param_names})"))
    if not (0 <= pair.value < challenge.n_param_values):
        out.append(Violation("links" if index is not None else "flag", index,
                             f"{what} value {pair.value} outside [0, {challenge.n_param_values})"))


def validate(challenge: ChallengeGraph, check_solvability: bool = True) -> list:
    """Every violated structural invariant, deterministically ordered.

    Violations are data, not exceptions: an empty list means the
    challenge is well-formed.  Solvability is checked with the oracle
    solver only when the structure is otherwise sound.
    """
    out = []
    n = challenge.n_files
    level = challenge.level

    if n < 2:
        out.append(Violation("n_files", None, f"n_files must be >= 2, got {n}"))
    if level in (Level.L1, Level.L2):
        if challenge.n_param_names != 0 or challenge.n_param_values != 0:
            out.append(Violation("level", None,
                                 f"L{int(level)} requires M = O = 0"))
    else:
        if challenge.n_param_names < 1 or challenge.n_param_values < 1:
            out.append(Violation("level", None, "L3 requires M >= 1 and O >= 1"))

    seen_links = set()
    for i, link in enumerate(challenge.links):
        if not (0 <= link.src < n):
            out.append(Violation("links", i, f"src {link.src} outside [0, {n})"))
        if not (0 <= link.dst < n):
            out.append(Violation("links", i, f"dst {link.dst} outside [0, {n})"))
        if link.src == link.dst:
            out.append(Violation("links", i, "self-link forbidden"))
        if level == Level.L1 and link.kind == LinkKind.IMPLICIT:
            out.append(Violation("links", i, "L1 forbids Implicit links"))
        if level in (Level.L1, Level.L2):
            if link.guard is not None:
                out.append(Violation("links", i, f"L{int(level)} forbids guards"))
            if link.hint is not None:
                out.append(Violation("links", i, f"L{int(level)} forbids hints"))
        if link.guard is not None:
            _check_pair(link.guard, "guard", i, challenge, out)
        if link.hint is not None:
            _check_pair(link.hint, "hint", i, challenge, out)
        key = (link.src, link.dst, link.kind, link.guard)
        if key in seen_links:
            out.append(Violation("links", i, "duplicate link (same src, dst, kind, guard)"))
        seen_links.add(key)

    flag = challenge.flag
    if not (0 <= flag.file < n):
        out.append(Violation("flag", None, f"flag file {flag.file} outside [0, {n})"))
    elif flag.file == 0:
        out.append(Violation("flag", None, "flag must not be placed in the entry file"))
    if flag.guard is not None:
        if level in (Level.L1, Level.L2):
            out.append(Violation("flag", None, f"L{int(level)} forbids a flag guard"))
        else:
            _check_pair(flag.guard, "guard", None, challenge, out)

    # Hints must be truthful: the advertised pair guards something
    # reachable through the link's destination.
    if not out:
        for i, link in enumerate(challenge.links):
            if link.hint is None:
                continue
            reach = _reachable_from(challenge, link.dst)
            guarded = any(l.src in reach and l.guard == link.hint
                          for l in challenge.links)
            if not guarded and not (flag.file in reach and flag.guard == link.hint):
                out.append(Violation("links", i,
                                     "hint matches no guard reachable through dst"))

    if not out and check_solvability:
        from .agents import oracle_solve  # late import: agents depends on this module

        if oracle_solve(challenge) is None:
            out.append(Violation("flag", None, "unsolvable: no action sequence retrieves the flag"))

    return sorted(out, key=Violation.sort_key)


# ---------------------------------------------------------------------------
# Challenge file format (format_version 1): canonical UTF-8 JSON with
# lexicographically sorted keys and no insignificant whitespace, so that
# equal challenges serialize to identical bytes.
# ---------------------------------------------------------------------------

FORMAT_VERSION = 1


def _pair_to_json(pair: Optional[ParamPair]):
    return None if pair is None else {"name": pair.name, "value": pair.value}


def to_json_obj(challenge: ChallengeGraph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "level": int(challenge.level),
        "n_files": challenge.n_files,
        "n_param_names": challenge.n_param_names,
        "n_param_values": challenge.n_param_values,
        "links": [
            {
                "src": link.src,
                "dst": link.dst,
                "kind": link.kind.value,
                "guard": _pair_to_json(link.guard),
                "hint": _pair_to_json(link.hint),
            }
            for link in sorted(challenge.links, key=Link.sort_key)
        ],
        "flag": {"file": challenge.flag.file, "guard": _pair_to_json(challenge.flag.guard)},
        "seed": challenge.seed,
    }


def to_json_bytes(challenge: ChallengeGraph) -> bytes:
    return json.dumps(to_json_obj(challenge), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def _expect_int(obj, field, minimum=None):
    value = obj.get(field)
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"field '{field}': expected integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(f"field '{field}': must be >= {minimum}, got {value}")
    return value


def _pair_from_json(obj, field):
    if obj is None:
        return None
    if not isinstance(obj, dict) or set(obj) != {"name", "value"}:
        raise SchemaError(f"field '{field}': expected null or {{name, value}}")
    return ParamPair(_expect_int(obj, "name", 0), _expect_int(obj, "value", 0))


def from_json_obj(obj) -> ChallengeGraph:
    if not isinstance(obj, dict):
        raise SchemaError("top level: expected JSON object")
    expected = {"format_version", "level", "n_files", "n_param_names",
                "n_param_values", "links", "flag", "seed"}
    missing = expected - set(obj)
    if missing:
        raise SchemaError(f"missing fields: {sorted(missing)}")
    extra = set(obj) - expected
    if extra:
        raise SchemaError(f"unknown fields: {sorted(extra)}")
    if obj["format_version"] != FORMAT_VERSION:
        raise SchemaError(f"field 'format_version': unsupported value {obj['format_version']!r}")
    level_num = _expect_int(obj, "level")
    try:
        level = Level(level_num)
    except ValueError:
        raise SchemaError(f"field 'level': expected 1, 2 or 3, got {level_num}")
    links_raw = obj["links"]
    if not isinstance(links_raw, list):
        raise SchemaError("field 'links': expected array")
    links = []
    for i, raw in enumerate(links_raw):
        if not isinstance(raw, dict) or set(raw) != {"src", "dst", "kind", "guard", "hint"}:
            raise SchemaError(f"field 'links[{i}]': expected {{src, dst, kind, guard, hint}}")
        kind_raw = raw["kind"]
        try:
            kind = LinkKind(kind_raw)
        except ValueError:
            raise SchemaError(f"field 'links[{i}].kind': expected 'explicit' or 'implicit', got {kind_raw!r}")
        links.append(Link(
            src=_expect_int(raw, "src", 0),
            dst=_expect_int(raw, "dst", 0),
            kind=kind,
            guard=_pair_from_json(raw["guard"], f"links[{i}].guard"),
            hint=_pair_from_json(raw["hint"], f"links[{i}].hint"),
        ))
    flag_raw = obj["flag"]
    if not isinstance(flag_raw, dict) or set(flag_raw) != {"file", "guard"}:
        raise SchemaError("field 'flag': expected {file, guard}")
    flag = FlagSpec(_expect_int(flag_raw, "file", 0),
                    _pair_from_json(flag_raw["guard"], "flag.guard"))
    seed = _expect_int(obj, "seed", 0)
    if seed >= 1 << 64:
        raise SchemaError("field 'seed': must fit in 64 bits")
    return ChallengeGraph(
        level=level,
        n_files=_expect_int(obj, "n_files", 0),
        n_param_names=_expect_int(obj, "n_param_names", 0),
        n_param_values=_expect_int(obj, "n_param_values", 0),
        links=tuple(links),
        flag=flag,
        seed=seed,
    )


def from_json_bytes(data: bytes) -> ChallengeGraph:
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"not valid UTF-8 JSON: {exc}")
    return from_json_obj(obj)


def save_challenge(challenge: ChallengeGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_json_bytes(challenge))


def load_challenge(path) -> ChallengeGraph:
    with open(path, "rb") as fh:
        return from_json_bytes(fh.read())
