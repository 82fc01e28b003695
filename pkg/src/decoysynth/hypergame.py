"""Hypergame transition system and the attacker's perceptual game.

The HTS runs the arena, the masked product automaton, and the attacker's
DFA in lockstep: a state (s, q, q2) tracks the arena state, the true
progress of both objectives through the product, and the attacker's own
perceived progress through her DFA read on her labeling.  The perceptual
game drops the product coordinate and is the game the attacker believes
she is playing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .automata import Dfa, ProductAutomaton
from .errors import ParseError, StateCapExceeded, ValidationError
from .network import DEFAULT_STATE_CAP, DEFENDER, Arena, Labeling


@dataclass
class Hts:
    """Reachable product of arena, product automaton, and attacker DFA.

    ``names[i]`` is the (arena-state, (q1, q2), q2) tuple behind dense id
    i.  The three objective sets follow the component definitions:
    ``f1_cosafe`` marks true satisfaction of the defender's hidden lure
    objective, ``f1_safe`` collects the states where the attacker's
    objective is still truly unmet, and ``f2`` the states the attacker
    perceives as winning.
    """

    owner: list
    succ: list
    names: list
    initial: int
    f1_cosafe: set
    f1_safe: set
    f2: set

    @property
    def n(self) -> int:
        return len(self.owner)

    def edge_count(self) -> int:
        return sum(len(e) for e in self.succ)

    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}


@dataclass
class PerceptualGame:
    """The game the attacker believes she is playing, over (s, q2)."""

    owner: list
    succ: list
    names: list
    initial: int
    target: set

    @property
    def n(self) -> int:
        return len(self.owner)

    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}


def build_hts(arena: Arena, labeling: Labeling, prod: ProductAutomaton,
              a2: Dfa, cap: int = DEFAULT_STATE_CAP) -> Hts:
    """Breadth-first construction from the initial state; unreachable
    combinations are never materialized."""
    if not a2.is_complete():
        raise ValidationError("attacker DFA must be complete; use make_complete")

    def advance(q, q2, sid):
        try:
            q_next = prod.step(q, labeling.l1[sid])
        except KeyError:
            raise ValidationError(
                f"product transition undefined from {q} on "
                f"{sorted(labeling.l1[sid])} at arena state {sid}"
            ) from None
        return q_next, a2.step(q2, labeling.l2[sid])

    s0 = arena.initial
    q0, q20 = advance(prod.initial, a2.initial, s0)
    v0 = (s0, q0, q20)
    index = {v0: 0}
    names = [v0]
    succ = []
    owner = []

    frontier = 0
    while frontier < len(names):
        sid, q, q2 = names[frontier]
        owner.append(arena.owner[sid])
        edges = []
        for action, s_next in arena.succ[sid]:
            q_next, q2_next = advance(q, q2, s_next)
            v = (s_next, q_next, q2_next)
            vid = index.get(v)
            if vid is None:
                vid = len(names)
                if vid >= cap:
                    raise StateCapExceeded(cap, "hypergame transition system")
                index[v] = vid
                names.append(v)
            edges.append((action, vid))
        succ.append(edges)
        frontier += 1

    f1_cosafe = {i for i, (_, q, _) in enumerate(names) if q in prod.f1}
    f1_safe = {i for i, (_, q, _) in enumerate(names) if q not in prod.f2}
    f2 = {i for i, (_, _, q2) in enumerate(names) if q2 in a2.accepting}
    return Hts(owner=owner, succ=succ, names=names, initial=0,
               f1_cosafe=f1_cosafe, f1_safe=f1_safe, f2=f2)


def build_perceptual_game(arena: Arena, labeling: Labeling, a2: Dfa,
                          cap: int = DEFAULT_STATE_CAP) -> PerceptualGame:
    """Reachable (s, q2) product driven by the attacker's labeling."""
    if not a2.is_complete():
        raise ValidationError("attacker DFA must be complete; use make_complete")

    s0 = arena.initial
    z0 = (s0, a2.step(a2.initial, labeling.l2[s0]))
    index = {z0: 0}
    names = [z0]
    succ = []
    owner = []

    frontier = 0
    while frontier < len(names):
        sid, q2 = names[frontier]
        owner.append(arena.owner[sid])
        edges = []
        for action, s_next in arena.succ[sid]:
            z = (s_next, a2.step(q2, labeling.l2[s_next]))
            zid = index.get(z)
            if zid is None:
                zid = len(names)
                if zid >= cap:
                    raise StateCapExceeded(cap, "perceptual game")
                index[z] = zid
                names.append(z)
            edges.append((action, zid))
        succ.append(edges)
        frontier += 1

    target = {i for i, (_, q2) in enumerate(names) if q2 in a2.accepting}
    return PerceptualGame(owner=owner, succ=succ, names=names,
                          initial=0, target=target)


def _name_str(name) -> str:
    sid, q, q2 = name
    return f"({sid},({q[0]},{q[1]}),{q2})"


def hts_to_dict(hts: Hts) -> dict:
    return {
        "initial": hts.initial,
        "states": [
            {
                "id": i,
                "player": hts.owner[i],
                "name": _name_str(hts.names[i]),
                "arena_state": hts.names[i][0],
                "q": list(hts.names[i][1]),
                "q2": hts.names[i][2],
                "f1_cosafe": i in hts.f1_cosafe,
                "f1_safe": i in hts.f1_safe,
                "f2": i in hts.f2,
            }
            for i in range(hts.n)
        ],
        "edges": [
            [i, action, dst]
            for i in range(hts.n)
            for action, dst in hts.succ[i]
        ],
    }


def hts_from_dict(data: dict) -> Hts:
    states = sorted(data["states"], key=lambda s: s["id"])
    if [s["id"] for s in states] != list(range(len(states))):
        raise ValidationError("hts state ids must be dense 0..n-1")
    succ = [[] for _ in states]
    for src, action, dst in data["edges"]:
        if not (0 <= src < len(states) and 0 <= dst < len(states)):
            raise ValidationError(f"edge ({src}, {action}, {dst}) leaves the hts")
        succ[src].append((str(action), int(dst)))
    return Hts(
        owner=[int(s["player"]) for s in states],
        succ=succ,
        names=[(s["arena_state"], tuple(s["q"]), s["q2"]) for s in states],
        initial=int(data["initial"]),
        f1_cosafe={s["id"] for s in states if s["f1_cosafe"]},
        f1_safe={s["id"] for s in states if s["f1_safe"]},
        f2={s["id"] for s in states if s["f2"]},
    )


def load_hts(path) -> Hts:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed HTS JSON: {exc}") from exc
    return hts_from_dict(data)


def hts_to_dot(hts: Hts, partition: dict | None = None) -> str:
    """Graphviz source for the HTS.

    Without a partition, states in ``f1_safe`` are green and states in
    ``f1_cosafe`` blue.  ``partition`` maps state id -> color name and
    overrides the default (used to draw winning partitions).
    """
    lines = ["digraph hts {", "  rankdir=LR;"]
    for i in range(hts.n):
        shape = "circle" if hts.owner[i] == DEFENDER else "box"
        if partition is not None:
            color = partition.get(i, "white")
        elif i in hts.f1_cosafe:
            color = "lightblue"
        elif i in hts.f1_safe:
            color = "palegreen"
        else:
            color = "white"
        label = f"v{i}\\n{_name_str(hts.names[i])}"
        extra = " peripheries=2" if i == hts.initial else ""
        lines.append(
            f'  v{i} [shape={shape} style=filled fillcolor="{color}" '
            f'label="{label}"{extra}];'
        )
    for i in range(hts.n):
        for action, dst in hts.succ[i]:
            lines.append(f'  v{i} -> v{dst} [label="{action}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
