"""Network model ingestion and game-arena generation.

The network config declares hosts with services, a directed connectivity
relation, vulnerabilities with pre/post conditions, the attacker's entry
point, and per-player labeling rules.  The arena generator explores every
state (h, c, t, NW) reachable through attacker exploits, defender service
suspensions, and the null action, producing a turn-based deterministic
two-player transition system together with both players' labelings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .automata import Mask, Symbol, symbol
from .errors import ParseError, StateCapExceeded, ValidationError

DEFENDER = 1  # moves at t = 0 states
ATTACKER = 2  # moves at t = 1 states

CREDENTIALS = (0, 1, 2)  # no access, user, root

DEFAULT_STATE_CAP = 500_000

NULL_ACTION = "null"


@dataclass
class Host:
    id: int
    services: frozenset
    noncritical: frozenset
    is_decoy: bool = False


@dataclass
class Vulnerability:
    id: int
    pre_min_credential: int
    pre_service: int
    post_credential: int | None  # None: attacker carries her current credential
    post_stop_service: bool


@dataclass
class LabelRule:
    hosts: frozenset
    min_credential: int
    labels: frozenset


@dataclass
class NetworkModel:
    hosts: list
    connectivity: frozenset  # directed (source, target) host-id pairs
    vulnerabilities: list
    initial_host: int
    initial_credential: int
    initial_turn: int  # DEFENDER or ATTACKER
    labeling: dict  # player -> list[LabelRule]

    def host_map(self) -> dict:
        return {h.id: h for h in self.hosts}

    def validate(self):
        if not self.hosts:
            raise ValidationError("hosts list is empty: no initial host")
        ids = [h.id for h in self.hosts]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate host ids")
        hosts = self.host_map()
        for h in self.hosts:
            if not h.noncritical <= h.services:
                raise ValidationError(
                    f"host {h.id}: noncritical services {sorted(h.noncritical)} "
                    f"not a subset of services {sorted(h.services)}"
                )
        for src, dst in self.connectivity:
            if src not in hosts or dst not in hosts:
                raise ValidationError(
                    f"connectivity pair ({src}, {dst}) names an undeclared host"
                )
        for v in self.vulnerabilities:
            if v.pre_min_credential not in CREDENTIALS:
                raise ValidationError(
                    f"vulnerability {v.id}: pre_min_credential "
                    f"{v.pre_min_credential} not in {CREDENTIALS}"
                )
            if v.post_credential is not None and v.post_credential not in CREDENTIALS:
                raise ValidationError(
                    f"vulnerability {v.id}: post_credential {v.post_credential} "
                    f"not in {CREDENTIALS}"
                )
        if self.initial_host not in hosts:
            raise ValidationError(f"initial host {self.initial_host} undeclared")
        if self.initial_credential not in CREDENTIALS:
            raise ValidationError(
                f"initial credential {self.initial_credential} not in {CREDENTIALS}"
            )
        if self.initial_turn not in (DEFENDER, ATTACKER):
            raise ValidationError(
                f"initial turn {self.initial_turn} is not a player id (1 or 2)"
            )
        for player, rules in self.labeling.items():
            for rule in rules:
                if not rule.hosts <= set(hosts):
                    raise ValidationError(
                        f"labeling rule for player {player} names undeclared hosts "
                        f"{sorted(rule.hosts - set(hosts))}"
                    )
                if rule.min_credential not in CREDENTIALS:
                    raise ValidationError(
                        f"labeling rule for player {player}: min_credential "
                        f"{rule.min_credential} not in {CREDENTIALS}"
                    )
            # Credential thresholds always overlap upward, so two rules
            # sharing a host would both match some (host, credential) pair.
            for i, r1 in enumerate(rules):
                for r2 in rules[i + 1:]:
                    shared = r1.hosts & r2.hosts
                    if shared:
                        raise ValidationError(
                            f"labeling rules for player {player} overlap on "
                            f"hosts {sorted(shared)}"
                        )
        return self


def network_from_dict(data: dict) -> NetworkModel:
    try:
        hosts = [
            Host(
                id=int(h["id"]),
                services=frozenset(h["services"]),
                noncritical=frozenset(h["noncritical"]),
                is_decoy=bool(h.get("is_decoy", False)),
            )
            for h in data["hosts"]
        ]
        connectivity = frozenset((int(a), int(b)) for a, b in data["connectivity"])
        vulns = [
            Vulnerability(
                id=int(v["id"]),
                pre_min_credential=int(v["pre_min_credential"]),
                pre_service=int(v["pre_service"]),
                post_credential=(None if v["post_credential"] is None
                                 else int(v["post_credential"])),
                post_stop_service=bool(v["post_stop_service"]),
            )
            for v in data["vulnerabilities"]
        ]
        labeling = {}
        for key, player in (("p1", DEFENDER), ("p2", ATTACKER)):
            labeling[player] = [
                LabelRule(
                    hosts=frozenset(r["hosts"]),
                    min_credential=int(r["min_credential"]),
                    labels=frozenset(r["labels"]),
                )
                for r in data["labeling"][key]
            ]
        model = NetworkModel(
            hosts=hosts,
            connectivity=connectivity,
            vulnerabilities=vulns,
            initial_host=int(data["initial"]["host"]),
            initial_credential=int(data["initial"]["credential"]),
            initial_turn=int(data["initial"]["turn"]),
            labeling=labeling,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"network config missing or mistyped field: {exc}") from exc
    return model.validate()


def load_network(path) -> NetworkModel:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed network JSON: {exc}") from exc
    return network_from_dict(data)


@dataclass
class Arena:
    """Turn-based deterministic two-player transition system.

    States are dense integer ids; ``names[i]`` is a display form (the
    (h, c, t, NW) tuple for generated arenas, a bare id for hand-built
    fixtures).  ``owner[i]`` is the player moving at state i and
    ``succ[i]`` lists (action, successor) pairs, deterministic per action.
    """

    owner: list
    succ: list
    names: list
    atomic_props: tuple
    initial: int = 0
    actions_p1: frozenset = frozenset()
    actions_p2: frozenset = frozenset()

    def __post_init__(self):
        for i, edges in enumerate(self.succ):
            if not edges:
                raise ValidationError(f"state {i} has no enabled action")
            acts = [a for a, _ in edges]
            if len(set(acts)) != len(acts):
                raise ValidationError(f"state {i} has a nondeterministic action")

    @property
    def n(self) -> int:
        return len(self.owner)

    def edge_count(self) -> int:
        return sum(len(e) for e in self.succ)


@dataclass
class Labeling:
    """Total per-player state labelings (l1 true, l2 as perceived by P2)."""

    l1: list
    l2: list

    def label_of(self, player: int, state: int) -> Symbol:
        return self.l1[state] if player == DEFENDER else self.l2[state]


def _rule_label(rules, host: int, credential: int) -> Symbol:
    for rule in rules:
        if host in rule.hosts and credential >= rule.min_credential:
            return rule.labels
    return symbol(())


def _attacker_action(target: int, vuln: int) -> str:
    return f"exploit({target},{vuln})"


def _defender_action(host: int, service: int) -> str:
    return f"suspend({host},{service})"


def build_arena(model: NetworkModel, cap: int = DEFAULT_STATE_CAP):
    """Generate the arena and both labelings reachable from the initial state.

    Attacker action (h', v) is enabled at (h, c, 1, NW) iff (h, h') is in
    connectivity, c >= pre_min_credential(v) and pre_service(v) is running
    on h'; it moves the attacker to h', updates her credential per the
    post-condition (carrying c when none is granted) and stops the
    pre-service on h' when the post-condition says so.  Defender action
    (h, s) suspends a running noncritical service.  The null action is
    enabled exactly when its owner has no other action and only flips the
    turn.
    """
    model.validate()
    host_ids = sorted(h.id for h in model.hosts)
    host_pos = {h: i for i, h in enumerate(host_ids)}
    hosts = model.host_map()
    out_edges = {}
    for src, dst in model.connectivity:
        out_edges.setdefault(src, []).append(dst)
    vulns = sorted(model.vulnerabilities, key=lambda v: v.id)

    nw0 = tuple(frozenset(hosts[h].services) for h in host_ids)
    t0 = 1 if model.initial_turn == ATTACKER else 0
    init = (model.initial_host, model.initial_credential, t0, nw0)

    index = {init: 0}
    names = [init]
    succ = []
    owner = []
    actions_p1, actions_p2 = {NULL_ACTION}, {NULL_ACTION}

    def intern(state):
        sid = index.get(state)
        if sid is None:
            sid = len(names)
            if sid >= cap:
                raise StateCapExceeded(cap, "arena")
            index[state] = sid
            names.append(state)
        return sid

    frontier = 0
    while frontier < len(names):
        h, c, t, nw = names[frontier]
        edges = []
        if t == 1:  # attacker moves
            owner.append(ATTACKER)
            for target in sorted(out_edges.get(h, [])):
                running = nw[host_pos[target]]
                for v in vulns:
                    if c >= v.pre_min_credential and v.pre_service in running:
                        c2 = c if v.post_credential is None else v.post_credential
                        nw2 = nw
                        if v.post_stop_service:
                            nw2 = list(nw)
                            nw2[host_pos[target]] = running - {v.pre_service}
                            nw2 = tuple(nw2)
                        dst = intern((target, c2, 0, nw2))
                        edges.append((_attacker_action(target, v.id), dst))
                        actions_p2.add(_attacker_action(target, v.id))
            if not edges:
                edges.append((NULL_ACTION, intern((h, c, 0, nw))))
        else:  # defender moves
            owner.append(DEFENDER)
            for hd in host_ids:
                stoppable = nw[host_pos[hd]] & hosts[hd].noncritical
                for s in sorted(stoppable):
                    nw2 = list(nw)
                    nw2[host_pos[hd]] = nw2[host_pos[hd]] - {s}
                    dst = intern((h, c, 1, tuple(nw2)))
                    edges.append((_defender_action(hd, s), dst))
                    actions_p1.add(_defender_action(hd, s))
            if not edges:
                edges.append((NULL_ACTION, intern((h, c, 1, nw))))
        succ.append(edges)
        frontier += 1

    props = set()
    for rules in model.labeling.values():
        for rule in rules:
            props |= rule.labels
    arena = Arena(
        owner=owner,
        succ=succ,
        names=names,
        atomic_props=tuple(sorted(props)),
        initial=0,
        actions_p1=frozenset(actions_p1),
        actions_p2=frozenset(actions_p2),
    )
    l1 = [_rule_label(model.labeling[DEFENDER], s[0], s[1]) for s in names]
    l2 = [_rule_label(model.labeling[ATTACKER], s[0], s[1]) for s in names]
    return arena, Labeling(l1=l1, l2=l2)


def labeling_matches_mask(arena: Arena, labeling: Labeling, mask: Mask) -> list:
    """State ids where l2 differs from mask(l1).

    Diagnostic only: configs that let P2 mistake a decoy for a target pair
    a rule-defined l2 with a decoy-erasing product mask, and then l2 is
    deliberately not mask(l1).  An empty result certifies the labelings
    are pointwise consistent with the given mask.
    """
    return [
        i for i in range(arena.n)
        if labeling.l2[i] != mask.apply(labeling.l1[i])
    ]


def arena_to_dict(arena: Arena, labeling: Labeling) -> dict:
    return {
        "atomic_props": list(arena.atomic_props),
        "initial": arena.initial,
        "states": [
            {
                "id": i,
                "player": arena.owner[i],
                "name": _name_str(arena.names[i]),
                "l1": sorted(labeling.l1[i]),
                "l2": sorted(labeling.l2[i]),
            }
            for i in range(arena.n)
        ],
        "edges": [
            [i, action, dst]
            for i in range(arena.n)
            for action, dst in arena.succ[i]
        ],
    }


def _name_str(name) -> str:
    if isinstance(name, tuple):
        h, c, t, nw = name
        nw_s = ";".join(",".join(map(str, sorted(s))) for s in nw)
        return f"({h},{c},{t},[{nw_s}])"
    return str(name)


def arena_from_dict(data: dict) -> tuple:
    """Rebuild (Arena, Labeling) from an export; hand fixtures use this too."""
    states = sorted(data["states"], key=lambda s: s["id"])
    if [s["id"] for s in states] != list(range(len(states))):
        raise ValidationError("arena state ids must be dense 0..n-1")
    owner = [int(s["player"]) for s in states]
    for o in owner:
        if o not in (DEFENDER, ATTACKER):
            raise ValidationError(f"state player {o} is not a player id")
    succ = [[] for _ in states]
    actions_p1, actions_p2 = set(), set()
    for src, action, dst in data["edges"]:
        if not (0 <= src < len(states) and 0 <= dst < len(states)):
            raise ValidationError(f"edge ({src}, {action}, {dst}) leaves the arena")
        succ[src].append((str(action), int(dst)))
        (actions_p1 if owner[src] == DEFENDER else actions_p2).add(str(action))
    props = tuple(sorted(data["atomic_props"]))
    arena = Arena(
        owner=owner,
        succ=succ,
        names=[s.get("name", str(s["id"])) for s in states],
        atomic_props=props,
        initial=int(data["initial"]),
        actions_p1=frozenset(actions_p1),
        actions_p2=frozenset(actions_p2),
    )
    l1 = [symbol(s["l1"]) for s in states]
    l2 = [symbol(s["l2"]) for s in states]
    for lab in (l1, l2):
        for sig in lab:
            if not sig <= set(props):
                raise ValidationError(
                    f"state label {sorted(sig)} uses undeclared propositions"
                )
    return arena, Labeling(l1=l1, l2=l2)


def load_arena(path) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed arena JSON: {exc}") from exc
    return arena_from_dict(data)


def arena_to_dot(arena: Arena, labeling: Labeling) -> str:
    """Graphviz source; defender states are circles, attacker states boxes."""
    lines = ["digraph arena {", "  rankdir=LR;"]
    for i in range(arena.n):
        shape = "circle" if arena.owner[i] == DEFENDER else "box"
        l1 = ",".join(sorted(labeling.l1[i]))
        l2 = ",".join(sorted(labeling.l2[i]))
        label = f"{i}\\n{_name_str(arena.names[i])}\\nL1={{{l1}}} L2={{{l2}}}"
        extra = " peripheries=2" if i == arena.initial else ""
        lines.append(f'  s{i} [shape={shape} label="{label}"{extra}];')
    for i in range(arena.n):
        for action, dst in arena.succ[i]:
            lines.append(f'  s{i} -> s{dst} [label="{action}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
