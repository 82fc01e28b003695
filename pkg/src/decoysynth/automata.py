"""Alphabets, masks, complete DFAs, and the masked product automaton.

A symbol is a frozenset of atomic-proposition names; the alphabet of a
proposition list is its full powerset.  Masks collapse symbols into
observation-equivalence classes.  DFAs carry a safe or cosafe acceptance
type; the product of two cosafe DFAs under a mask tracks both acceptance
conditions at once while reading true symbols.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import ParseError, ProductDeterminismError, ValidationError

Symbol = frozenset

SAFE = "safe"
COSAFE = "cosafe"


def symbol(props) -> Symbol:
    """Canonical symbol from an iterable of proposition names."""
    return frozenset(str(p) for p in props)


def fmt_symbol(sigma: Symbol) -> str:
    return "{" + ",".join(sorted(sigma)) + "}"


def alphabet(props) -> list[Symbol]:
    """All 2^|props| symbols, in a fixed deterministic order."""
    names = sorted(set(props))
    syms = []
    for r in range(len(names) + 1):
        for combo in itertools.combinations(names, r):
            syms.append(frozenset(combo))
    return syms


class Mask:
    """Total map on an alphabet, identity for unlisted symbols.

    The map must be idempotent on its image so that the preimages of its
    values partition the alphabet into observation-equivalence classes.
    """

    def __init__(self, props, mapping=None):
        self.props = tuple(sorted(set(props)))
        self.sigma = alphabet(self.props)
        self._map = {}
        for src, dst in (mapping or {}).items():
            src, dst = symbol(src), symbol(dst)
            if not src <= set(self.props) or not dst <= set(self.props):
                raise ValidationError(
                    f"mask entry {fmt_symbol(src)} -> {fmt_symbol(dst)} uses "
                    f"propositions outside {self.props}"
                )
            self._map[src] = dst
        for sig in self.sigma:
            out = self.apply(sig)
            if self.apply(out) != out:
                raise ValidationError(
                    f"mask is not idempotent on its image: "
                    f"mask({fmt_symbol(sig)}) = {fmt_symbol(out)} but "
                    f"mask({fmt_symbol(out)}) = {fmt_symbol(self.apply(out))}"
                )

    def apply(self, sigma: Symbol) -> Symbol:
        return self._map.get(sigma, sigma)

    def eq_class(self, sigma: Symbol) -> frozenset:
        """Observation-equivalence class of ``sigma``."""
        out = self.apply(sigma)
        return frozenset(s for s in self.sigma if self.apply(s) == out)

    def classes(self) -> list[frozenset]:
        """All equivalence classes; they partition the alphabet."""
        seen, out = set(), []
        for sig in self.sigma:
            cls = self.eq_class(sig)
            if cls not in seen:
                seen.add(cls)
                out.append(cls)
        return out

    def is_identity(self) -> bool:
        return all(self.apply(s) == s for s in self.sigma)

    @classmethod
    def identity(cls, props) -> "Mask":
        return cls(props, {})

    @classmethod
    def from_dict(cls, data: dict, props=None) -> "Mask":
        entries = {}
        used = set(props or ())
        for item in data.get("map", []):
            src, dst = symbol(item["from"]), symbol(item["to"])
            entries[src] = dst
            used |= src | dst
        return cls(used, entries)

    def to_dict(self) -> dict:
        return {
            "map": [
                {"from": sorted(src), "to": sorted(dst)}
                for src, dst in sorted(self._map.items(), key=lambda kv: sorted(kv[0]))
                if src != dst
            ]
        }


def load_mask(path, props=None) -> Mask:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed mask JSON: {exc}") from exc
    return Mask.from_dict(data, props=props)


@dataclass
class Dfa:
    """Deterministic finite automaton with safe or cosafe acceptance."""

    states: frozenset
    props: tuple
    trans: dict  # (state, Symbol) -> state; total once complete
    initial: int
    accepting: frozenset
    accept_type: str = COSAFE
    name: str = ""
    sigma: list = field(init=False, repr=False)

    def __post_init__(self):
        self.props = tuple(sorted(set(self.props)))
        self.sigma = alphabet(self.props)
        if self.accept_type not in (SAFE, COSAFE):
            raise ValidationError(f"unknown acceptance type {self.accept_type!r}")
        if self.initial not in self.states:
            raise ValidationError(f"initial state {self.initial} not in states")
        if not self.accepting <= self.states:
            raise ValidationError("accepting set is not a subset of states")
        for (q, sig), q2 in self.trans.items():
            if q not in self.states or q2 not in self.states:
                raise ValidationError(f"transition {q} -> {q2} uses unknown state")
            if not sig <= set(self.props):
                raise ValidationError(
                    f"transition symbol {fmt_symbol(sig)} outside alphabet"
                )

    def step(self, q: int, sigma: Symbol) -> int:
        try:
            return self.trans[(q, sigma)]
        except KeyError:
            raise ValidationError(
                f"no transition from state {q} on {fmt_symbol(sigma)}; "
                "symbol outside the alphabet or DFA incomplete"
            ) from None

    def is_complete(self) -> bool:
        return all((q, s) in self.trans for q in self.states for s in self.sigma)

    def run(self, word) -> list:
        """State sequence q0 q1 ... for a finite word, starting at initial."""
        states = [self.initial]
        for sig in word:
            sig = symbol(sig)
            if not sig <= set(self.props):
                raise ValidationError(f"symbol {fmt_symbol(sig)} outside alphabet")
            states.append(self.step(states[-1], sig))
        return states

    def accepts(self, word) -> bool:
        run = self.run(word)
        if self.accept_type == SAFE:
            return all(q in self.accepting for q in run)
        return any(q in self.accepting for q in run)


def make_complete(dfa: Dfa) -> Dfa:
    """Complete a DFA by adding one non-accepting absorbing sink.

    Returns the input unchanged when it is already complete.
    """
    if dfa.is_complete():
        return dfa
    sink = max(dfa.states) + 1
    trans = dict(dfa.trans)
    for q in list(dfa.states) + [sink]:
        for sig in dfa.sigma:
            trans.setdefault((q, sig), sink)
    return Dfa(
        states=dfa.states | {sink},
        props=dfa.props,
        trans=trans,
        initial=dfa.initial,
        accepting=dfa.accepting,
        accept_type=dfa.accept_type,
        name=dfa.name,
    )


def dfa_from_dict(data: dict) -> Dfa:
    props = tuple(data["alphabet_props"])
    trans = {}
    for item in data["transitions"]:
        key = (item["from"], symbol(item["on"]))
        if key in trans and trans[key] != item["to"]:
            raise ValidationError(
                f"nondeterministic transition from {item['from']} on "
                f"{fmt_symbol(key[1])}"
            )
        trans[key] = item["to"]
    return Dfa(
        states=frozenset(data["states"]),
        props=props,
        trans=trans,
        initial=data["initial"],
        accepting=frozenset(data["accepting"]),
        accept_type=data["type"],
        name=data.get("name", ""),
    )


def dfa_to_dict(dfa: Dfa) -> dict:
    return {
        "name": dfa.name,
        "states": sorted(dfa.states),
        "alphabet_props": list(dfa.props),
        "initial": dfa.initial,
        "accepting": sorted(dfa.accepting),
        "type": dfa.accept_type,
        "transitions": [
            {"from": q, "on": sorted(sig), "to": dfa.trans[(q, sig)]}
            for q in sorted(dfa.states)
            for sig in dfa.sigma
            if (q, sig) in dfa.trans
        ],
    }


def load_dfa(path) -> Dfa:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed DFA JSON: {exc}") from exc
    return dfa_from_dict(data)


class ProductAutomaton:
    """Product of the defender's and attacker's cosafe DFAs under a mask.

    States are pairs (q1, q2) over the full Q1 x Q2.  On a true symbol
    sigma, the first coordinate follows delta1(q1, sigma) and the second
    follows delta2(q2, mask(sigma)), i.e. the symbol the second player
    perceives.  Construction verifies that delta2 is constant on every
    observation-equivalence class, which makes the existential definition
    of the second coordinate single-valued.

    Acceptance: ``f1`` = F1 x Q2 (first player's cosafe objective) and
    ``f2`` = Q1 x F2 (second player's cosafe objective).
    """

    def __init__(self, a1: Dfa, a2: Dfa, mask: Mask):
        if a1.props != a2.props:
            raise ValidationError(
                f"DFAs use different alphabets: {a1.props} vs {a2.props}"
            )
        if tuple(mask.props) != a1.props:
            raise ValidationError(
                f"mask alphabet {mask.props} differs from DFA alphabet {a1.props}"
            )
        if a1.accept_type != COSAFE or a2.accept_type != COSAFE:
            raise ValidationError("product requires two cosafe DFAs")
        if not a1.is_complete() or not a2.is_complete():
            raise ValidationError("product requires complete DFAs; use make_complete")

        # Determinism of the second coordinate: delta2 must agree on all
        # observation-equivalent symbols.
        for q2 in sorted(a2.states):
            for cls in mask.classes():
                succs = {a2.trans[(q2, s)] for s in cls}
                if len(succs) > 1:
                    raise ProductDeterminismError(
                        f"observation-equivalent symbols "
                        f"{[fmt_symbol(s) for s in sorted(cls, key=sorted)]} drive "
                        f"state {q2} of {a2.name or 'the second DFA'} to different "
                        f"successors {sorted(succs)}"
                    )

        self.a1, self.a2, self.mask = a1, a2, mask
        self.props = a1.props
        self.sigma = alphabet(self.props)
        self.states = [
            (q1, q2) for q1 in sorted(a1.states) for q2 in sorted(a2.states)
        ]
        self.initial = (a1.initial, a2.initial)
        self.trans = {
            ((q1, q2), sig): (a1.trans[(q1, sig)], a2.trans[(q2, mask.apply(sig))])
            for (q1, q2) in self.states
            for sig in self.sigma
        }
        self.f1 = frozenset((q1, q2) for (q1, q2) in self.states
                            if q1 in a1.accepting)
        self.f2 = frozenset((q1, q2) for (q1, q2) in self.states
                            if q2 in a2.accepting)

    def step(self, q: tuple, sigma: Symbol) -> tuple:
        return self.trans[(q, sigma)]

    def run(self, word) -> list:
        states = [self.initial]
        for sig in word:
            states.append(self.step(states[-1], symbol(sig)))
        return states


def product(a1: Dfa, a2: Dfa, mask: Mask) -> ProductAutomaton:
    """Masked product of two complete cosafe DFAs."""
    return ProductAutomaton(a1, a2, mask)
