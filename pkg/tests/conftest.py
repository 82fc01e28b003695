"""Shared fixtures: the toy game, shipped configs, and random generators."""

import random
from pathlib import Path

import pytest

from decoysynth import (
    Game,
    Labeling,
    build_arena,
    build_hts,
    build_perceptual_game,
    load_arena,
    load_dfa,
    load_mask,
    load_network,
    product,
    symbol,
)
from decoysynth.network import ATTACKER, DEFENDER, Arena

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="session")
def dfa_reach_decoy():
    return load_dfa(CONFIGS / "dfa_reach_decoy.json")


@pytest.fixture(scope="session")
def dfa_reach_target():
    return load_dfa(CONFIGS / "dfa_reach_target.json")


@pytest.fixture(scope="session")
def hide_decoy_mask():
    return load_mask(CONFIGS / "mask_hide_decoy.json")


@pytest.fixture(scope="session")
def toy_product(dfa_reach_decoy, dfa_reach_target, hide_decoy_mask):
    return product(dfa_reach_decoy, dfa_reach_target, hide_decoy_mask)


@pytest.fixture(scope="session")
def toy_arena():
    return load_arena(CONFIGS / "toy_arena.json")


@pytest.fixture(scope="session")
def toy_arena_revised():
    return load_arena(CONFIGS / "toy_arena_revised.json")


@pytest.fixture(scope="session")
def toy_hts(toy_arena, toy_product, dfa_reach_target):
    arena, labeling = toy_arena
    return build_hts(arena, labeling, toy_product, dfa_reach_target)


@pytest.fixture(scope="session")
def toy_perceptual(toy_arena, dfa_reach_target):
    arena, labeling = toy_arena
    return build_perceptual_game(arena, labeling, dfa_reach_target)


@pytest.fixture(scope="session")
def revised_hts(toy_arena_revised, toy_product, dfa_reach_target):
    arena, labeling = toy_arena_revised
    return build_hts(arena, labeling, toy_product, dfa_reach_target)


@pytest.fixture(scope="session")
def revised_perceptual(toy_arena_revised, dfa_reach_target):
    arena, labeling = toy_arena_revised
    return build_perceptual_game(arena, labeling, dfa_reach_target)


@pytest.fixture(scope="session")
def small_network_model():
    return load_network(CONFIGS / "small_network.json")


@pytest.fixture(scope="session")
def small_network(small_network_model):
    return build_arena(small_network_model)


def random_game(rng: random.Random, max_states: int = 50,
                max_actions: int = 4) -> Game:
    """Random two-player game; every state keeps at least one action."""
    n = rng.randrange(2, max_states + 1)
    owner = [rng.choice((DEFENDER, ATTACKER)) for _ in range(n)]
    succ = []
    for _ in range(n):
        k = rng.randrange(1, max_actions + 1)
        succ.append([(f"x{j}", rng.randrange(n)) for j in range(k)])
    return Game(owner=owner, succ=succ)


def random_decoy_arena(rng: random.Random, max_states: int = 14):
    """Random hand-built arena over {d, t} with decoy-as-target perception.

    True labels are drawn per state; the attacker's labeling shows t
    wherever the truth is t or d, so decoy states look like targets.
    """
    n = rng.randrange(4, max_states + 1)
    owner = [rng.choice((DEFENDER, ATTACKER)) for _ in range(n)]
    succ = []
    for s in range(n):
        k = rng.randrange(1, 4)
        prefix = "a" if owner[s] == DEFENDER else "b"
        succ.append([(f"{prefix}{j}", rng.randrange(n)) for j in range(k)])
    l1 = []
    for s in range(n):
        roll = rng.random()
        if roll < 0.15:
            l1.append(symbol({"t"}))
        elif roll < 0.3:
            l1.append(symbol({"d"}))
        else:
            l1.append(symbol(()))
    l2 = [symbol({"t"}) if sig else symbol(()) for sig in l1]
    arena = Arena(owner=owner, succ=succ, names=list(range(n)),
                  atomic_props=("d", "t"), initial=0)
    return arena, Labeling(l1=l1, l2=l2)


def play_episode(game: Game, start: int, steps: int, rng: random.Random,
                 policy_by_player: dict) -> list:
    """Simulate one play; each player's policy maps state -> action weights."""
    path = [start]
    state = start
    for _ in range(steps):
        policy = policy_by_player[game.owner[state]]
        choice = policy(state)
        if choice is None:
            break
        state = game.step(state, choice)
        path.append(state)
    return path


def uniform_over(strategy: dict, game: Game, rng: random.Random):
    """Sample uniformly from a set-valued strategy, falling back to all
    enabled actions where the strategy is silent."""

    def pick(state):
        actions = sorted(strategy.get(state, frozenset()) or game.enabled(state))
        if not actions:
            return None
        return rng.choice(actions)

    return pick
