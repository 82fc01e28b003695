"""The five-state toy game, end to end.

State 3 is a real target, state 4 a high-fidelity decoy: the defender
labels it d, the attacker sees t.  We build the hypergame transition
system, compute the attacker's perceived winning strategies, and then
synthesize the defender's deceptive strategies against a greedy and
against a randomized attacker, on the original arena and on a revised
arena with one extra attacker edge.
"""

from pathlib import Path

from decoysynth import (
    Game,
    asw_approx,
    build_hts,
    build_perceptual_game,
    load_arena,
    load_dfa,
    load_mask,
    product,
    solve_reach,
    synthesize_deceptive,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

a1 = load_dfa(CONFIGS / "dfa_reach_decoy.json")
a2 = load_dfa(CONFIGS / "dfa_reach_target.json")
mask = load_mask(CONFIGS / "mask_hide_decoy.json")
prod = product(a1, a2, mask)


def walkthrough(arena_path, title):
    print(f"=== {title} ===")
    arena, labeling = load_arena(arena_path)
    hts = build_hts(arena, labeling, prod, a2)
    print("hypergame states (arena, (lure, true-target), perceived-target):")
    for i, name in enumerate(hts.names):
        tags = []
        if i in hts.f1_safe:
            tags.append("safe-for-defender")
        if i in hts.f1_cosafe:
            tags.append("lure")
        if i in hts.f2:
            tags.append("attacker-perceives-win")
        print(f"  v{i} = {name}  {' '.join(tags)}")

    perceptual = build_perceptual_game(arena, labeling, a2)
    game = Game.from_perceptual(perceptual)
    res = solve_reach(game, perceptual.target, reacher=2)
    print("attacker's perceived winning levels:")
    for k, level in enumerate(res.levels):
        print(f"  level {k}: {sorted(perceptual.names[i] for i in level)}")
    print("greedy strategy:",
          {perceptual.names[s]: sorted(a) for s, a in res.strategy.items()})
    print("safe-action strategy:",
          {perceptual.names[s]: sorted(a)
           for s, a in asw_approx(game, res.win).items()})

    for mode in ("greedy", "randomized"):
        rep = synthesize_deceptive(hts, perceptual, mode)
        verdict = "wins" if rep.initial_in_safe else "loses"
        lure = "wins" if rep.initial_in_cosafe else "loses"
        print(f"against the {mode} attacker: defender {verdict} safety "
              f"(region {sorted(rep.win1_safe)}), {lure} the lure "
              f"(region {sorted(rep.win1_cosafe)})")
    print()


walkthrough(CONFIGS / "toy_arena.json", "original arena")

# The revised arena adds the attacker edge 2 -> 1.  A greedy attacker still
# rushes into the decoy, so the defender steers play through state 2 and
# wins both objectives.  A randomized attacker may wander back and forth,
# and from every live state she can eventually slip to the real target:
# only the absorbing decoy state itself stays safe.
walkthrough(CONFIGS / "toy_arena_revised.json", "revised arena (extra edge)")
