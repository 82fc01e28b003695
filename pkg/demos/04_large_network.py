"""Seven-host network at scale: timings and the deception payoff.

The attacker must visit two targets (A on host 2, B on host 6).  Host 4
is a decoy she perceives as a second A; it is also the only gateway to
host 6 and every one of its services can be suspended.  Without deception
the defender can deny B but never lures anyone; with deception the greedy
attacker walks into host 4 on her way to B.
"""

import time
from pathlib import Path

from decoysynth import (
    build_arena,
    build_hts,
    build_perceptual_game,
    compare_modes,
    load_dfa,
    load_mask,
    load_network,
    product,
    render_table,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

model = load_network(CONFIGS / "large_network.json")
a1 = load_dfa(CONFIGS / "dfa_reach_decoy_ab.json")
a2 = load_dfa(CONFIGS / "dfa_reach_two_targets.json")
mask = load_mask(CONFIGS / "mask_hide_decoy_ab.json")

t0 = time.perf_counter()
arena, labeling = build_arena(model)
t1 = time.perf_counter()
print(f"arena: {arena.n} states, {arena.edge_count()} edges [{t1 - t0:.1f} s]")

prod = product(a1, a2, mask)
hts = build_hts(arena, labeling, prod, a2)
perceptual = build_perceptual_game(arena, labeling, a2)
t2 = time.perf_counter()
print(f"hypergame: {hts.n} states, {hts.edge_count()} edges; "
      f"perceptual: {perceptual.n} states [{t2 - t1:.1f} s]")

reports = compare_modes(arena, labeling, a1, a2, mask)
t3 = time.perf_counter()
print(f"three synthesis rows solved [{t3 - t2:.1f} s]\n")
print(render_table(reports))

base, greedy = reports[0], reports[1]
gained = len(greedy.win1_cosafe) - len(base.win1_cosafe)
print(f"deception grows the lure region by {gained} states and flips the "
      f"initial verdict from "
      f"{'win' if base.initial_in_cosafe else 'lose'} to "
      f"{'win' if greedy.initial_in_cosafe else 'lose'}.")
