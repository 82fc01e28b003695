"""Generate the four-host attack game and compare deception modes.

Hosts run services; vulnerabilities have pre-conditions (credential,
service running on the target) and post-conditions (credential gained,
service stopped).  The defender suspends noncritical services; the
attacker exploits across the connectivity graph.  Host 2 is a decoy the
attacker perceives as a target.
"""

from pathlib import Path

from decoysynth import (
    arena_to_dot,
    build_arena,
    compare_modes,
    labeling_matches_mask,
    load_dfa,
    load_mask,
    load_network,
    render_table,
    Mask,
    symbol,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

model = load_network(CONFIGS / "small_network.json")
arena, labeling = build_arena(model)
print(f"arena: {arena.n} states, {arena.edge_count()} edges")

# One attack step from the initial state: exploit vulnerability 0 on
# host 1 (requires service 0 running there), gaining root and stopping
# the service; then the defender suspends service 1 on host 2.
s = arena.initial
print("initial:", arena.names[s])
s = arena.succ[s][[a for a, _ in arena.succ[s]].index("exploit(1,0)")][1]
print("after exploit(1,0):", arena.names[s])
s = arena.succ[s][[a for a, _ in arena.succ[s]].index("suspend(2,1)")][1]
print("after suspend(2,1):", arena.names[s])

# The attacker's labeling is the true labeling seen through the
# decoy-mimics-target lens.
perception = Mask(("d", "t"), {symbol({"d"}): symbol({"t"})})
print("\nattacker labeling consistent with d->t perception:",
      not labeling_matches_mask(arena, labeling, perception))

a1 = load_dfa(CONFIGS / "dfa_reach_decoy.json")
a2 = load_dfa(CONFIGS / "dfa_reach_target.json")
mask = load_mask(CONFIGS / "mask_hide_decoy.json")
print("\ncomparison of attacker models:")
print(render_table(compare_modes(arena, labeling, a1, a2, mask)))

dot = arena_to_dot(arena, labeling)
print(f"DOT drawing: {len(dot.splitlines())} lines "
      "(defender states circles, attacker states boxes)")
