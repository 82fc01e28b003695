"""Walk through the masked product of the two objective automata.

The defender secretly wants the attacker to reach a decoy (proposition d);
the attacker wants to reach a target (proposition t) but cannot tell decoys
apart from ordinary hosts.  The mask collapses the symbols the attacker
cannot distinguish, and the product automaton tracks both objectives at
once while reading the true labels.
"""

from pathlib import Path

from decoysynth import fmt_symbol, load_dfa, load_mask, product, symbol

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

a1 = load_dfa(CONFIGS / "dfa_reach_decoy.json")
a2 = load_dfa(CONFIGS / "dfa_reach_target.json")
mask = load_mask(CONFIGS / "mask_hide_decoy.json")

print("alphabet:", " ".join(fmt_symbol(s) for s in a1.sigma))
print("\nobservation-equivalence classes (what the attacker can tell apart):")
for cls in mask.classes():
    members = " ".join(fmt_symbol(s) for s in sorted(cls, key=sorted))
    rep = fmt_symbol(mask.apply(next(iter(cls))))
    print(f"  {{ {members} }}  ->  perceived as {rep}")

prod = product(a1, a2, mask)
print("\nproduct transitions (q1 tracks the decoy lure, q2 the target):")
for (q1, q2) in prod.states:
    row = ", ".join(
        f"{fmt_symbol(sig)} -> {prod.trans[((q1, q2), sig)]}"
        for sig in prod.sigma
    )
    print(f"  ({q1},{q2}): {row}")

print("\nlure accepted in:", sorted(prod.f1))
print("target accepted in:", sorted(prod.f2))

# The payoff of the construction: reading the true word {d} looks to the
# attacker like {} (no progress), while the defender's lure coordinate
# advances.  Reading {d,t} looks like {t}.
for word in ([symbol({"d"})], [symbol(()), symbol({"d", "t"})]):
    run = prod.run(word)
    pretty = " ".join(fmt_symbol(s) for s in word)
    print(f"\nword {pretty!s}: run {run}")
    print("  defender's lure satisfied:", any(q in prod.f1 for q in run))
    print("  attacker believes target reached:", any(q in prod.f2 for q in run))
