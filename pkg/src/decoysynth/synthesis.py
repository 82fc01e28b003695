"""Induced subgames and the two-step deceptive synthesis procedure.

Step 1 solves the safety game on the hypergame transition system with the
attacker restricted to her perceived-rational strategy; step 2 solves, in
the region step 1 secured and with the defender further restricted to his
safe strategy, the reachability game toward the hidden lure objective.
``compare_modes`` runs the pipeline against the greedy attacker, the
randomized (set-based) attacker, and a no-misperception baseline.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .automata import Dfa, Mask, product
from .errors import ValidationError
from .hypergame import Hts, PerceptualGame, build_hts, build_perceptual_game
from .network import ATTACKER, DEFENDER, Arena, Labeling
from .solvers import Game, asw_approx, solve_reach, solve_safe

logger = logging.getLogger(__name__)

MODE_NONE = "none"
MODE_GREEDY = "greedy"
MODE_RANDOMIZED = "randomized"
MODES = (MODE_NONE, MODE_GREEDY, MODE_RANDOMIZED)

OUTSIDE_WIN2_ALL = "all-actions"
OUTSIDE_WIN2_NONE = "no-actions"


def induce(game: Game, player: int, strategy: dict) -> Game:
    """Restrict ``player``'s actions to those a set-valued strategy allows.

    States absent from the strategy keep all their actions; the other
    player is never restricted.  An explicit empty entry strips every
    action (a dead state, meaningful only inside induced subgames).
    """
    succ = []
    for s in range(game.n):
        edges = game.succ[s]
        if game.owner[s] == player and s in strategy:
            allowed = set(strategy[s])
            enabled = {a for a, _ in edges}
            bogus = allowed - enabled
            if bogus:
                raise ValidationError(
                    f"strategy allows actions {sorted(bogus)} not enabled "
                    f"at state {s}"
                )
            edges = [(a, t) for a, t in edges if a in allowed]
        succ.append(list(edges))
    return Game(owner=list(game.owner), succ=succ, names=list(game.names),
                initial=game.initial)


def restrict(game: Game, keep) -> tuple:
    """Subgame on a closed state subset; returns it with the old-id list."""
    keep_sorted = sorted(set(keep))
    new_of_old = {old: new for new, old in enumerate(keep_sorted)}
    succ = []
    for old in keep_sorted:
        edges = [(a, new_of_old[t]) for a, t in game.succ[old] if t in new_of_old]
        succ.append(edges)
    initial = new_of_old.get(game.initial, 0)
    sub = Game(owner=[game.owner[o] for o in keep_sorted], succ=succ,
               names=[game.names[o] for o in keep_sorted], initial=initial)
    return sub, keep_sorted


@dataclass
class DeceptionReport:
    """Outcome of the two-step synthesis for one attacker model."""

    mode: str
    hts_states: int
    win1_safe: frozenset
    pi1_safe: dict
    win1_cosafe: frozenset
    pi1_cosafe: dict
    initial_in_safe: bool
    initial_in_cosafe: bool
    win2_size: int
    perceptual_states: int
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "hts_states": self.hts_states,
            "win1_safe": sorted(self.win1_safe),
            "win1_safe_size": len(self.win1_safe),
            "pi1_safe": [
                {"state": s, "actions": sorted(self.pi1_safe[s])}
                for s in sorted(self.pi1_safe)
            ],
            "win1_cosafe": sorted(self.win1_cosafe),
            "win1_cosafe_size": len(self.win1_cosafe),
            "pi1_cosafe": [
                {"state": s, "actions": sorted(self.pi1_cosafe[s])}
                for s in sorted(self.pi1_cosafe)
            ],
            "initial_in_safe": self.initial_in_safe,
            "initial_in_cosafe": self.initial_in_cosafe,
            "win2_size": self.win2_size,
            "perceptual_states": self.perceptual_states,
            "notes": dict(sorted(self.notes.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DeceptionReport":
        return cls(
            mode=data["mode"],
            hts_states=data["hts_states"],
            win1_safe=frozenset(data["win1_safe"]),
            pi1_safe={e["state"]: frozenset(e["actions"])
                      for e in data["pi1_safe"]},
            win1_cosafe=frozenset(data["win1_cosafe"]),
            pi1_cosafe={e["state"]: frozenset(e["actions"])
                        for e in data["pi1_cosafe"]},
            initial_in_safe=data["initial_in_safe"],
            initial_in_cosafe=data["initial_in_cosafe"],
            win2_size=data["win2_size"],
            perceptual_states=data["perceptual_states"],
            notes=dict(data.get("notes", {})),
        )


def attacker_strategy(perceptual: PerceptualGame, mode: str) -> tuple:
    """The attacker's perceived-rational strategy over perceptual states.

    Returns (strategy over perceptual ids, win2 ids, the solve result).
    Greedy keeps only level-decreasing actions; randomized keeps every
    action that stays inside the perceived winning region.
    """
    pgame = Game.from_perceptual(perceptual)
    result = solve_reach(pgame, perceptual.target, reacher=ATTACKER)
    if mode == MODE_GREEDY:
        strategy = dict(result.strategy)
    elif mode in (MODE_RANDOMIZED, MODE_NONE):
        strategy = asw_approx(pgame, result.win, player=ATTACKER)
    else:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {MODES}")
    return strategy, result.win, result


def lift_attacker_strategy(hts: Hts, perceptual: PerceptualGame,
                           strategy: dict, win2,
                           outside_win2: str = OUTSIDE_WIN2_ALL) -> dict:
    """Lift a perceptual-game strategy to HTS attacker states by projection.

    An HTS attacker state projects to (s, q2).  Projections outside the
    strategy's domain have left the attacker's perceived winning region;
    ``outside_win2`` chooses whether such states keep every action or
    none.
    """
    if outside_win2 not in (OUTSIDE_WIN2_ALL, OUTSIDE_WIN2_NONE):
        raise ValidationError(f"unknown outside-win2 policy {outside_win2!r}")
    win2 = set(win2)
    pindex = perceptual.index()
    lifted = {}
    dead = 0
    for v in range(hts.n):
        if hts.owner[v] != ATTACKER:
            continue
        sid, _q, q2 = hts.names[v]
        zid = pindex.get((sid, q2))
        if zid is not None and zid in strategy:
            lifted[v] = frozenset(strategy[zid])
        elif zid in win2:
            # In the perceived winning region but past the strategy's
            # domain (the perceived objective is already met): the
            # attacker is unconstrained there.
            continue
        elif outside_win2 == OUTSIDE_WIN2_NONE:
            lifted[v] = frozenset()
            dead += 1
    if dead:
        logger.info(
            "lifting left %d attacker states with no actions "
            "(outside the perceived winning region)", dead,
        )
    return lifted


def synthesize_deceptive(hts: Hts, perceptual: PerceptualGame, mode: str,
                         outside_win2: str = OUTSIDE_WIN2_ALL) -> DeceptionReport:
    """Two-step deceptive synthesis against one attacker model.

    Step 1: safety for the defender on the attacker-induced HTS with the
    safe set ``f1_safe``.  Step 2: reachability toward
    ``f1_cosafe`` inside the step-1 region, with the defender restricted
    to his safe strategy.  The step-2 region is contained in the step-1
    region by construction.
    """
    pi2, win2, _ = attacker_strategy(perceptual, mode)
    hgame = Game.from_hts(hts)
    lifted = lift_attacker_strategy(hts, perceptual, pi2, win2, outside_win2)
    induced = induce(hgame, ATTACKER, lifted)

    safe = solve_safe(induced, hts.f1_safe, stayer=DEFENDER)
    win1_safe = set(safe.win)

    step2_base = induce(induced, DEFENDER, safe.strategy)
    sub, old_ids = restrict(step2_base, win1_safe)
    target_new = [i for i, old in enumerate(old_ids) if old in hts.f1_cosafe]
    reach = solve_reach(sub, target_new, reacher=DEFENDER)
    win1_cosafe = {old_ids[i] for i in reach.win}
    pi1_cosafe = {old_ids[s]: acts for s, acts in reach.strategy.items()}

    return DeceptionReport(
        mode=mode,
        hts_states=hts.n,
        win1_safe=frozenset(win1_safe),
        pi1_safe=dict(safe.strategy),
        win1_cosafe=frozenset(win1_cosafe),
        pi1_cosafe=pi1_cosafe,
        initial_in_safe=hts.initial in win1_safe,
        initial_in_cosafe=hts.initial in win1_cosafe,
        win2_size=len(win2),
        perceptual_states=perceptual.n,
    )


def truthful_rebuild(arena: Arena, labeling: Labeling, a1: Dfa, a2: Dfa):
    """Pipeline inputs for the no-misperception baseline: the attacker
    reads true labels and the product mask is the identity."""
    true_labeling = Labeling(l1=list(labeling.l1), l2=list(labeling.l1))
    identity = Mask.identity(a1.props)
    prod = product(a1, a2, identity)
    hts = build_hts(arena, true_labeling, prod, a2)
    perceptual = build_perceptual_game(arena, true_labeling, a2)
    return hts, perceptual


def compare_modes(arena: Arena, labeling: Labeling, a1: Dfa, a2: Dfa,
                  mask: Mask, outside_win2: str = OUTSIDE_WIN2_ALL) -> list:
    """Three-row comparison: no misperception, greedy, randomized.

    The baseline rebuilds the pipeline with the attacker's labeling set to
    the true one and an identity mask, then plays the set-based safe
    strategy of her (now truthful) winning region; the other rows share
    the deceptive pipeline.  Baseline sizes live in the truthful state
    spaces; the report notes carry both those native sizes and the
    deceptive pipeline's, so rows can be compared despite the different
    underlying reachable sets.
    """
    prod = product(a1, a2, mask)
    hts = build_hts(arena, labeling, prod, a2)
    perceptual = build_perceptual_game(arena, labeling, a2)

    reports = []
    base_hts, base_perc = truthful_rebuild(arena, labeling, a1, a2)
    base = synthesize_deceptive(base_hts, base_perc, MODE_NONE, outside_win2)
    base.notes["state_space"] = "truthful rebuild (l2 = l1, identity mask)"
    base.notes["deceptive_hts_states"] = hts.n
    reports.append(base)
    for mode in (MODE_GREEDY, MODE_RANDOMIZED):
        reports.append(synthesize_deceptive(hts, perceptual, mode, outside_win2))
    return reports


def render_table(reports: list) -> str:
    """Plain-text comparison table: |V|, then per mode |win1| + verdict at
    the initial state and |win1>| + verdict."""
    header = f"{'mode':<14} {'|V|':>8} {'|win1|':>8} {'init':>6} " \
             f"{'|win1>|':>8} {'init':>6}"
    lines = [header, "-" * len(header)]
    for rep in reports:
        lines.append(
            f"{rep.mode:<14} {rep.hts_states:>8} {len(rep.win1_safe):>8} "
            f"{'win' if rep.initial_in_safe else 'lose':>6} "
            f"{len(rep.win1_cosafe):>8} "
            f"{'win' if rep.initial_in_cosafe else 'lose':>6}"
        )
    return "\n".join(lines) + "\n"


def winning_partition(hts: Hts, win2_states, greedy: DeceptionReport,
                      randomized: DeceptionReport | None = None) -> dict:
    """Color map for the HTS drawing of the synthesis outcome.

    blue: attacker perceives herself winning, defender deceptively wins;
    orange: defender wins only against the greedy attacker; red: attacker
    perceives herself winning and the defender loses; yellow: defender
    safe-wins outside the attacker's perceived winning region.
    """
    colors = {}
    win_greedy = greedy.win1_safe
    win_rand = randomized.win1_safe if randomized is not None else win_greedy
    for v in range(hts.n):
        perceived = v in win2_states
        if perceived and v in win_rand:
            colors[v] = "lightblue"
        elif perceived and v in win_greedy:
            colors[v] = "orange"
        elif perceived:
            colors[v] = "red"
        elif v in win_greedy:
            colors[v] = "yellow"
        else:
            colors[v] = "white"
    return colors


def hts_win2_states(hts: Hts, perceptual: PerceptualGame, win2) -> set:
    """HTS states whose (s, q2) projection lies in the perceived region."""
    win2 = set(win2)
    pindex = perceptual.index()
    out = set()
    for v in range(hts.n):
        sid, _q, q2 = hts.names[v]
        zid = pindex.get((sid, q2))
        if zid is not None and zid in win2:
            out.add(v)
    return out
