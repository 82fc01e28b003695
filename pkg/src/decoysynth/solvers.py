"""Fixed-point solvers for turn-based reachability and safety games.

``Game`` is the uniform view the solvers operate on: dense integer states
partitioned between the two players, with deterministic (action, successor)
edges per state.  The attractor solver returns the winning region stratified
into level sets together with the set-valued level-decreasing strategy; the
safety solver returns the closed winning region and the stay-inside
strategy.  ``oracle_solve`` recomputes winning regions by plain {0,1} value
iteration and exists purely to cross-check the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError

REACH = "reach"
SAFE = "safe"

ORACLE_STATE_CAP = 1000


@dataclass
class Game:
    """Two-player turn-based game graph over dense integer states."""

    owner: list  # player id (1 or 2) per state
    succ: list   # per state: list of (action, successor) pairs
    names: list = None
    initial: int = 0

    def __post_init__(self):
        if self.names is None:
            self.names = list(range(len(self.owner)))
        self._pred = None

    @property
    def n(self) -> int:
        return len(self.owner)

    def opponent(self, player: int) -> int:
        return 3 - player

    def states_of(self, player: int):
        return [s for s in range(self.n) if self.owner[s] == player]

    def pred(self) -> list:
        """Reverse adjacency: per state, list of (pred, action) pairs."""
        if self._pred is None:
            pred = [[] for _ in range(self.n)]
            for s in range(self.n):
                for action, t in self.succ[s]:
                    pred[t].append((s, action))
            self._pred = pred
        return self._pred

    def enabled(self, s: int) -> list:
        return [a for a, _ in self.succ[s]]

    def step(self, s: int, action: str) -> int:
        for a, t in self.succ[s]:
            if a == action:
                return t
        raise ValidationError(f"action {action!r} not enabled at state {s}")

    @classmethod
    def from_arena(cls, arena) -> "Game":
        return cls(owner=list(arena.owner), succ=[list(e) for e in arena.succ],
                   names=list(arena.names), initial=arena.initial)

    @classmethod
    def from_perceptual(cls, pg) -> "Game":
        return cls(owner=list(pg.owner), succ=[list(e) for e in pg.succ],
                   names=list(pg.names), initial=pg.initial)

    @classmethod
    def from_hts(cls, hts) -> "Game":
        return cls(owner=list(hts.owner), succ=[list(e) for e in hts.succ],
                   names=list(hts.names), initial=hts.initial)


def pre_exists(game: Game, player: int, xs) -> set:
    """Player's states with some action leading into ``xs``."""
    xs = set(xs)
    return {
        s for s in range(game.n)
        if game.owner[s] == player and any(t in xs for _, t in game.succ[s])
    }


def pre_forall(game: Game, player: int, xs) -> set:
    """Player's states whose every action leads into ``xs``.

    States with no enabled action qualify vacuously; they only arise in
    induced subgames where a strategy stripped all of a player's actions.
    """
    xs = set(xs)
    return {
        s for s in range(game.n)
        if game.owner[s] == player and all(t in xs for _, t in game.succ[s])
    }


@dataclass
class SolveResult:
    """Winning region, level decomposition, and set-valued strategy."""

    kind: str
    player: int  # the reacher (kind == "reach") or the stayer (kind == "safe")
    win: set
    levels: list = field(default_factory=list)  # attractor only
    strategy: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "win": sorted(self.win),
            "levels": [sorted(level) for level in self.levels],
            "strategy": [
                {"state": s, "actions": sorted(self.strategy[s])}
                for s in sorted(self.strategy)
            ],
        }


def solve_reach(game: Game, target, reacher: int) -> SolveResult:
    """Least fixed point Z' = Z u Pre_exists_reacher(Z) u Pre_forall_opp(Z).

    Runs in O(states + edges) with per-action counters; the level sets are
    exactly those of the synchronous iteration, so level_k states reach the
    target within k steps against worst-case opposition.  The strategy
    keeps every level-decreasing action of the reacher.
    """
    opponent = game.opponent(reacher)
    pred = game.pred()
    target = set(target)

    in_win = [False] * game.n
    # Opponent states need every action inside the region before they join.
    remaining = [len(game.succ[s]) if game.owner[s] == opponent else -1
                 for s in range(game.n)]

    level0 = sorted(t for t in target if 0 <= t < game.n)
    for t in level0:
        in_win[t] = True
    levels = [set(level0)]
    frontier = list(level0)

    # Opponent states with no actions satisfy the universal step vacuously.
    stuck = [s for s in range(game.n)
             if game.owner[s] == opponent and remaining[s] == 0 and not in_win[s]]

    while frontier or stuck:
        new = []
        for s in stuck:
            if not in_win[s]:
                in_win[s] = True
                new.append(s)
        stuck = []
        seen_this_round = set(new)
        for t in frontier:
            for s, _action in pred[t]:
                if in_win[s] or s in seen_this_round:
                    continue
                if game.owner[s] == reacher:
                    seen_this_round.add(s)
                    new.append(s)
                else:
                    remaining[s] -= 1
                    if remaining[s] == 0:
                        seen_this_round.add(s)
                        new.append(s)
        for s in new:
            in_win[s] = True
        if not new:
            break
        levels.append(set(new))
        frontier = new

    win = {s for s in range(game.n) if in_win[s]}
    depth = {}
    for k, level in enumerate(levels):
        for s in level:
            depth[s] = k
    strategy = {}
    for s in win:
        if game.owner[s] != reacher or depth[s] == 0:
            continue
        acts = {a for a, t in game.succ[s] if t in win and depth[t] < depth[s]}
        strategy[s] = frozenset(acts)
    return SolveResult(kind=REACH, player=reacher, win=win,
                       levels=levels, strategy=strategy)


def solve_safe(game: Game, safe_set, stayer: int) -> SolveResult:
    """Greatest fixed point of staying inside ``safe_set``.

    Computed as the complement of the opponent's attractor to the unsafe
    states, which removes exactly the states the iterative subtraction
    Z' = Z \\ (Y u Pre_forall_stayer(Y) u Pre_exists_opp(Y)) would remove,
    in linear time.  Stayer states with no action fall out (vacuous
    universal step); opponent states with no action stay safe.
    """
    safe_set = set(safe_set)
    unsafe = set(range(game.n)) - safe_set
    opponent = game.opponent(stayer)
    attr = solve_reach(game, unsafe, reacher=opponent)
    win = set(range(game.n)) - attr.win
    strategy = {
        s: frozenset(a for a, t in game.succ[s] if t in win)
        for s in win
        if game.owner[s] == stayer
    }
    return SolveResult(kind=SAFE, player=stayer, win=win,
                       levels=[], strategy=strategy)


def greedy_strategy(result: SolveResult) -> dict:
    """The level-decreasing set-valued strategy of an attractor solution."""
    if result.kind != REACH:
        raise TypeError("greedy strategy is defined for reachability results only")
    return dict(result.strategy)


def asw_approx(game: Game, win2, player: int = 2) -> dict:
    """Set-based strategy keeping the player inside her winning region.

    The returned map contains every action that stays inside ``win2`` for
    each of the player's states in ``win2``; it is a pointwise superset of
    the greedy strategy, since level-decreasing actions remain in the
    region.
    """
    win2 = set(win2)
    return {
        s: frozenset(a for a, t in game.succ[s] if t in win2)
        for s in sorted(win2)
        if game.owner[s] == player
    }


def oracle_solve(game: Game, objective: str, player: int, region) -> set:
    """Independent winning-region computation by {0,1} value iteration.

    Deliberately naive cross-check: iterates |states| rounds with explicit
    min/max per owner.  ``region`` is the target set for "reach" or the
    safe set for "safe".  Empty max defaults to 0 and empty min to 1, the
    same conventions the solvers use for action-less states.
    """
    if game.n > ORACLE_STATE_CAP:
        raise ValidationError(
            f"oracle limited to {ORACLE_STATE_CAP} states; got {game.n}"
        )
    region = set(region)
    opponent = game.opponent(player)

    if objective == REACH:
        value = [1 if s in region else 0 for s in range(game.n)]
        for _ in range(game.n):
            nxt = list(value)
            for s in range(game.n):
                if value[s] == 1:
                    continue
                succ_vals = [value[t] for _, t in game.succ[s]]
                if game.owner[s] == player:
                    nxt[s] = max(succ_vals, default=0)
                else:
                    nxt[s] = min(succ_vals, default=1)
            if nxt == value:
                break
            value = nxt
        return {s for s in range(game.n) if value[s] == 1}

    if objective == SAFE:
        value = [1 if s in region else 0 for s in range(game.n)]
        for _ in range(game.n):
            nxt = list(value)
            for s in range(game.n):
                if value[s] == 0:
                    continue
                succ_vals = [value[t] for _, t in game.succ[s]]
                if game.owner[s] == player:
                    stay = max(succ_vals, default=0)
                else:
                    stay = min(succ_vals, default=1)
                nxt[s] = min(value[s], stay)
            if nxt == value:
                break
            value = nxt
        return {s for s in range(game.n) if value[s] == 1}

    raise ValidationError(f"unknown objective {objective!r}")
