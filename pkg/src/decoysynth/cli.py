"""Command-line pipeline: ingestion, construction, solving, reporting.

Commands
--------
arena       generate the game arena from a network config, export JSON/DOT
synthesize  run the deceptive-synthesis pipeline and write reports
verify      re-check solver results against the brute-force oracle and the
            structural invariants; nonzero exit on any mismatch
export-dot  write DOT drawings without solving

Exit codes: 0 ok, 1 validation/parse error, 2 state cap exceeded,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from .automata import Dfa, Mask, load_dfa, load_mask, product
from .errors import (
    DecoysynthError,
    ParseError,
    StateCapExceeded,
    ValidationError,
)
from .hypergame import (
    build_hts,
    build_perceptual_game,
    hts_from_dict,
    hts_to_dict,
    hts_to_dot,
)
from .network import (
    ATTACKER,
    DEFAULT_STATE_CAP,
    DEFENDER,
    arena_from_dict,
    arena_to_dict,
    arena_to_dot,
    build_arena,
    load_arena,
    load_network,
)
from .solvers import (
    Game,
    asw_approx,
    oracle_solve,
    solve_reach,
    solve_safe,
)
from .synthesis import (
    MODE_GREEDY,
    MODE_NONE,
    MODE_RANDOMIZED,
    MODES,
    attacker_strategy,
    compare_modes,
    hts_win2_states,
    render_table,
    synthesize_deceptive,
    truthful_rebuild,
    winning_partition,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAP = 2
EXIT_VERIFY = 3

ORACLE_LIMIT = 1000


def _dump_json(path: Path, data) -> None:
    path.write_text(
        json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _load_inputs(args):
    """Arena + labeling from --network or --arena, and the automata inputs."""
    if args.network and args.arena:
        raise ValidationError("give either --network or --arena, not both")
    t0 = time.perf_counter()
    if args.network:
        model = load_network(args.network)
        arena, labeling = build_arena(model, cap=args.cap)
    elif args.arena:
        arena, labeling = load_arena(args.arena)
    else:
        raise ValidationError("one of --network or --arena is required")
    dt = time.perf_counter() - t0
    print(f"arena: {arena.n} states, {arena.edge_count()} edges [{dt:.2f} s]")
    return arena, labeling


def _load_automata(args):
    a1 = load_dfa(args.a1)
    a2 = load_dfa(args.a2)
    mask = load_mask(args.mask, props=a1.props)
    return a1, a2, mask


def cmd_arena(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    arena, labeling = _load_inputs(args)
    _dump_json(out / "arena.json", arena_to_dict(arena, labeling))
    (out / "arena.dot").write_text(arena_to_dot(arena, labeling), encoding="utf-8")
    print(f"wrote {out / 'arena.json'} and {out / 'arena.dot'}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    arena, labeling = _load_inputs(args)
    a1, a2, mask = _load_automata(args)
    prod = product(a1, a2, mask)

    t0 = time.perf_counter()
    hts = build_hts(arena, labeling, prod, a2, cap=args.cap)
    perceptual = build_perceptual_game(arena, labeling, a2, cap=args.cap)
    dt = time.perf_counter() - t0
    print(f"hts: {hts.n} states, {hts.edge_count()} edges; "
          f"perceptual: {perceptual.n} states [{dt:.2f} s]")
    _dump_json(out / "hts.json", hts_to_dict(hts))

    t0 = time.perf_counter()
    if args.mode == "all":
        reports = compare_modes(arena, labeling, a1, a2, mask,
                                outside_win2=args.outside_win2)
    else:
        if args.mode == MODE_NONE:
            base_hts, base_perc = truthful_rebuild(arena, labeling, a1, a2)
            reports = [synthesize_deceptive(base_hts, base_perc, MODE_NONE,
                                            outside_win2=args.outside_win2)]
        else:
            reports = [synthesize_deceptive(hts, perceptual, args.mode,
                                            outside_win2=args.outside_win2)]
    dt = time.perf_counter() - t0
    print(f"solved {len(reports)} mode(s) [{dt:.2f} s]")

    for rep in reports:
        _dump_json(out / f"report_{rep.mode}.json", rep.to_dict())
    table = render_table(reports)
    (out / "report.txt").write_text(table, encoding="utf-8")
    print(table, end="")

    by_mode = {rep.mode: rep for rep in reports}
    greedy = by_mode.get(MODE_GREEDY) or next(
        (by_mode[m] for m in (MODE_RANDOMIZED, MODE_NONE) if m in by_mode), None
    )
    if greedy is not None and greedy.mode != MODE_NONE:
        _, win2, _ = attacker_strategy(perceptual, MODE_RANDOMIZED)
        colors = winning_partition(
            hts, hts_win2_states(hts, perceptual, win2),
            greedy, by_mode.get(MODE_RANDOMIZED),
        )
        (out / "hts.dot").write_text(hts_to_dot(hts, partition=colors),
                                     encoding="utf-8")
    else:
        (out / "hts.dot").write_text(hts_to_dot(hts), encoding="utf-8")
    print(f"wrote reports and drawings under {out}")
    return EXIT_OK


class _Checks:
    def __init__(self):
        self.failures = []

    def record(self, name: str, ok: bool, detail: str = ""):
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail and not ok else ""))
        if not ok:
            self.failures.append(name)


def _verify_games(checks: _Checks, game: Game, label: str, targets: dict):
    """Solver-vs-oracle and determinacy checks for one game."""
    if game.n > ORACLE_LIMIT:
        print(f"  [SKIP] {label}: {game.n} states exceeds the oracle cap")
        return
    for name, region in targets.items():
        for player in (DEFENDER, ATTACKER):
            reach = solve_reach(game, region, reacher=player)
            oracle_reach = oracle_solve(game, "reach", player, region)
            checks.record(
                f"{label}:{name}:reach-p{player}-oracle",
                reach.win == oracle_reach,
                f"solver {len(reach.win)} vs oracle {len(oracle_reach)}",
            )
            opponent = 3 - player
            safe = solve_safe(game, set(range(game.n)) - set(region),
                              stayer=opponent)
            oracle_safe = oracle_solve(game, "safe", opponent,
                                       set(range(game.n)) - set(region))
            checks.record(
                f"{label}:{name}:safe-p{opponent}-oracle",
                safe.win == oracle_safe,
                f"solver {len(safe.win)} vs oracle {len(oracle_safe)}",
            )
            checks.record(
                f"{label}:{name}:determinacy-p{player}",
                reach.win.isdisjoint(safe.win)
                and reach.win | safe.win == set(range(game.n)),
            )


def cmd_verify(args) -> int:
    checks = _Checks()
    arena, labeling = _load_inputs(args)
    a1, a2, mask = _load_automata(args)

    checks.record("labeling-totality",
                  len(labeling.l1) == arena.n and len(labeling.l2) == arena.n)

    try:
        prod = product(a1, a2, mask)
        checks.record("product-mask-determinism", True)
    except DecoysynthError as exc:
        checks.record("product-mask-determinism", False, str(exc))
        print("verification failed: product-mask-determinism")
        return EXIT_VERIFY

    rng = random.Random(args.seed)
    ok_f1 = ok_f2 = True
    sigma = prod.sigma
    for _ in range(200):
        word = [rng.choice(sigma) for _ in range(rng.randrange(0, 7))]
        run = prod.run(word)
        if any(q in prod.f1 for q in run) != a1.accepts(word):
            ok_f1 = False
        perceived_ok = any(q in prod.f2 for q in run)
        equivalent_accepted = _exists_equivalent_accepted(a2, mask, word)
        if perceived_ok != equivalent_accepted:
            ok_f2 = False
    checks.record("product-accepts-defender-language", ok_f1)
    checks.record("product-accepts-masked-attacker-language", ok_f2)

    hts = build_hts(arena, labeling, prod, a2, cap=args.cap)
    perceptual = build_perceptual_game(arena, labeling, a2, cap=args.cap)
    checks.record("hts-objective-set-consistency", _hts_sets_ok(hts, prod, a2))
    checks.record("hts-word-coherence",
                  _word_coherence_ok(rng, arena, labeling, prod, a2, hts))
    checks.record("hts-projection-coherence",
                  _projection_ok(hts, perceptual))

    rt_arena = arena_from_dict(arena_to_dict(arena, labeling))
    checks.record("arena-json-round-trip",
                  arena_to_dict(*rt_arena) == arena_to_dict(arena, labeling))
    rt_hts = hts_from_dict(hts_to_dict(hts))
    checks.record("hts-json-round-trip", hts_to_dict(rt_hts) == hts_to_dict(hts))

    if args.hts:
        try:
            with open(args.hts, encoding="utf-8") as fh:
                on_disk = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.hts}: malformed HTS JSON: {exc}") from exc
        checks.record("hts-export-consistency", on_disk == hts_to_dict(hts),
                      "exported HTS differs from a fresh build")

    pgame = Game.from_perceptual(perceptual)
    reach2 = solve_reach(pgame, perceptual.target, reacher=ATTACKER)
    asw = asw_approx(pgame, reach2.win, player=ATTACKER)
    checks.record("greedy-within-safe-strategy",
                  all(reach2.strategy[s] <= asw.get(s, frozenset())
                      for s in reach2.strategy))

    _verify_games(checks, pgame, "perceptual", {"target": perceptual.target})
    hgame = Game.from_hts(hts)
    _verify_games(checks, hgame, "hts", {"lure": hts.f1_cosafe,
                                         "unsafe": set(range(hts.n)) - hts.f1_safe})

    for i in range(args.random_games):
        seed = (args.seed or 0) * 1000 + i
        game = _random_game(random.Random(seed))
        target = set(random.Random(seed + 1).sample(range(game.n),
                                                    max(1, game.n // 5)))
        _verify_games(checks, game, f"random-{seed}", {"t": target})

    if checks.failures:
        print(f"verification failed: {checks.failures[0]}")
        return EXIT_VERIFY
    print("all checks passed")
    return EXIT_OK


def _exists_equivalent_accepted(a2: Dfa, mask: Mask, word) -> bool:
    """Brute-force: some observation-equivalent word is accepted by a2."""
    if not word:
        return a2.accepts(word)
    frontier = {a2.initial}
    accepted_seen = a2.initial in a2.accepting
    for sig in word:
        nxt = set()
        for q in frontier:
            for alt in mask.eq_class(sig):
                nxt.add(a2.trans[(q, alt)])
        frontier = nxt
        if frontier & a2.accepting:
            accepted_seen = True
    return accepted_seen


def _hts_sets_ok(hts, prod, a2) -> bool:
    for i, (_, q, q2) in enumerate(hts.names):
        if (i in hts.f1_cosafe) != (q in prod.f1):
            return False
        if (i in hts.f1_safe) != (q not in prod.f2):
            return False
        if (i in hts.f2) != (q2 in a2.accepting):
            return False
    return True


def _word_coherence_ok(rng, arena, labeling, prod, a2, hts) -> bool:
    """Random walks: DFA coordinates equal runs over the label words."""
    for _ in range(50):
        v = hts.initial
        arena_path = [hts.names[v][0]]
        for _ in range(rng.randrange(1, 12)):
            action, v = rng.choice(hts.succ[v])
            arena_path.append(hts.names[v][0])
        _, q, q2 = hts.names[v]
        w1 = [labeling.l1[s] for s in arena_path]
        w2 = [labeling.l2[s] for s in arena_path]
        if prod.run(w1)[-1] != q or a2.run(w2)[-1] != q2:
            return False
    return True


def _projection_ok(hts, perceptual) -> bool:
    pindex = perceptual.index()
    for v in range(hts.n):
        sid, _, q2 = hts.names[v]
        zid = pindex.get((sid, q2))
        if zid is None:
            return False
        succ_p = {(a, perceptual.names[t]) for a, t in perceptual.succ[zid]}
        for action, w in hts.succ[v]:
            wsid, _, wq2 = hts.names[w]
            if (action, (wsid, wq2)) not in succ_p:
                return False
    return True


def _random_game(rng: random.Random) -> Game:
    n = rng.randrange(2, 40)
    owner = [rng.choice((DEFENDER, ATTACKER)) for _ in range(n)]
    succ = []
    for s in range(n):
        k = rng.randrange(1, 4)
        succ.append([(f"x{j}", rng.randrange(n)) for j in range(k)])
    return Game(owner=owner, succ=succ)


def cmd_export_dot(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    arena, labeling = _load_inputs(args)
    (out / "arena.dot").write_text(arena_to_dot(arena, labeling), encoding="utf-8")
    written = [out / "arena.dot"]
    if args.a1 and args.a2 and args.mask:
        a1, a2, mask = _load_automata(args)
        prod = product(a1, a2, mask)
        hts = build_hts(arena, labeling, prod, a2, cap=args.cap)
        (out / "hts.dot").write_text(hts_to_dot(hts), encoding="utf-8")
        written.append(out / "hts.dot")
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoysynth",
        description="Deceptive defense synthesis over network attack games.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, automata_required):
        p.add_argument("--network", help="network config JSON")
        p.add_argument("--arena", help="pre-built arena JSON (alternative input)")
        p.add_argument("--a1", required=automata_required,
                       help="defender's hidden cosafe DFA JSON")
        p.add_argument("--a2", required=automata_required,
                       help="attacker's cosafe DFA JSON")
        p.add_argument("--mask", required=automata_required,
                       help="observation mask JSON")
        p.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP,
                       help="state-space cap (default %(default)s)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized checks")
        p.add_argument("--out", default="out", help="output directory")

    p_arena = sub.add_parser("arena", help="generate and export the arena")
    add_common(p_arena, automata_required=False)
    p_arena.set_defaults(func=cmd_arena)

    p_syn = sub.add_parser("synthesize", help="run the synthesis pipeline")
    add_common(p_syn, automata_required=True)
    p_syn.add_argument("--mode", default="all",
                       choices=list(MODES) + ["all"])
    p_syn.add_argument("--outside-win2", default="all-actions",
                       choices=["all-actions", "no-actions"],
                       dest="outside_win2",
                       help="attacker actions outside her perceived "
                            "winning region")
    p_syn.set_defaults(func=cmd_synthesize)

    p_ver = sub.add_parser("verify", help="oracle and invariant checks")
    add_common(p_ver, automata_required=True)
    p_ver.add_argument("--hts", help="exported HTS JSON to check for consistency")
    p_ver.add_argument("--random-games", type=int, default=10,
                       dest="random_games",
                       help="number of random oracle-checked games")
    p_ver.set_defaults(func=cmd_verify)

    p_dot = sub.add_parser("export-dot", help="write DOT drawings")
    add_common(p_dot, automata_required=False)
    p_dot.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except StateCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DecoysynthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
