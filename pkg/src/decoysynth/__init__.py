"""Deceptive defense synthesis for networks with decoys, via games on graphs."""

from .automata import (
    COSAFE,
    SAFE,
    Dfa,
    Mask,
    ProductAutomaton,
    alphabet,
    dfa_from_dict,
    dfa_to_dict,
    fmt_symbol,
    load_dfa,
    load_mask,
    make_complete,
    product,
    symbol,
)
from .errors import (
    DecoysynthError,
    ParseError,
    ProductDeterminismError,
    StateCapExceeded,
    ValidationError,
)
from .hypergame import (
    Hts,
    PerceptualGame,
    build_hts,
    build_perceptual_game,
    hts_from_dict,
    hts_to_dict,
    hts_to_dot,
    load_hts,
)
from .network import (
    ATTACKER,
    DEFENDER,
    Arena,
    Host,
    Labeling,
    LabelRule,
    NetworkModel,
    Vulnerability,
    arena_from_dict,
    arena_to_dict,
    arena_to_dot,
    build_arena,
    labeling_matches_mask,
    load_arena,
    load_network,
    network_from_dict,
)
from .solvers import (
    Game,
    SolveResult,
    asw_approx,
    greedy_strategy,
    oracle_solve,
    pre_exists,
    pre_forall,
    solve_reach,
    solve_safe,
)
from .synthesis import (
    MODE_GREEDY,
    MODE_NONE,
    MODE_RANDOMIZED,
    DeceptionReport,
    attacker_strategy,
    compare_modes,
    induce,
    lift_attacker_strategy,
    render_table,
    restrict,
    synthesize_deceptive,
    truthful_rebuild,
)

__version__ = "0.1.0"
