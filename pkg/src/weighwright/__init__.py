"""Adaptive balance-weighing strategies for finding counterfeit coins.

The package ships three verified seven-weighing tables that sort 11 coins of
two possible weights, a depth-bounded exhaustive searcher that synthesises
optimal strategies for small coin counts, composition machinery that builds
plans of at most ``ceil(7n/11)`` weighings for any ``n``, exact
information-theoretic bounds, and an interactive assistant (terminal and
HTTP) that walks a human through the weighings.
"""

from .core import (
    BALANCED,
    DecisionTree,
    HypothesisSet,
    Internal,
    Leaf,
    LeafNode,
    LEFT_HEAVIER,
    LEFT_LIGHTER,
    MalformedTree,
    Pan,
    Semantics,
    UnbalancedPans,
    UNIFORM_LEAF,
    Weighing,
    decode_subset,
    encode_subset,
    pan,
    refine,
    run_strategy,
    weigh,
    weighing,
)
from .bounds import BoundsRow, bounds_rows, format_rows, lower_bound_exact, lower_bound_sorting, upper
from .search import (
    BudgetExceeded,
    SearchProblem,
    SearchStats,
    WeighingPolicy,
    min_weighings_exact,
    min_weighings_sorting,
    solve,
    synthesize_base,
)
from .strategies import (
    EmptyTable,
    IrreparableNode,
    MissingWeighing,
    ParseError,
    StrategyTable,
    VerificationReport,
    import_table_text,
    load_table,
    packaged_table,
    packaged_tree,
    repair_tree,
    save_table,
    serialize_table,
    table_to_tree,
    tree_to_dot,
    tree_to_table,
    verify_tree,
)
from .composition import (
    CompositePlan,
    FinisherCase,
    paired_coins_tree,
    extend_with_three_coins,
    plan,
)

__version__ = "0.1.0"
