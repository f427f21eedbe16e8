"""Trail-based site search: index a site snapshot, score pages against
keyword queries, and return ranked, filtered, merged trails of pages
discovered by probabilistic best-first expansion of navigation trees."""

from .config import EngineConfig
from .engine import NavigationTree, Params, Trail, compare_tips, make_trail, run_best_trail
from .gain import (
    PotentialGainVector,
    bucket_distribution,
    compute_potential_gain,
    hits_hub_scores,
    select_starting_points,
)
from .graph import (
    ContentClasses,
    Document,
    DocumentStore,
    GraphStats,
    SnapshotError,
    UnknownNodeError,
    WebGraph,
    build_content_classes,
    graph_stats,
    load_snapshot,
    normalize_url,
)
from .index import InvertedIndex, RelevanceVector, build_index, score_query, tokenize
from .postprocess import (
    TrailForest,
    filter_subsumed,
    merge_forest,
    pairwise_better,
    remove_redundant_pages,
    sort_trails,
    subsumes,
    unmerge,
)
from .scoring import geometric_sum, score_discounted, score_sum_distinct, score_weighted
from .service import Engine
from .tip_table import TipSelectionTable

__version__ = "0.1.0"
