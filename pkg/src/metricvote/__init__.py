"""Universal expert committees and regret-bounded voting in normed spaces."""

from .adversary import (
    AdversarialInstance,
    CountOverflowError,
    build_adversarial,
    find_deficient_ball,
    kapproval_counterexample,
    unit_ball_cover_size,
    verify_indistinguishable,
    verify_regret_gap,
)
from .bounds import (
    BoundsReport,
    bounds_report,
    committee_size_window,
    covering_volume_window,
    gamma_sandwich,
    unit_ball_volume,
)
from .committee import (
    CommitteeBlueprint,
    build_neighbor_graph,
    build_spanning_tree,
    construct_multiwinner,
    construct_screening,
    construct_universal,
)
from .geometry import (
    L1,
    L2,
    LINF,
    Ball,
    Box,
    Cover,
    Norm,
    Packing,
    cover_verify,
    domain_contains,
    domain_diameter,
    greedy_packing,
    grid_cover,
    ray_sphere_root,
    segment_point,
    unit_box,
)
from .instance import (
    Candidates,
    RankingProfile,
    approval_ballot,
    is_consistent,
    perceived_quality,
    profile,
    top_k_ranking,
)
from .oracle import (
    DualPathCertificate,
    QualityCertificate,
    certify_lp_duality,
    dual_path_certificate,
    primal_certificate,
    regret_bound,
    true_regret,
)
from .voting import (
    DistanceMatrix,
    NegativeCycleError,
    PrefGraph,
    alternative_rule,
    apsp,
    bellman_ford,
    build_pref_graph,
    minimal_regret_rule,
    multiwinner_rule,
    two_round_protocol,
)

__version__ = "0.1.0"
