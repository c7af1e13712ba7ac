"""Exact no-arbitrage verification for finite discrete-time trajectory markets.

The package decides, with rational arithmetic only, whether every node of a
trajectory market is arbitrage-free or at least 0-neutral, produces
machine-checkable certificates for each verdict, constructs explicit
arbitrage portfolios when they exist, and applies fractional-linear market
symmetries (numeraire changes, the call-put parity swap) that provably
preserve those verdicts.
"""

from __future__ import annotations

from .certcheck import (
    check_hull_certificate,
    check_separation,
    check_strict_separator,
    check_weak_witness,
)
from .geometry import (
    GeometryError,
    HullCertificate,
    PointSet,
    SeparationCertificate,
    caratheodory_reduce,
    hull_membership,
    is_disperse,
    is_zero_neutral_set,
    open_segment_member,
    relative_interior_membership,
)
from .market import (
    ARBITRAGE_FREE,
    ARBITRAGE_NODE,
    HAS_ARBITRAGE_NODES,
    LOCALLY_ARBITRAGE_FREE,
    LOCALLY_ZERO_NEUTRAL,
    ZERO_NEUTRAL_ONLY,
    ArbitrageProof,
    MarketError,
    Node,
    Portfolio,
    Trajectory,
    TrajectorySet,
    classify_market,
    classify_node,
    constant_portfolio,
    enumerate_nodes,
    epsilon_witness,
    find_arbitrage,
    perspective,
    portfolio_audit,
    restricted_portfolio,
    sum_portfolios,
    terminal_gain,
    validate,
)
from .parity import (
    ParityError,
    ParitySpec,
    build_parity_market,
    parity_swap_nas,
    pi_functional,
    transformed_parity_factor,
    verify_parity,
)
from .rational import format_rational, parse_rational
from .symmetry import (
    FractionalTransform,
    InducedMap,
    SymmetryError,
    apply_transform,
    check_strict_icp,
    compose,
    identity_transform,
    induce_map,
    numeraire_swap,
    verify_scalar_condition,
    verify_symmetry_on_market,
)

__version__ = "1.0.0"
