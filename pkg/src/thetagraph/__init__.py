"""Exact cone-graph (theta and Yao) construction, structure analysis and fuzzing."""

from .cone_graph import (
    FLAVORS,
    THETA,
    YAO,
    ConeGraph,
    DirectedEdge,
    PointSet,
    build,
    build_sweep,
    edge_roles,
    general_position_violations,
)
from .errors import (
    AmbiguousPredicate,
    CycleDetected,
    Degenerate,
    DegenerateGeometry,
    Disconnected,
    DuplicatePoint,
    ExhaustedRetries,
    IdenticalPoints,
    NotAnEdge,
    Overlap,
    ParseError,
    PreconditionUnmet,
    ThetaGraphError,
    UnknownProperty,
    WrongCone,
)
from .exact_geom import (
    Approx,
    ConeSpec,
    Point,
    QSqrt3,
    check_arc_enclosure,
    cone_index,
    euclidean_distance_sq,
    orient,
    projected_distance,
    segment_crosses_cone,
    segments_cross,
)
from .routing import CYCLED, REACHED, STUCK, RouteTrace, theta_route
from .structure import (
    LEFT,
    ON_BARRIER,
    RIGHT,
    AuditReport,
    Barrier,
    IPath,
    SinkReport,
    audit_empty_cone_crossings,
    audit_i_edge_crossings,
    barrier,
    barrier_starts,
    connected_components,
    i_path,
    path_is_monotone,
    sinks,
    sink_triples,
    stretch_factor,
    strongly_connected_components,
    verify_sink_triple,
)

__version__ = "0.1.0"
