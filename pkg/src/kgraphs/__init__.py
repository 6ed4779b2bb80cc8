"""Finite higher-rank graphs: validation, path arithmetic, moves, graded
invariants, homology, and bridging search."""

from .bridging import (
    BridgingPair,
    CoherenceWitness,
    Exhausted,
    IncoherentPair,
    NotIntertwining,
    PolyEdge,
    Polymorphism,
    ShapeMismatch,
    bridging_graph,
    bridging_search,
    check_flip_family,
    coherence_check,
    compose_poly,
    coordinate_polymorphism,
    extend_flip,
    identity_polymorphism,
    morph_apply,
    poly_matrix,
    polymorphism_from_matrix,
)
from .constructions import (
    FIXTURE_NAMES,
    EmptyWindow,
    MonoidHom,
    UnknownFixture,
    fixture,
    grid,
    hom_apply,
    hom_surjective,
    monoid_hom,
    pullback,
    rose,
    skew_product_window,
)
from .core import (
    DegreeOutOfRange,
    Edge,
    InvalidKGraph,
    KGraph,
    NotComposable,
    Path,
    Skeleton,
    compose,
    make_path,
    mce,
    path_degree,
    path_source,
    paths_of_degree,
    segment,
    unit_degree,
    validate_kgraph,
    vertex_matrix,
    vertex_path,
    zero_degree,
)
from .dimension import (
    DimElement,
    DimensionMismatch,
    ExhaustedBounds,
    GeneratorMap,
    RankMismatch,
    SSEWitness,
    apply_generator_map,
    dge_add,
    dge_eq,
    dge_neg,
    dge_scale,
    dge_shift,
    dim_element,
    generator_map,
    generator_map_from_matrix,
    hom_check,
    identity_generator_map,
    identity_map_between,
    intertwiner_check,
    iso_check,
    pointed_check,
    positivity,
    rank_invariant,
    sse_search,
    unit_element,
    zero_element,
)
from .homology import (
    AbelianInvariants,
    NotStrict,
    NotSurjective,
    h0,
    h0_pullback_compare,
    h0gr_presentation,
    rho_pullback_check,
)
from .intmat import rank, smith_normal_form, snf_diagonal
from .moves import (
    IndivisibleVertex,
    InvalidPartition,
    NotASink,
    ParentMap,
    Partition,
    check_partition,
    ei_sinks,
    enumerate_valid_partitions,
    insplit,
    insplit_matrices,
    pairing_closure,
    phi_insplit,
    phi_sink_delete,
    psi_insplit,
    sink_colors,
    sink_delete,
    sink_delete_witnesses,
)
from .textform import (
    TextFormatError,
    dump_kgraph,
    load_kgraph,
    parse_kgraph,
    parse_kgraph_parts,
    violations_report,
)

__version__ = "0.1.0"
