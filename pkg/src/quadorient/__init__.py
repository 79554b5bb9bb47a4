"""Consistent edge orientations for quadrilateral meshes of orientable
2-manifolds.

Three interchangeable algorithms: serial traversal (:func:`orient_serial`),
union-find with orientation labels (:func:`orient_unionfind`), and a
deterministic simulation of the distributed negotiation protocol
(:func:`run_parallel`).  All of them either produce an orientation passing
:func:`check_consistent` or raise :class:`MoebiusError` with a witness.
"""

from .errors import (
    DegenerateCellError,
    DuplicateEdgeError,
    EmptyInputError,
    InvalidPartitionError,
    InvalidSpecError,
    MalformedSectionError,
    MeshError,
    MissingEdgeError,
    MoebiusError,
    NoQuadranglesError,
    NonManifoldError,
    NotARibbonError,
    NotIncidentError,
    ParseError,
    UnknownEdgeError,
    UnknownElementError,
    UnsupportedVersionError,
)
from .fileio import (
    read_msh,
    read_native,
    read_orientation,
    write_native,
    write_orientation,
    write_rounds_csv,
)
from .generate import (
    GridSpec,
    SplitMix64,
    gen_cubed_sphere,
    gen_moebius,
    gen_square,
    gen_structured,
    gen_torus,
    shuffle_mesh,
    shuffle_mesh_with_maps,
)
from .mesh import (
    FLIP,
    SAME,
    QuadMesh,
    build_mesh,
    edge_cells,
    edge_key,
    opposite_edge,
    required_rel,
)
from .parallel import (
    NegotiationTrace,
    RoundMessage,
    collect_outgoing,
    fit_loglog_slope,
    negotiate_round,
    run_parallel,
    scaling_sweep,
)
from .partition import (
    CellPartition,
    LocalDomain,
    LocalState,
    build_local_domain,
    cell_adjacency,
    dump_partition,
    local_preprocess,
    partition_cells,
)
from .serial import OrientationMap, RibbonPartition, orient_serial, ribbons
from .unionfind import OrientedForest, build_orientation_forest, orient_unionfind
from .verify import VerdictReport, check_consistent, compare_verdicts, flip_ribbon

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
