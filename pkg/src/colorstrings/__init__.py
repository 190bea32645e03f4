"""Four-letter string automaton for boundary colorings of near-triangulations."""

from .coloring import (
    boundary_string_set,
    count_colorings,
    enumerate_colorings,
    roundtrip_check,
    roundtrip_mismatch,
)
from .core import (
    Alphabet,
    DerivationScript,
    LSet,
    ReplayError,
    TransitionError,
    TransitionLabel,
    apply_set,
    apply_string,
    canonicalize,
    permute,
    replay,
    reverse,
    start_state,
    successors,
)
from .search import (
    Probe,
    SearchConfig,
    SearchReport,
    bfs,
    check_probe_missing_letter,
    reachable_states,
    verify_witness,
    witness_problem,
)
from .triangulation import (
    PlaneTriangulation,
    ShellingOrder,
    build_from_derivation,
    compute_shelling_order,
    derivation_from_order,
    separating_triangles,
    validate,
)

__version__ = "0.1.0"
