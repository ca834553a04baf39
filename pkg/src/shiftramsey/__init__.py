"""Erdős–Hajnal shift graphs, red-blue edge colorings and Ramsey-sequence extraction."""

__version__ = "0.1.0"

from .coloring import (
    Color,
    TwoColoring,
    adversarial_coloring,
    all_colorings,
    load_coloring,
    monochromatic_coloring,
    out_neighbors,
    predicate_coloring,
    random_coloring,
    save_coloring,
)
from .extraction import (
    ExtractionTrace,
    StageRecord,
    TowerSize,
    lemma1_extract,
    opportunistic_extract,
    ramsey_extract,
    required_host_size,
    s_bit_length,
    s_sequence,
)
from .graph import (
    Graph,
    VertexMapping,
    chromatic_number,
    clique_number,
    complete_graph,
    find_monomorphism,
    is_triangle_free,
)
from .shift import (
    IntervalVertex,
    PointEmbedding,
    ShiftGraph,
    canonical_embedding,
    eh_graph,
    induced_on_points,
    shift_graph,
)
from .verify import (
    RamseyVerdict,
    Sampled,
    classical_ramsey,
    contains_mono_copy,
    ramsey_check,
    verify_structured_copy,
    verify_trace,
)
