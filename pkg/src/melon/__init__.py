"""Curve systems on punctured disks and their mod-2 homology invariants.

The package models 1-systems of boundary arcs on a punctured disk
("watermelons") as exact combinatorial maps, builds the two explicit maximal
families, enumerates maximal systems up to equivalence for small puncture
counts, and certifies inequivalence of the associated loop systems through
Z/2 homology tables.
"""

from .canonical import canonical_code, maps_isomorphic, mirrored
from .diskmap import (ARC, BOUNDARY, ArrangementMap, MalformedMapError,
                      SideMask, ValidationOutcome, make_map, side_mask,
                      validate_map)
from .homology import (CANONICAL, ANTI_CANONICAL, HomologyTable,
                       HomologyVector, InequivalenceCertificate, OrbitWitness,
                       RowOp, apply_row_op, certify_inequivalent, delta2,
                       homology_table, homology_vector, mark_vector,
                       orbit_transform_count, relative_short_set, s_profile,
                       tables_orbit_equivalent, verify_witness)
from .melons import (Arc, Bipartition, SurfaceSpec, ValidationReport,
                     Watermelon, alt_watermelon, canonical_key, delete_arc,
                     empty_watermelon, enumerate_insertions, is_maximal,
                     is_saturated, is_valid, p_parallel_classes, p_reduce,
                     par, short_arcs, standard_watermelon,
                     validate_watermelon)
from .search import (BudgetExhaustedError, ClassRecord, SearchLimits,
                     SearchStats, enumerate_maximal, uniqueness_report)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
