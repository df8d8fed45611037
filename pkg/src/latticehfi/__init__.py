"""Heegaard Floer and involutive invariants of plumbed 3-manifolds from
lattice cohomology and graded roots."""
from .plumbing import (FAMILIES, PlumbingError, PlumbingGraph, builtin_family, classify,
                       intersection_form, make_graph, parse_plumbing)
from .spinc import leaf_reps_star_search, star_leaf_levels, torsion_selfconjugate_reps
from .lattice import (WeightFunction, cube_cohomology, cube_cohomology_all, graded_root,
                      quotient_lattice)
from .roots import (GradedRoot, assign_gradings, d_from_module, hf_assemble,
                    involution_on_root, u_module_from_root)
from .involutive import (InvolutiveDInvariants, hfi_hat_dims, involutive_d, iota_model,
                         mapping_cone)
from .obstruct import (InvariantReport, UnsupportedPlumbing, convert_orientation,
                       corollary_c_check, corollary_d_check, run_pipeline,
                       theorem_a_bound, theorem_b_report)

__version__ = "0.1.0"
