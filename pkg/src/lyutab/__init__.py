"""Exact Lyubeznik tables and Frobenius-splitting diagnostics over F_p."""

from .errors import (Budget, BudgetExceededError, ExponentBoundError,
                     InternalAssertionError, LyutabError, NotFPureError,
                     ParseError, RingMismatchError)
from .fieldpoly import (Monomial, Polynomial, PolyRing, PrimeField,
                        frobenius_pow, monomial_compare, poly_arith)
from .groebner import (GroebnerBasis, Ideal, buchberger, frobenius_power,
                       ideal_colon, ideal_intersect, ideal_member,
                       ideal_product, ideal_sum, krull_dimension, normal_form)
from .modules import (FreeModule, GradedMatrix, ModuleElement, PresentedModule,
                      annihilator, graded_piece_dim, minimal_generators,
                      module_buchberger, subquotient_presentation, syzygies)
from .homological import (ExtCalculator, ExtModule, FreeResolution,
                          double_ext_degree_zero, ext_module, free_resolution,
                          minimalize)
from .fsingularities import (CompatibilityResult, SdimResult, SplittingData,
                             fedder_is_fpure, is_compatible, maximal_ideal,
                             ncm_ideal, sdim, splitting_ideal, splitting_prime)
from .lyubeznik import (CheckReport, CheckResult, LyubeznikTable, CellLedger,
                        check_projective_duality, check_theorem_d,
                        check_vanishing, lyubeznik_table, projective_table,
                        standard_checks, table_shape_checks)
from .sr_oracle import (Graph, SimplicialComplex, binomial_edge_ideal,
                        connected_components, cycle_graph,
                        complete_bipartite_graph, hochster_degree_zero,
                        reduced_cohomology_dims, stanley_reisner_ideal,
                        strand_double_ext)

__version__ = "0.1.0"
