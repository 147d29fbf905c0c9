"""Finite simplicial sets and the computations built on them."""
from .sset import (FiniteSimplicialSet, SemiSimplicialComplex, SimplicialMapData, TruncationError,
                   boundary, horn, standard_simplex, validate)
from .subdivision import (FinitePoset, SubsetLattice, is_max_localizing, max_adjoint, max_projection,
                          nerve, nonempty_subsets_poset, sd_nonsingular, sd_simplex)
from .category import (ClosureError, FiniteCategory, FiniteCategoryPresentation, Functor,
                       category_nerve, find_isomorphism, iter_functors, poset_category)
from .ex import MarkedEdgeSet, ex_eq_level, ex_level, m_image, m_map
from .kan import (check_inner_kan, check_kan, enumerate_horns, find_filler, idempotent_witness,
                  is_equivalence_edge_bounded)
from .localization import (homotopy_category, localize_category, nerve_of_presentation,
                           verify_max_localization, verify_stab_commutes_with_localization)
from .collar import collar_flow, kappa_S, partition_g, phi_piecewise, verify_coherence, verify_partition_support
from .poly import Poly, parse_poly
from .forms import (DarbouxChart, PolyDForm, PolyVectorField, check_exact_pullback, check_strict_pullback, d,
                    liouville_field, movie_form, parse_form, verify_movie_field_formula)

__version__ = "0.1.0"
