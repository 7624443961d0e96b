"""nervelab: finite nerve constructions for covers of simplicial complexes
and Euclidean point clouds, with discrete Morse collapses and Z/2 homology
verification."""

from .complexes import (BarycentricPoint, FlagComplex, Poset, PosetMap,
                        SimplicialComplex, SimplicialMap, Subdivision,
                        base_to_sd_coords, bst, closure, flag,
                        is_cone_with_apex, link, pos, sd, sd_map,
                        sd_to_base_coords)
from .covers import (CoveredSpaceMorphism, GoodnessCertificate, IndexedCover,
                     PointedSimplicialCover, bst_cover, bst_pointing,
                     check_carried, drop_duplicate, goodness_report,
                     induced_nerve_map, intersection, nerve)
from .blowup import (TComplex, blowup_report, collapse_pairing, f_map,
                     induced_pobar_map, induced_t_map, lambda_n, lambda_s,
                     mu_section, pobar, t_complex)
from .morse import (DiscreteVectorField, collapse, collapses_to_point,
                    element_height, element_heights, greedy_gradient_search,
                    is_gradient, is_vector_field, v_path_height)
from .homology import (Barcode, ChainComplexZ2, HomologyBasis,
                       InclusionFiltration, InducedMap, barcode, betti_z2,
                       check_square, components, induced_homology_map,
                       is_z2_acyclic)
from .geometry import (Ball, GammaMap, GeometricCover, PointCloud,
                       PointedGeometricCover, Polytope, PsiContext,
                       alpha_complex_2d, alpha_filtration_2d, alpha_values_2d,
                       cech_filtration, cech_nerve, check_gamma_carried,
                       check_psi_carried, delaunay_2d, element_distance,
                       element_membership, gamma_map, geometric_nerve,
                       homotopy_witness, meb, pointed_cech_cover, psi_eval,
                       thickening_eps)
from .errors import (InternalInconsistencyError, NerveLabError,
                     ResourceCapError, SchemaError)

__version__ = "0.1.0"
