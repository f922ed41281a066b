"""Compatibility conditions of planar bar-and-node structures.

Library layout:

* model / lattice: trusses, triangular-lattice patches, holes
* rigidity: the linear prescribed-elongation system and its counts
* wagon: wagon wheel rows, curve sums, overdetermination witnesses
* development: prescribed-length layout, curvature atoms, 3-star test
* damage: removal resilience, hole losses, asymptotic compatibility
* btp: bigon / triangle / prism assembly calculus
* statics: spring equilibria on compatible trusses
* climit: discrete-to-continuum probes for strain fields
* truss_io / svg / cli / service: formats, rendering, CLI, HTTP API
"""

from .errors import (DisconnectedWarning, InfeasibleError, InputError,
                     LengthMismatchWarning, TrussKitError)
from .model import (Edge, Truss, remove_edges, star_of, topology_report,
                    truss_from_faces)
from .lattice import (BlockHole, CenterHole, EdgeHole, PatchSpec, cell,
                      gen_patch, gen_periodic, hexstar, hole_grid_points,
                      holes_from_spec, lattice_pos, rhombus)
from .rigidity import (AnalysisReport, CompatibilityBasis, ElongationVector,
                       analyze, assemble_rigidity, compatibility_basis,
                       gauge_matrix, solve_prescribed_elongations)
from .wagon import (CurveSumFunctional, WagonWheelRow, curve_sum_witness,
                    curve_sum, wagon_basis_check, wagon_row)
from .development import (CurvatureReport, Development, curvature_atoms,
                          develop, peel_order, three_star_poly,
                          turning_angle_sum)
from .damage import (ACResult, DamageReport, HoleLossReport, PeriodicCellSpec,
                     assess_damage, asymptotic_compatibility, faces_within,
                     hole_loss, isoperimetric, max_interior_by_search,
                     ne_thinning)
from .btp import (Assembly, Bigon, Pin, Prism, PrismLegs, Segment, Triangle,
                  assemble, node_from_json, node_to_json, predicted_compat,
                  prism_determinant)
from .statics import (EquilibriumSolution, is_balanced, load_vector,
                      solve_displacement, solve_elongation, spring_vector,
                      stiffness)
from .climit import (BoundaryProbe, HexLimitProbe, Poly2, PolyDisplacement,
                     StrainField, boundary_limit_check, hexagon_limit_check,
                     induced_elongations, ink, segment_elongation, strain_of)
from .truss_io import load_truss, parse_truss, save_truss, serialize_truss
from .svg import render_svg
from .service import make_server, serve

__version__ = "0.1.0"
