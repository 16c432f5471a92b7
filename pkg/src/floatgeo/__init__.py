"""floatgeo: flotation and buoyancy surfaces of convex polytopes.

Computes liquid levels, samples flotation/buoyancy surfaces, verifies the
Dupin identities, decomposes 2D flotation curves into hyperbolic arcs,
reconstructs polygons from their flotation curves (density != 1/2) and
constructs the density-1/2 non-uniqueness pair.
"""

from . import errors
from .arcs import (ArcDecomposition, CornerPoint, HyperbolicArc, compute_W,
                   decompose_flotation_2d, eval_arc)
from .buoyancy import (BuoyancySample, buoyancy_point, dupin1_residual,
                       dupin3_check_2d, moment_identity_check, sample_buoyancy)
from .clipping import (Cap, PlaneSpec, Section, cap_volumes, clip, make_plane,
                       section, section_areas, section_frame,
                       section_second_moment)
from .flotation import (CirclePath, Crossing, FlotationSample,
                        FlotationSurface, LiquidLevel, SingularSet,
                        VertexGroup, antisymmetry_defect, contact_point,
                        default_circle_family, detect_singular_directions,
                        full_circle_2d, recover_vertices, recovered_points,
                        sample_flotation, solve_level, solve_levels_array)
from .montecarlo import (mc_cap_volume, mc_centroid, mc_oracle,
                         mc_section_moment, mc_volume)
from .polytope import (Polytope, build_polytope, centroid,
                       signed_simplex_volume, volume)
from .reconstruct import (FlotationChord, ReconstructionReport, balance_base,
                          chords_through_point, flotation_disagreement,
                          hausdorff, make_counterexample, reconstruct,
                          reconstruct_from_samples)
from .tolerances import DEFAULT_GEO_TOL, geo_tol
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
