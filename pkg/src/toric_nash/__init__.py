"""Exact computation of essential divisors and local Nash components of toric germs."""

__version__ = "0.1.0"

from .cone import Cone, Face, dual_cone, orthant
from .errors import CapExceeded, ResolutionCapExceeded, ToricNashError, ValidationError
from .fan import Fan, center_of_divisor, face_fan, fiber_components, is_component, resolve, star_subdivision
from .lattice import Sublattice, hermite_normal_form, lattice_index, quotient_map, saturation, smith_normal_form
from .lattice_points import PointSet, enumerate_in_bounds, hilbert_basis, parallelepiped_points
from .nash import arc_poset, essential_divisors, leq_sigma, local_nash_components, minimal_interior_elements
from .qo import QOBranch, lattice_from_exponents, multi_branch, qo_essential
from .verify import check_essential, cross_validate, oracle_minimal_elements, witness_search

__all__ = [
    "CapExceeded", "Cone", "Face", "Fan", "PointSet", "QOBranch", "ResolutionCapExceeded", "Sublattice",
    "ToricNashError", "ValidationError", "arc_poset", "center_of_divisor", "check_essential", "cross_validate",
    "dual_cone", "enumerate_in_bounds", "essential_divisors", "face_fan", "fiber_components",
    "hermite_normal_form", "hilbert_basis", "is_component", "lattice_from_exponents", "lattice_index",
    "leq_sigma", "local_nash_components", "minimal_interior_elements", "multi_branch", "oracle_minimal_elements",
    "orthant", "parallelepiped_points", "qo_essential", "quotient_map", "resolve", "saturation",
    "smith_normal_form", "star_subdivision", "witness_search",
]
