from .config import Caps, get_caps, set_caps
from .errors import LatticeError
from .exact_linalg import FinAbGroup, IntMatrix, hermite_normal_form, smith_normal_form
from .group_core import FiniteGroup, Subgroup, build_group, from_table, standard_group, subgroup_reps
from .lattice_core import Lattice, LatticeMap, dual_lattice, induced_lattice, iso_search, validate_lattice
from .cohomology import classify, h1_cocycles, tate_hat0, tate_hat_minus1
from .flabby import flabby_resolution, permutation_certificate, rho_invertible
from .monomial_action import MonomialAction, certify_change, exponent_lattice, verify_action
from .paper_models import case1_lattice, catalog, lambda_lattice, reiner_decompose, verify_case1_iso
from .documents import load_document

__all__ = [
    "Caps",
    "get_caps",
    "set_caps",
    "LatticeError",
    "FinAbGroup",
    "IntMatrix",
    "hermite_normal_form",
    "smith_normal_form",
    "FiniteGroup",
    "Subgroup",
    "build_group",
    "from_table",
    "standard_group",
    "subgroup_reps",
    "Lattice",
    "LatticeMap",
    "dual_lattice",
    "induced_lattice",
    "iso_search",
    "validate_lattice",
    "classify",
    "h1_cocycles",
    "tate_hat0",
    "tate_hat_minus1",
    "flabby_resolution",
    "permutation_certificate",
    "rho_invertible",
    "MonomialAction",
    "certify_change",
    "exponent_lattice",
    "verify_action",
    "case1_lattice",
    "catalog",
    "lambda_lattice",
    "reiner_decompose",
    "verify_case1_iso",
    "load_document",
]
