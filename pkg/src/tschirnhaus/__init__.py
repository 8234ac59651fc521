"""Tschirnhaus transformations: exact forms, the coefficient map, finite-field
smoothness checks, resolvent-degree bound tables and a numeric reduction
pipeline to principal and Bring form."""

from .bounds import (
    PRIOR_BOUNDS, REFERENCE, BoundsRow, PsiSequence, bounds_row, bounds_table, brauer,
    check_lemma_dim, dim_hypersurfaces, dim_moduli_cubics, format_ratio, fw,
    lemma_dim_sides, phi, prior_bound, psi_sequence, rho_search, waldron_feasible,
)
from .forms import (
    CompleteIntersectionSpec, TschirnhausForm, TschirnhausVector, coefficients_vanish,
    complete_intersection, membership, radical_specialize, transform_coeffs,
    transform_coeffs_oracle, tschirnhaus_form,
)
from .multipoly import MultiPoly, VariableError
from .quadrics import DegenerateQuadricError, QuadricForm, diagonalize, maximal_isotropic
from .reduction import (
    DegenerateInputError, ReductionFailed, ReductionTrace, reduce_to_bring,
    reduce_to_principal, verify_trace,
)
from .rings import GF, QQ, ZZ, FiniteField, GFElement, NonInvertibleError, RingMismatchError
from .smoothness import (
    BudgetExceeded, IntegralityError, OrbitCertificate, ParameterError, SmoothnessReport,
    brute_force_smooth, orbit_certificate, quadric_discriminant_scaling, verify_certificate,
)
from .symmetric import CoeffVector, PowerSums, coeffs_from_power_sums, power_sums_from_coeffs
from .tower import RadicalTower, TowerElem

__version__ = "0.1.0"
