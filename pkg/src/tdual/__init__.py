"""Exact topological T-duality for circle bundles with H-flux."""

from .abgroup import (
    AbGroup,
    Ambiguous,
    Homomorphism,
    Resolved,
    analyze_hom,
    cokernel,
    extension_candidates,
    is_isomorphic,
    kernel,
    resolve_extension,
)
from .errors import (
    BadParameters,
    BaseMismatch,
    DegreeOutOfRange,
    DegreeOverflow,
    IllFormedHom,
    NotDualizable,
    ObstructionNonzero,
    TDualError,
    UnknownDescriptor,
    UnsupportedDimension,
    UnsupportedTwist,
)
from .gysin import CircleBundle, euler_obstruction, gysin_cohomology, pullback, pushforward
from .kernels import smith_normal_form
from .pair import Pair, act_h3, dualize, indeterminacy, make_pair, pairs_isomorphic
from .space import CATALOG, GradedClass, SpaceModel, cup, make_space
from .torus import (
    Splitting,
    TorusBundleClass,
    TwistMatrix,
    act_twist,
    iterated_dual,
    orbit_equivalent,
    sigma,
    zero_splittings,
)
from .twistk import (
    KGroups,
    k_cpr,
    k_surface_bundle,
    k_twisted_3manifold,
    k_untwisted,
    t_admissibility,
    torsion_example,
)

__version__ = "0.1.0"
