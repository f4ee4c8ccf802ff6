"""Exact-arithmetic toolkit for point-line incidence structures in the
real projective plane: configuration generators with symbolic collinearity
oracles, incidence spectra and their sharp bounds, dual-arrangement audits
(Euler, Melchior, bad edges), cubic-curve algebra and covers, and the
companion combinatorial experiments."""

from .errors import (
    AmbiguousSign,
    ConcurrentLines,
    DegenerateNinePoints,
    DegeneratePencil,
    DomainError,
    DuplicatePoint,
    GroupTooLarge,
    IdenticalLines,
    IdenticalPoints,
    InvalidParameter,
    NonRationalInput,
    OffCurve,
    OffLine,
    ParseError,
    SingularPoint,
    UnnormalizedInput,
    ZeroTriple,
)
from .scalars import AdaptiveReal, TrigScalar
from .projective import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    affine_point,
    collinear,
    concurrent,
    dualize,
    equivalent,
    incident,
    join,
    line,
    meet,
    point,
)
from .incidence import (
    Configuration,
    IncidenceSpectrum,
    LineTable,
    apply_transform,
    check_extremal_bounds,
    check_identities,
    dirac_motzkin_minimum,
    enumerate_lines,
    make_configuration,
    orchard_maximum,
    spectrum,
)
from .arrangement import ArrangementSummary, SphericalDcel, build_dual_arrangement, melchior_audit
from .cubics import (
    Cubic,
    ChaslesReport,
    ConicLineSystem,
    GroupElement,
    WeierstrassCurve,
    chasles_check,
    fit_cubic,
    quasigroup_for,
    singular_param,
)
from .families import FamilySpec, generate, perturb
from .codec import load_configuration, save_configuration
from .structure import (
    CubicCover,
    RatioMap,
    TriangularGrid,
    cover_by_cubics,
    grid_from_cuspidal,
    menelaus_check,
    quotient_set,
    ratio_map,
    verify_triangular_grid,
)
from .groups import FiniteAbelianGroup
from .sumsets import (
    almost_group_recover,
    convexity_gap_experiment,
    restricted_sumset,
    sumset_bound_check,
)
from .chords import ngon_chord_multiplicity

__version__ = "0.1.0"
