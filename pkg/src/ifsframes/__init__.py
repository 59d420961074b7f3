"""Numerical toolkit for affine IFS invariant measures, weighted Fourier
frames, and Beurling densities."""

__version__ = "0.1.0"

from .beurling import (
    DensityScan,
    DimensionEstimate,
    default_radii,
    dimension,
    lambda_set,
    lower_density,
    sup_window_mass,
    upper_density,
)
from .catalog import BUILTIN_SYSTEMS, get_system, list_catalog
from .errors import DomainError, OverlapError, SizeLimitError, UsageError
from .frames import (
    CylinderFunction,
    DecayCertificate,
    FrameReport,
    HermitianMatrix,
    constant_one,
    counterexample_probe,
    frame_bounds,
    gram_matrix,
    hermitian_extremes,
    lower_bound_decay_certificate,
    weighted_frame,
)
from .ifs import (
    AffineIfs,
    TruncationBudget,
    Word,
    cylinder_interval,
    dual_weights,
    encode,
    find_complement,
    ft_cylinder,
    ft_invariant,
    level_anchors,
    level_words,
    new_ifs,
    sample_invariant,
)
from .measures import (
    AtomicMeasure,
    DensityMeasure,
    FiniteSum,
    Measure,
    convolve,
    dirac,
    discretize,
    integer_lattice,
    lebesgue_on,
    make_atomic,
    make_density,
    mass,
    measure_from_dict,
    measure_to_dict,
    mollify,
    support_hull,
    translate,
    window_mass,
)
from .reconstruct import (
    ReconstructionResult,
    SplitSystem,
    fourier_reconstruct,
    make_split_system,
    project_p,
)
