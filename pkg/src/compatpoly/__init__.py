"""Compatibility of families of real-rooted polynomials.

A family f_1, ..., f_n of real-rooted polynomials is compatible when every
convex combination is real-rooted. This package decides compatibility,
builds common interleavers as witnesses, perturbs families into the
interior of the real-rooted set and cross-checks everything by sampling.
"""
__version__ = "0.1.0"

from .poly import (
    DEFAULT_TOL, PROFILES, Family, Poly, Tolerances, ZeroMemberError,
    effective_degree, family_from_json, family_to_json, linear_combination,
    load_family, strip_common_roots,
)
from .roots import (
    NotRealRooted, RealRootedness, RootSpectrum, Verdict, ZeroPolynomialError,
    complex_margin, is_real_rooted, real_roots, root_clusters, sturm_count,
)
from .mobius import MobiusMap, act, act_point, push, rotation_to_infinity
from .interlace import (
    InterleaverFailure, InterleaverResult, NotRealRootedInput, SignClass,
    common_interleaver, hko_pair, interlaces, wronskian,
)
from .simplex import is_proper, zero_convex_combination
from .compat import (
    CompatReport, CompatVerdict, NonSimpleDiagnostic, Witness,
    family_compatible, nonsimple_root_diagnostics, pair_compatible,
    perturb_family_mean, simplex_interior_perturbation, triple_compatible,
)
from .oracle import OracleReport, edge_scan, sample_convex_combinations

__all__ = [name for name in dir() if not name.startswith("_")]
