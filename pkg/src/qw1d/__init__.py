"""Canonical forms and unitary equivalence of one-dimensional two-state quantum walks."""

from .canonical import (
    CLASSES,
    CanonicalCompleteTwoPhase,
    CanonicalGeneral,
    CanonicalOneDefect,
    CanonicalState,
    CanonicalTI,
    CanonicalTwoPhaseDefect,
    GaugeDerivation,
    GaugeTransform,
    canonicalize,
    canonicalize_complete_two_phase,
    canonicalize_general,
    canonicalize_one_defect,
    canonicalize_ti,
    canonicalize_two_phase_defect,
    canonicalize_with_state,
    classify,
    gauge_spec,
)
from .core import (
    CoeffSite,
    SiteVectors,
    WalkSpec,
    WindowOperator,
    build_window_operator,
    check_unitary,
    coeffs_from_vectors,
)
from .equivalence import EquivalenceWitness, commutant, decide, equivalent_params, gauge_search
from .evolve import (
    Distribution,
    LatticeState,
    check_distribution_invariance,
    distribution,
    distributions,
    evolve,
)
from .io import parse_spec_file

__version__ = "0.1.0"
