"""Minimal graded free resolutions and regularity over noncommutative algebras."""

from nca.errors import NcaError, OutOfWindowError, ParseError, UncertifiedError
from nca.freealg import AlgebraPresentation, MonomialOrder, NcPoly, make_algebra, opposite, parse
from nca.groebner import complete, realize_algebra
from nca.grmod import (
    GradedModulePresentation,
    augmentation_ideal,
    cyclic_module,
    direct_sum,
    free_module,
    realize_module,
    simple_module,
    truncate_shift,
    twist,
)
from nca.resolution import BettiTable, betti, euler_check, is_linear, minimal_resolution, verify_exactness
from nca.regularity import (
    DualityDatum,
    RegularityValue,
    cm_regularity_duality,
    ext_into_algebra,
    ext_regularity,
    koszul_check,
    left_right_k,
    verify_inequalities,
    verify_truncation,
)

__version__ = "0.1.0"
