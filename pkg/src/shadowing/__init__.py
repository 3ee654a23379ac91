"""Exact shadowing analysis for finite rational metric systems.

The package decides shadowing-type properties (shadowing, h-shadowing,
eventual, orbital and limit variants, inverse shadowing) exactly over
``fractions.Fraction`` arithmetic, builds induced systems (hyperspaces,
symmetric products, products, inverse limits), verifies the lifting
theorems along factor maps, and generates piecewise-linear
counterexample families with certified defect bounds.
"""

from .core import (FiniteMetricSpace, FiniteMetricSystem, SpaceValidationError,
                   ThresholdGrid, ThresholdPair, discrete_space,
                   hausdorff_distance, line_space, omega_limit_set, orbit_set,
                   system_from_json, system_to_json, threshold_grid,
                   validate_space)
from .deciders import (ALL_PROPERTIES, BOUNDED_PROPERTIES,
                       FIXED_THRESHOLD_PROPERTIES, NotSurjectiveError,
                       THRESHOLD_FREE_PROPERTIES, decide_eventual_shadowing,
                       decide_h_shadowing, decide_inverse_shadowing,
                       decide_limit_shadowing, decide_orbital_limit_shadowing,
                       decide_orbital_shadowing, decide_shadowing,
                       decide_slimit_condition2,
                       decide_strong_orbital_shadowing, decide_weak1,
                       decide_weak2, is_pseudo_orbit, property_level,
                       revalidate)
from .induced import (CapExceeded, FactorMapError, FactorMapSpec, InverseTower,
                      check_mittag_leffler, hyperspace_system, product_system,
                      standard_inverse_limit, symmetric_product, tower_limit,
                      validate_factor_map)
from .lifting import (AlpThresholds, LIFTING_VARIANTS, PROPERTY_TO_LIFTING,
                      decide_alp_fixed, lift_walk, lifting_property,
                      verify_preservation)
from .oracle import ORACLE_PROPERTIES, OracleResult, certified_horizon_hint, oracle
from .pwl import (EXAMPLE_IDS, PLMap, PseudoOrbitSpec, RationalIntervalSet,
                  RotationSystem, cubic_tent_map, generate_example, pl_image,
                  rotation_defect_search, rotation_limit_profile,
                  shadow_set_run, symmetric_shadow_run, tent_map,
                  validate_pseudo_orbit_spec)
from .rationals import RationalFormatError, format_rational, parse_rational
from .verdicts import BudgetError, Verdict

__version__ = "1.0.0"
