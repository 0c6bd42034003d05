"""Hyperbolic-time calculus, empirical measures and SRB classification on torus maps."""
from .classify import (ClassificationRecord, DensityProfile, Label, alpha_profile, beta_profile,
                       classify_point, classify_points, complement_mass_defect, decide,
                       ensemble_run, refine_to_intervals, srb_candidate_measure)
from .config import ExperimentConfig, config_from_dict, load_config
from .dynsys import (SYSTEM_NAMES, SystemSpec, finite_time_exponent, make_system,
                     observable_sequence, orbit)
from .entropy import (BoundPair, iterated_atom_label, iterated_entropy, misiurewicz_bound_fixed,
                      misiurewicz_bound_setvalued, static_entropy, unstable_volume_decay)
from .estimators import HyperbolicTimes, SRBClassifier
from .exceptions import (ConfigError, DimensionError, EmptyMeasure, EmptyTimeSet,
                         IncompleteInput, InvalidParameter, NoHyperbolicTime, SrbTimesError,
                         UnknownSystem, UnsupportedSystem)
from .measures import (PointMeasure, ReferenceMeasure, almost_invariance_defect,
                       empirical_measure_on, haar, is_component, pushforward,
                       time_averaged_measure, weak_star_distance)
from .partition import GridPartition
from .timesets import (IntervalDecomposition, RealSequence, TimeSet, boundary, chain,
                       connected_components, density, dilate, g_double, hyperbolic_times,
                       interval_refine, mildly_hyperbolic_times, weakly_hyperbolic_times)

__version__ = "0.1.0"
