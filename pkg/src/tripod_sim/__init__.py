"""Numerical simulator of a four-level tripod medium.

Three ground states couple to one excited state through the probe,
coupling and control fields.  The package solves the master equation for
steady states and trajectories, extracts absorption spectra and
two-photon coherence traces, provides the analytic dark/bright dressed
states, and maps metal-stripe lengths onto model detunings through a
calibration table.  A preset catalog pins down the standard scenarios;
the tripod-sim CLI writes deterministic CSV output.
"""

from .errors import (DegenerateFields, DuplicateKey, NoFeatures, ParseError,
                     SingularSystem, StepTooLarge, TripodSimError, UnknownKey,
                     UnknownPreset)
from .params import (DecayModel, LAMBDA_BRANCHING, SystemParams,
                     TRIPOD_BRANCHING)
from .model import (Trajectory, build_hamiltonian, build_superoperator,
                    master_rhs, max_step, steady_state,
                    steady_state_by_integration, time_evolve,
                    validate_density_matrix)
from .dressed import (DressedState, EigenSystem, SplittingComparison,
                      bright_states, characteristic_roots, compare_splitting,
                      dark_states, eigensystem, generalized_rabi,
                      splitting_asymptote)
from .spectra import (DecompositionResult, Map2D, SpectralFeature,
                      SpectrumSeries, SwitchingContrast, coherence_traces,
                      decomposition_compare, default_probe_axis,
                      detuning_map, find_features, lambda_reference,
                      probe_sweep, switching_contrast,
                      two_level_reference_peak)
from .geometry import (CalibrationTable, Scenario, StripeLayout,
                       default_calibration, detuning_to_length,
                       layout_to_params, length_to_detuning, preset,
                       preset_names)
from .config import Config, parse_config
from .output import (read_spectrum_csv, write_map_csv, write_spectrum_csv,
                     write_trajectory_csv)
from .cli import RunReport, main, run

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
