"""Workbench for qubit-register meltdown simulation and nuclear phase-memory analysis.

Two halves share one harness:

* a dense exact-diagonalization pipeline for ensembles of random two-body
  qubit Hamiltonians, with mixing-weight, strength-function, spreading-width,
  participation-ratio and level-spacing statistics across the coupling border;
* a compound-nucleus reaction toolkit: Coulomb-penetrability scaling of
  proton spectra, nuclear-temperature fits, Legendre fits of angular
  distributions, and time-scale / effective-dimension estimates.
"""

from .model import (
    ModelConfig,
    CouplingDraw,
    RegisterBasis,
    draw_couplings,
    build_hamiltonian,
    register_basis,
)
from .eig import Spectrum, DiagonalizationError, diagonalize, save_spectrum, load_spectrum
from .mixing import (
    MixingProfile,
    StrengthFunction,
    WidthEstimate,
    SpacingStats,
    mixing_weights,
    ldos,
    spreading_width,
    participation_ratio,
    spacing_ratio_stats,
)
from .scan import ScanResult, chaos_scan
from .reactions import (
    ParticleSpectrum,
    ScaledSpectrum,
    AngularDistribution,
    LegendreFit,
    TemperatureFit,
    AsymmetryReport,
    TimescaleReport,
    SyntheticReaction,
    FitRegimeError,
    coulomb_penetrability,
    coulomb_barrier_mev,
    scale_spectrum,
    fit_temperature,
    fit_legendre,
    legendre_eval,
    asymmetry_report,
    phase_time_proxy,
    bethe_level_density,
    qubit_equivalent,
    timescale_report,
    excitation_energy,
    synthesize_spectrum,
)
from .config import RunConfig, ConfigError, parse_config

__version__ = "0.1.0"
