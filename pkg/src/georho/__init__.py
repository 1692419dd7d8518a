"""Geometric models of the relativistic harmonic oscillator.

A one-parameter family of static (1+1) metrics, their classical geodesics
and the bound-state spectra of the Klein-Gordon field, with numerical
oracles for every closed form.
"""
from .analytic import (
    DiscreteSpectrum,
    QuantumLevel,
    SpectralParameters,
    continuum_threshold,
    discrete_spectrum,
    energy_level,
    exponent_branch,
    n_max,
    nr_limit_wavefunction,
    scattering_state_value,
    spectral_parameters,
    wavefunction_value,
)
from .classical import (
    ClassicalOrbit,
    GeodesicPath,
    MotionClass,
    amplitude,
    classify_motion,
    effective_frequency,
    energy_from_state,
    integrate_geodesic,
    orbit_from_energy,
    trajectory_position,
)
from .errors import GeoRhoError
from .model import (
    MetricComponents,
    ModelParameters,
    SpatialDomain,
    horizon_radius,
    metric_components,
    spatial_domain,
    validate,
)
from .numeric import (
    GridSpec,
    NumericalSpectrum,
    gram_matrix,
    node_count,
    norm_divergence_check,
    normalize,
    scalar_product,
    sturm_liouville_eigen,
)

__version__ = "0.1.0"
