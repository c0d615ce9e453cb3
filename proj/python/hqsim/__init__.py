"""Python interface to the spin-ensemble/cavity simulation toolkit."""

from ._core import (
    ConfigError,
    IntegrationError,
    PropagationError,
    __version__,
    discretize_gaussian,
    drive_for_r,
    effective_detuning,
    fit_decay_rate,
    peak_envelope,
    photon_number_squeezed,
    preset_names,
    preset_text,
    quantum_fidelity,
    schema_text,
    semiclassical_photon_number,
    squeezing_parameter,
    transformed_coupling,
    wigner,
)

__all__ = [
    "ConfigError",
    "IntegrationError",
    "PropagationError",
    "__version__",
    "discretize_gaussian",
    "drive_for_r",
    "effective_detuning",
    "fit_decay_rate",
    "peak_envelope",
    "photon_number_squeezed",
    "preset_names",
    "preset_text",
    "quantum_fidelity",
    "schema_text",
    "semiclassical_photon_number",
    "squeezing_parameter",
    "transformed_coupling",
    "wigner",
]
