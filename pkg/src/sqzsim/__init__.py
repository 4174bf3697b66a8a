"""Frequency-domain quantum noise and signal transfer of squeezed-light
interferometers with detuned recycling and filter cavities."""

from .components import (
    CavitySpec,
    LossSpec,
    OpaSpec,
    cavity_finesse,
    cavity_fsr,
    cavity_quadrature_transfer,
    cavity_reflection,
    cavity_rotation_angle,
    cavity_transmission,
    detuning_from_sideband_lock,
    opa_output_covariance,
)
from .experiment import (
    DEFAULT_EFFICIENCIES,
    DEFAULT_SWEEP,
    EfficiencyChain,
    InfeasibleTargetError,
    Pipeline,
    PipelineStage,
    SignalSpec,
    SpectrumRecord,
    SweepConfig,
    calibrate_pump,
    detected_noise,
    efficiency_product,
    loss_budget,
    noise_spectrum,
    propagate,
    signal_transfer,
    snr_spectrum,
)
from .netlist import (
    ComponentDecl,
    NetlistDocument,
    ParseDiagnostic,
    ParseResult,
    SignalDecl,
    ValidationResult,
    parse,
    serialize,
    validate,
)
from .twophoton import (
    HomodyneSpec,
    QuadratureTransfer,
    SpectralCovariance,
    apply_scalar_loss,
    apply_transfer,
    homodyne_noise,
    sideband_to_quadrature,
    to_decibel,
)

__version__ = "0.1.0"
