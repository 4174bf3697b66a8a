"""Built-in measurement scenarios over the reference optical chain.

The reference netlist (data/fig1.nl) describes the squeezed-field path of
the tabletop dual-recycled interferometer: squeezer, injection losses,
detuned filter cavity, detuned signal-recycling cavity, readout losses,
homodyne detector.  Scenario names follow the measurement curves:

    fig2a  shot noise (vacuum input)
    fig2b  squeezed input reflected at the +10 MHz recycling cavity only
    fig2c  squeezed input reflected at the -10 MHz filter cavity only
    fig2d  filter cavity plus recycling cavity (compensated rotation)
    fig3   fig2d chain probed with a swept single-sideband signal

The curve labels for the single-cavity cases follow the measurement's
figure caption; the accompanying text swaps (b) and (c) once, so the
mapping is stated here explicitly.  The squeezer pump is always
recalibrated at run time so the compensated chain shows the reference
noise suppression at the anchor frequency.
"""

from __future__ import annotations

from dataclasses import replace
from importlib import resources

from .experiment import (
    Pipeline,
    SpectrumRecord,
    SweepConfig,
    DEFAULT_SWEEP,
    calibrate_pump,
    noise_spectrum,
    snr_spectrum,
)
from .netlist import NetlistDocument, parse, validate

__all__ = [
    "SCENARIO_NAMES",
    "CALIBRATION_TARGET_DB",
    "CALIBRATION_FREQUENCY_HZ",
    "reference_netlist_text",
    "reference_document",
    "scenario_pipeline",
    "scenario_records",
]

SCENARIO_NAMES = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3")

#: Detected squeezing anchor: noise at this frequency is pinned to this
#: level by pump calibration in every squeezed scenario.
CALIBRATION_TARGET_DB = -2.8
CALIBRATION_FREQUENCY_HZ = 5e6


def reference_netlist_text() -> str:
    return (
        resources.files("sqzsim").joinpath("data/fig1.nl").read_text(encoding="utf-8")
    )


def reference_document() -> NetlistDocument:
    result = parse(reference_netlist_text())
    if result.document is None:  # pragma: no cover - packaged file is valid
        raise RuntimeError(f"reference netlist is invalid: {result.diagnostics}")
    return result.document


def _pipeline_from(doc: NetlistDocument) -> Pipeline:
    result = validate(doc)
    if result.pipeline is None:  # pragma: no cover - derived docs stay valid
        raise RuntimeError(f"derived document is invalid: {result.diagnostics}")
    return result.pipeline


def _without(doc: NetlistDocument, dropped: set[str]) -> NetlistDocument:
    chain = tuple(name for name in doc.chain if name not in dropped)
    signal = doc.signal if doc.signal and doc.signal.node in chain else None
    return replace(doc, chain=chain, signal=signal)


def scenario_pipeline(name: str) -> Pipeline:
    """Pipeline for one scenario, with the pump calibrated on the
    compensated chain (shared squeezer across scenarios)."""
    if name not in SCENARIO_NAMES:
        raise ValueError(
            f"unknown scenario {name!r}; valid names: {', '.join(SCENARIO_NAMES)}"
        )
    doc = reference_document()
    full = _pipeline_from(doc)
    if name == "fig2a":
        return _pipeline_from(replace(doc, chain=doc.chain[-1:], signal=None))
    pump = calibrate_pump(full, CALIBRATION_TARGET_DB, CALIBRATION_FREQUENCY_HZ)
    if name == "fig2b":
        return _pipeline_from(_without(doc, {"fc"})).with_pump(pump)
    if name == "fig2c":
        return _pipeline_from(_without(doc, {"src"})).with_pump(pump)
    return full.with_pump(pump)  # fig2d and fig3


def scenario_records(
    name: str, sweep: SweepConfig = DEFAULT_SWEEP
) -> list[SpectrumRecord]:
    """Run a scenario over the sweep.  fig3 reports the swept-signal SNR;
    the others report noise spectra."""
    pipeline = scenario_pipeline(name)
    if name == "fig3":
        return snr_spectrum(pipeline, sweep.frequencies())
    return noise_spectrum(pipeline, sweep)
