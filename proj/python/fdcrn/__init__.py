"""Spectrum sensing and primary-user packet loss in half/full-duplex cognitive radio."""

from ._core import (
    DetectorConfig,
    DuplexMode,
    DuplexScenario,
    LinkBudget,
    SelfInterferenceParams,
    SimResult,
    TrafficConfig,
    bessel_i,
    gamma_upper,
    loss_full_duplex,
    loss_half_duplex,
    make_self_interference,
    mixture_cdf,
    mixture_cdf_closed_form,
    ncx2_cdf,
    ncx2_pdf,
    noncentrality_mean,
    placement_error_from_bandwidth,
    pmd_imperfect,
    pmd_perfect,
    residual_noise_psd,
    residual_si_power,
    run_experiment,
    run_replication,
    run_sweep,
    sample_mixture,
    threshold_for_false_alarm,
    vulnerable_window,
)

__all__ = [name for name in dir() if not name.startswith("_")]
