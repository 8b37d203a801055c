import csv
import io
import math

import pytest

import fdcrn


def test_special_functions():
    assert fdcrn.gamma_upper(1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert fdcrn.bessel_i(0, 0.0) == 1.0
    assert fdcrn.ncx2_pdf(1, 0.0, 2.0) == pytest.approx(0.5 * math.exp(-1.0), rel=1e-14)
    assert fdcrn.ncx2_cdf(5, 4.0, 0.0) == 0.0
    assert fdcrn.mixture_cdf(5, 10.0, 8.0) == pytest.approx(
        fdcrn.mixture_cdf_closed_form(5, 10.0, 8.0), abs=1e-10)


def test_sampling_is_seeded():
    a = fdcrn.sample_mixture(5, 10.0, 1000, seed=3)
    b = fdcrn.sample_mixture(5, 10.0, 1000, seed=3)
    assert a == b
    assert len(a) == 1000
    assert min(a) >= 0.0


def test_detector_and_interference():
    beta = fdcrn.threshold_for_false_alarm(5, 0.1)
    assert beta == pytest.approx(15.987, rel=1e-4)
    perfect = fdcrn.pmd_perfect(fdcrn.DetectorConfig(5, beta, 1000.0))
    assert 0.0 <= perfect < 1e-2

    link = fdcrn.LinkBudget(-40.0, -70.0, -100.0)
    params = fdcrn.make_self_interference(link, 0.1, 1e-3)
    assert fdcrn.residual_noise_psd(params, link) == pytest.approx(
        fdcrn.residual_si_power(params) / 1000.0)
    assert fdcrn.noncentrality_mean(link, 0.0) == pytest.approx(1000.0)
    assert fdcrn.pmd_imperfect(5, beta, params, link) >= fdcrn.pmd_perfect(
        fdcrn.DetectorConfig(5, beta, 500.0))
    assert fdcrn.placement_error_from_bandwidth(2.48e9, 0.0) == 0.0


def test_losses_and_simulation():
    traffic = fdcrn.TrafficConfig()
    traffic.horizon_s = 20.0
    assert fdcrn.vulnerable_window(traffic) == pytest.approx(0.05)
    assert fdcrn.loss_full_duplex(0.25) == 0.25
    assert fdcrn.loss_half_duplex(traffic, 0.0) == pytest.approx(0.25)

    scenario = fdcrn.DuplexScenario(fdcrn.DuplexMode.FullDuplexPerfect, 0.2)
    first = fdcrn.run_experiment(traffic, scenario, 4, 11)
    again = fdcrn.run_experiment(traffic, scenario, 4, 11)
    assert first.pu_loss_rate == again.pu_loss_rate
    assert first.replication_count == 4
    assert first.pu_packets_offered == first.pu_packets_lost + first.pu_packets_delivered

    single = fdcrn.run_replication(traffic, scenario, 5)
    assert 0.0 <= single.pu_loss_rate <= 1.0


def test_sweep_returns_csv():
    text = fdcrn.run_sweep("horizon_s = 5\nreplications = 2\n",
                           {"snr_db": "0,30", "modes": "half,full"})
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4
    assert list(rows[0]) == ["snr_db", "mode", "variant", "p_md", "loss_analytic",
                             "loss_sim_mean", "loss_sim_ci95", "replications", "seed"]
    assert {r["mode"] for r in rows} == {"half", "full"}


def test_bad_config_raises():
    with pytest.raises(ValueError):
        fdcrn.run_sweep("", {"lambda_p": "fast"})
    with pytest.raises(ValueError):
        fdcrn.pmd_perfect(fdcrn.DetectorConfig(1, 1.0, 1.0))
