import math

import numpy as np
import pytest

from spin_rwa import ConfigError, FieldConfig, SpinQuantum, StateVector
from spin_rwa.errors import UnknownScenario
from spin_rwa.scenarios import (
    SCENARIO_IDS,
    Scenario,
    all_scenarios,
    builtin_scenario,
    frequency_sweep,
    parse_config,
    parse_probabilities,
    run_scenario,
    scenario_from_mapping,
    with_sampling,
)


def test_scenario_table_covers_all_figures():
    assert len(SCENARIO_IDS) == 24 == len(set(SCENARIO_IDS))
    assert {sid.split("-")[0] for sid in SCENARIO_IDS} == {f"fig{n}" for n in range(1, 9)}
    assert {sid.split("-")[1] for sid in SCENARIO_IDS} == {"top", "middle", "bottom"}


@pytest.mark.parametrize("sid", SCENARIO_IDS)
def test_every_scenario_is_valid(sid):
    sc = builtin_scenario(sid)
    assert sc.ratio == 0.01 and sc.n_periods == 1.0
    assert abs(math.fsum(sc.probabilities) - 1) <= 1e-12
    amps = sc.initial_state().amplitudes
    assert np.all(amps.imag == 0) and np.all(amps.real >= 0)


def test_fig1_top():
    sc = builtin_scenario("fig1-top")
    assert sc.spin == SpinQuantum(1)
    assert sc.probabilities == (1.0, 0.0)
    field = sc.field()
    assert (field.omega0, field.omega1, field.omega) == (1.0, 0.01, 1.0)


def test_fig6_middle():
    sc = builtin_scenario("fig6-middle")
    assert sc.spin == SpinQuantum(4)
    assert sc.probabilities == (0.2,) * 5
    assert sc.field().omega == pytest.approx(1.01, abs=1e-15)


def test_fig8_bottom():
    sc = builtin_scenario("fig8-bottom")
    assert sc.spin == SpinQuantum(9)
    assert sc.probabilities == (0.1,) * 10
    assert sc.field().omega == pytest.approx(1.03, abs=1e-15)


@pytest.mark.parametrize("sid, twice_s, probs", [
    ("fig2-top", 1, (1 / 3, 2 / 3)),
    ("fig3-top", 2, (1 / 3,) * 3),
    ("fig4-top", 2, (1, 0, 0)),
    ("fig5-top", 2, (0, 1, 0)),
    ("fig7-top", 7, (1 / 8,) * 8),
])
def test_caption_initial_conditions(sid, twice_s, probs):
    sc = builtin_scenario(sid)
    assert sc.spin.twice_s == twice_s
    np.testing.assert_allclose(sc.probabilities, probs, atol=1e-16)


@pytest.mark.parametrize("sid", ["fig9-top", "fig1-side", "", "fig1top", "FIG1-top"])
def test_unknown_scenario(sid):
    with pytest.raises(UnknownScenario):
        builtin_scenario(sid)


def test_fig1_top_rabi_curve():
    series = run_scenario(builtin_scenario("fig1-top"))
    np.testing.assert_allclose(series.column(-1), np.sin(np.pi * series.taus) ** 2, atol=1e-10)


def test_fig1_middle_peak():
    series = run_scenario(builtin_scenario("fig1-middle"))
    col = series.column(-1)
    assert col.max() == pytest.approx(0.5, abs=1e-12)
    assert series.taus[np.argmax(col)] == 0.5


def test_fig1_bottom_peak():
    series = run_scenario(builtin_scenario("fig1-bottom"))
    assert series.column(-1).max() == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("sc", all_scenarios(), ids=lambda s: s.name)
def test_scenario_series_qualitative(sc):
    series = run_scenario(sc)
    assert series.probabilities.shape == (201, sc.spin.dimension())
    np.testing.assert_allclose(series.probabilities[0], sc.probabilities, atol=1e-12)
    np.testing.assert_allclose(series.probabilities[-1], series.probabilities[0], atol=1e-10)
    np.testing.assert_allclose(series.row_sums(), 1, atol=1e-12)


def test_with_sampling_overrides():
    sc = with_sampling(builtin_scenario("fig2-top"), samples=7, n_periods=2.0)
    series = run_scenario(sc)
    assert len(series) == 7 and series.taus[-1] == 2.0
    assert with_sampling(sc) is sc


@pytest.mark.parametrize("kwargs", [
    dict(probabilities=(0.5, 0.4)),
    dict(probabilities=(1.0,)),
    dict(probabilities=(1.5, -0.5)),
    dict(probabilities=(1.0, 0.0), samples=1),
    dict(probabilities=(1.0, 0.0), drive="sideways"),
    dict(probabilities=(1.0, 0.0), drive=None),
    dict(probabilities=(1.0, 0.0), omega=1.0),
    dict(probabilities=(1.0, 0.0), ratio=0.0),
    dict(probabilities=(1.0, 0.0), n_periods=0.0),
])
def test_scenario_validation(kwargs):
    with pytest.raises(ConfigError):
        Scenario(name="x", spin=SpinQuantum(1), **kwargs)


def test_explicit_omega_scenario():
    sc = Scenario("custom", SpinQuantum(1), (1.0, 0.0), drive=None, omega=1.02, ratio=0.02)
    field = sc.field()
    assert (field.omega0, field.omega1, field.omega) == (1.0, 0.02, 1.02)
    assert run_scenario(sc).column(-1).max() == pytest.approx(0.5, abs=1e-12)


# config files

def test_parse_config_comments_and_case():
    text = """
    # spin-1 run
    name = demo
    SPIN = 1   # trailing comment
    init = 1/3, 1/3, 1/3
    drive = peak

    samples = 11
    """
    values = parse_config(text)
    assert values == {"name": "demo", "spin": "1", "init": "1/3, 1/3, 1/3",
                      "drive": "peak", "samples": "11"}
    sc = scenario_from_mapping(values)
    assert sc.spin == SpinQuantum(2) and sc.drive == "peak" and sc.samples == 11
    np.testing.assert_allclose(sc.probabilities, [1 / 3] * 3, atol=1e-16)


@pytest.mark.parametrize("text", ["spin 1", "colour = red", "= 3"])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_scenario_from_mapping_defaults_and_errors():
    sc = scenario_from_mapping({"spin": "7/2"})
    assert sc.name == "custom" and sc.drive == "resonance" and sc.probabilities[0] == 1.0
    sc = scenario_from_mapping({"spin": "0.5", "omega": "1.03"})
    assert sc.drive is None and sc.omega == 1.03
    with pytest.raises(ConfigError):
        scenario_from_mapping({"init": "1,0"})
    with pytest.raises(ConfigError):
        scenario_from_mapping({"spin": "1/2", "omega": "fast"})
    with pytest.raises(ConfigError):
        scenario_from_mapping({"spin": "1/2", "samples": "many"})


def test_parse_probabilities_keywords():
    spin = SpinQuantum(3)
    assert parse_probabilities("stretched", spin) == (1.0, 0.0, 0.0, 0.0)
    assert parse_probabilities(" Uniform ", spin) == (0.25,) * 4
    assert parse_probabilities("0.5,1/4,1/8,1/8", spin) == (0.5, 0.25, 0.125, 0.125)
    with pytest.raises(ConfigError):
        parse_probabilities("a,b", spin)


# frequency sweeps

def _lorentzian(omegas, ratio=0.01):
    return ratio ** 2 / ((1 - omegas) ** 2 + ratio ** 2)


def test_sweep_figure_drives():
    spin = SpinQuantum(1)
    up = StateVector.basis(spin, 1)
    profile = frequency_sweep(spin, up, 1.0, 1.03, 4)
    np.testing.assert_allclose(profile.peak_transfer[[0, 1, 3]], [1.0, 0.5, 0.1], atol=1e-9)
    assert profile.target == -1


def test_sweep_lorentzian():
    spin = SpinQuantum(1)
    profile = frequency_sweep(spin, StateVector.basis(spin, 1), 0.95, 1.05, 41)
    np.testing.assert_allclose(profile.peak_transfer, _lorentzian(profile.omegas), atol=1e-6)
    assert np.all((profile.peak_transfer >= 0) & (profile.peak_transfer <= 1))


def test_sweep_threads_match_serial():
    spin = SpinQuantum(4)
    state = StateVector.from_probabilities(spin, [0.2] * 5)
    serial = frequency_sweep(spin, state, 0.97, 1.03, 9)
    threaded = frequency_sweep(spin, state, 0.97, 1.03, 9, workers=4)
    np.testing.assert_array_equal(serial.peak_transfer, threaded.peak_transfer)
    assert serial.target is None
    assert np.all((serial.peak_transfer >= 0) & (serial.peak_transfer <= 1))


def test_sweep_explicit_target_and_lower_stretched():
    spin = SpinQuantum(2)
    down = StateVector.basis(spin, -2)
    assert frequency_sweep(spin, down, 0.99, 1.01, 3).target == 2
    profile = frequency_sweep(spin, StateVector.basis(spin, 2), 0.99, 1.01, 3, target=0)
    assert profile.target == 0
    # p = sin^2(beta) sin^2(pi tau); m=0 population 2p(1-p) peaks at 1/2
    assert profile.peak_transfer[1] == pytest.approx(0.5, abs=1e-3)


def test_sweep_validation():
    spin = SpinQuantum(1)
    with pytest.raises(ValueError):
        frequency_sweep(spin, StateVector.basis(spin, 1), 0.9, 1.1, 1)
    with pytest.raises(ValueError):
        frequency_sweep(spin, StateVector.basis(SpinQuantum(2), 2), 0.9, 1.1, 3)


def test_field_from_drive():
    assert FieldConfig.from_drive("peak", 0.02).omega == pytest.approx(1.02)
    with pytest.raises(ValueError):
        FieldConfig.from_drive("nowhere")
