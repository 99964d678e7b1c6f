"""Fading models: moments, determinism, parameter handling."""

import math

import numpy as np
import pytest

from fsaloha import ChannelModel, ChannelSpec, ProtocolConfig, channel_model, draw_gain, draw_gains


def test_channel_model_from_config():
    model = channel_model(ProtocolConfig(snr_db=20.0))
    assert model.kind == "rayleigh"
    assert model.mean_power == pytest.approx(100.0)
    model = channel_model(ProtocolConfig(snr_db=10.0, channel=ChannelSpec("rician", k_factor_db=6.0)))
    assert model.kind == "rician"
    assert model.mean_power == pytest.approx(10.0)
    assert model.k_factor_db == 6.0


def test_channel_model_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ChannelModel("awgn", 100.0)
    with pytest.raises(ValueError):
        ChannelModel("rayleigh", 0.0)
    with pytest.raises(ValueError):
        ChannelModel("rayleigh", float("inf"))


def test_rayleigh_moments():
    model = ChannelModel("rayleigh", 100.0)
    rng = np.random.default_rng(1)
    g = draw_gains(model, rng, 200_000)
    assert g.min() > 0
    # exponential power: mean = mean_power, var = mean_power^2
    assert g.mean() == pytest.approx(100.0, rel=0.02)
    assert g.var() == pytest.approx(100.0**2, rel=0.05)


def test_rician_moments():
    k_db = 3.0
    model = ChannelModel("rician", 100.0, k_factor_db=k_db)
    rng = np.random.default_rng(2)
    g = draw_gains(model, rng, 200_000)
    assert g.min() > 0
    k_lin = 10.0 ** (k_db / 10.0)
    var_theory = 100.0**2 * (1.0 + 2.0 * k_lin) / (1.0 + k_lin) ** 2
    assert g.mean() == pytest.approx(100.0, rel=0.02)
    assert g.var() == pytest.approx(var_theory, rel=0.05)


def test_rician_strong_los_limit():
    # at a 60 dB K-factor the draw is essentially the line-of-sight power
    model = ChannelModel("rician", 100.0, k_factor_db=60.0)
    rng = np.random.default_rng(3)
    g = draw_gains(model, rng, 50_000)
    assert g.mean() == pytest.approx(100.0, rel=0.01)
    assert g.std() / g.mean() < 0.01


def test_rician_spread_below_rayleigh():
    # same mean power, but the line-of-sight component shrinks the spread
    ray = ChannelModel("rayleigh", 100.0)
    ric = ChannelModel("rician", 100.0, k_factor_db=3.0)
    rng = np.random.default_rng(4)
    g_ray = draw_gains(ray, rng, 100_000)
    g_ric = draw_gains(ric, rng, 100_000)
    assert g_ric.var() < g_ray.var()


def test_draws_are_deterministic_per_seed():
    model = ChannelModel("rician", 100.0)
    a = draw_gains(model, np.random.default_rng(9), 64)
    b = draw_gains(model, np.random.default_rng(9), 64)
    assert np.array_equal(a, b)


def test_draw_gain_is_head_of_the_stream():
    for kind in ("rayleigh", "rician"):
        model = ChannelModel(kind, 100.0)
        single = draw_gain(model, np.random.default_rng(7))
        vector = draw_gains(model, np.random.default_rng(7), 1)
        assert single == vector[0]
        assert isinstance(single, float)


def test_mean_power_scales_linearly():
    rng_a = np.random.default_rng(5)
    rng_b = np.random.default_rng(5)
    small = draw_gains(ChannelModel("rayleigh", 1.0), rng_a, 1000)
    large = draw_gains(ChannelModel("rayleigh", 4.0), rng_b, 1000)
    assert np.allclose(4.0 * small, large)
