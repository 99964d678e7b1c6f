"""Fading models in the power domain.

Only the received power |g|^2 matters to the SINR receiver abstraction, so
draws return powers directly. Both models are normalised to the requested
mean power; the Rician draw synthesises a fixed-magnitude line-of-sight
component with uniform phase plus circular complex Gaussian scatter.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import CHANNEL_KINDS, ChannelSpec, ProtocolConfig


@dataclass(frozen=True)
class ChannelModel:
    """Materialised fading model: kind plus mean received power."""

    kind: str  # "rayleigh" | "rician"
    mean_power: float
    k_factor_db: float = 3.0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not (math.isfinite(self.mean_power) and self.mean_power > 0):
            raise ValueError("mean_power must be positive")


def channel_model(cfg: ProtocolConfig) -> ChannelModel:
    """Build the ChannelModel implied by a protocol config (noise floor = 1)."""
    return ChannelModel(cfg.channel.kind, cfg.mean_power, cfg.channel.k_factor_db)


def draw_gains(model: ChannelModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` independent received powers from the model.

    Rayleigh: mean_power times a unit-mean exponential.
    Rician: |sqrt(K/(K+1)) * sqrt(mean_power) * e^{j theta} + CN(0, mean_power/(K+1))|^2
    with K the linear K-factor and theta uniform on [0, 2 pi).
    """
    if model.kind == "rayleigh":
        return model.mean_power * rng.standard_exponential(n)
    k_lin = 10.0 ** (model.k_factor_db / 10.0)
    los_amp = math.sqrt(model.mean_power * k_lin / (k_lin + 1.0))
    scatter_sigma = math.sqrt(model.mean_power / (k_lin + 1.0) / 2.0)  # per real dimension
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    re = los_amp * np.cos(theta) + rng.normal(0.0, scatter_sigma, n)
    im = los_amp * np.sin(theta) + rng.normal(0.0, scatter_sigma, n)
    return re * re + im * im


def draw_gain(model: ChannelModel, rng: np.random.Generator) -> float:
    """Draw a single received power (same stream as draw_gains with n=1)."""
    return float(draw_gains(model, rng, 1)[0])
