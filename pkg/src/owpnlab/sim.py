"""Sampling machinery for the OWPN channel and the Monte Carlo estimators
used to cross-check every closed-form constant.

Randomness discipline: a master seed names a family of independent substreams
via ``SeedSequence(seed, spawn_key=(index,))``.  Monte Carlo estimators split
their sample budget into fixed-size chunks, draw chunk ``i`` from substream
``i``, and reduce partial sums in ascending chunk order -- so results are
bit-reproducible for a given (seed, n_samples) regardless of how the chunks
would be scheduled.

Samples are never recombined to a coarser sampling grid: the discrete channel
law drops the intra-sample fading information such recombining would need, so
a "resample to smaller L" helper would be unsound and is deliberately absent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import ChannelParams, McEstimate, per_symbol_power

TWO_PI = 2.0 * math.pi

# Per-chunk element budget; rows per chunk shrink as the row width grows so
# memory stays bounded.  Chunk geometry is part of the reproducibility key.
_CHUNK_ELEMENTS = 1 << 20
_MIN_SAMPLES = 1_000


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for chunk `index` of master seed `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _chunk_rows(row_width: int) -> int:
    return max(1, _CHUNK_ELEMENTS // max(row_width, 1))


class _Accumulator:
    """Running sum / sum-of-squares reduced in a fixed order."""

    def __init__(self) -> None:
        self.s1 = 0.0
        self.s2 = 0.0
        self.n = 0

    def add(self, values: np.ndarray) -> None:
        self.s1 += float(np.sum(values))
        self.s2 += float(np.sum(values * values))
        self.n += values.size

    def estimate(self, seed: int) -> McEstimate:
        mean = self.s1 / self.n
        var = max(self.s2 / self.n - mean * mean, 0.0)
        return McEstimate(mean, math.sqrt(var / self.n), self.n, seed)


@dataclass(frozen=True)
class PhasePath:
    """A Wiener phase trajectory: theta[0] uniform on [0, 2pi), increments
    i.i.d. N(0, sigma2/L).  Length is n_symbols * L + 1."""

    theta: np.ndarray
    sigma2: float
    oversampling: int


@dataclass(frozen=True)
class ChannelBlock:
    """Inputs (length M) and channel outputs (length M*L); the additive noise
    is CN(0, 2), i.e. unit variance per real dimension."""

    inputs: np.ndarray
    outputs: np.ndarray


def sample_phase_path(params: ChannelParams, n_symbols: int, rng_seed: int) -> PhasePath:
    """Draw one phase trajectory covering `n_symbols` symbol intervals."""
    if n_symbols < 1:
        raise ValueError(f"n_symbols must be >= 1, got {n_symbols}")
    big_l = params.oversampling
    rng = substream(rng_seed, 0)
    theta0 = rng.uniform(0.0, TWO_PI)
    increments = rng.normal(
        0.0, math.sqrt(params.freq_noise_var / big_l), size=n_symbols * big_l
    )
    theta = np.empty(n_symbols * big_l + 1)
    theta[0] = theta0
    np.cumsum(increments, out=theta[1:])
    theta[1:] += theta0
    return PhasePath(theta, params.freq_noise_var, big_l)


def transmit(
    params: ChannelParams,
    inputs: np.ndarray,
    path: PhasePath,
    rng_seed: int,
    noise: np.ndarray | None = None,
) -> ChannelBlock:
    """Push a symbol sequence through the channel: Y_n = X_{ceil(n/L)} e^{j Theta_n} + W_n.

    Inputs violating the per-sample power budget P/L are allowed but warned
    about (verification probes must be free to go off-constraint).  `noise`
    overrides the CN(0, 2) additive noise draw, for deterministic injection.
    """
    inputs = np.asarray(inputs, dtype=np.complex128)
    big_l = params.oversampling
    n_out = inputs.size * big_l
    if path.theta.size != n_out + 1:
        raise ValueError(
            f"path length {path.theta.size} does not match {inputs.size} symbols at L={big_l}"
        )
    mean_power = float(np.mean(np.abs(inputs) ** 2)) if inputs.size else 0.0
    budget = per_symbol_power(params)
    if mean_power > budget * (1.0 + 1e-9) + 1e-300:
        warnings.warn(
            f"input power {mean_power:.6g} exceeds the per-sample budget {budget:.6g}",
            RuntimeWarning,
            stacklevel=2,
        )
    if noise is None:
        rng = substream(rng_seed, 0)
        noise = rng.standard_normal(n_out) + 1j * rng.standard_normal(n_out)
    else:
        noise = np.asarray(noise, dtype=np.complex128)
        if noise.size != n_out:
            raise ValueError(f"noise length {noise.size} != {n_out}")
    upsampled = np.repeat(inputs, big_l)
    outputs = upsampled * np.exp(1j * path.theta[1:]) + noise
    return ChannelBlock(inputs, outputs)


class FMoments(NamedTuple):
    m2: McEstimate
    m4: McEstimate
    mean_real: McEstimate


def estimate_F_moments(params: ChannelParams, n_samples: int, rng_seed: int) -> FMoments:
    """Monte Carlo moments of the coherent sum F = (1/L) sum_i e^{j(Theta_i - Theta_1)}.

    Returns estimates of E|F|^2, E|F|^4 and E[Re F] over fresh phase paths;
    the first two target phi, the last targets kappa.
    """
    if n_samples < _MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {_MIN_SAMPLES}, got {n_samples}")
    big_l = params.oversampling
    scale = math.sqrt(params.freq_noise_var / big_l)
    acc_m2, acc_m4, acc_re = _Accumulator(), _Accumulator(), _Accumulator()
    rows = _chunk_rows(big_l)
    done = 0
    chunk = 0
    while done < n_samples:
        m = min(rows, n_samples - done)
        rng = substream(rng_seed, chunk)
        increments = rng.normal(0.0, scale, size=(m, big_l - 1))
        rel = np.empty((m, big_l))
        rel[:, 0] = 0.0
        np.cumsum(increments, axis=1, out=rel[:, 1:])
        f = np.mean(np.exp(1j * rel), axis=1)
        mag2 = np.abs(f) ** 2
        acc_m2.add(mag2)
        acc_m4.add(mag2 * mag2)
        acc_re.add(f.real)
        done += m
        chunk += 1
    return FMoments(
        acc_m2.estimate(rng_seed), acc_m4.estimate(rng_seed), acc_re.estimate(rng_seed)
    )


def simulate_fading_integral(
    sigma2_over_L: float,
    n_time_steps: int,
    n_samples: int,
    rng_seed: int,
) -> tuple[McEstimate, McEstimate]:
    """Estimate E[F_n] for the continuous-time fading integral
    F_n = int_0^1 exp(j sqrt(sigma2/L) B(t)) dt over a standard Wiener path.

    Discretized by a left-endpoint Riemann sum on `n_time_steps` points; the
    bias is O(1/n_time_steps).  Returns (real part, imaginary part) estimates;
    the analytic targets are (2L/sigma2)(1 - exp(-sigma2/(2L))) and 0.
    """
    if n_time_steps < 2:
        raise ValueError(f"n_time_steps must be >= 2, got {n_time_steps}")
    if sigma2_over_L < 0.0:
        raise ValueError("sigma2_over_L must be >= 0")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    amp = math.sqrt(sigma2_over_L)
    step_std = math.sqrt(1.0 / n_time_steps)
    acc_re, acc_im = _Accumulator(), _Accumulator()
    rows = _chunk_rows(n_time_steps)
    done = 0
    chunk = 0
    while done < n_samples:
        m = min(rows, n_samples - done)
        rng = substream(rng_seed, chunk)
        increments = rng.normal(0.0, step_std, size=(m, n_time_steps - 1))
        bridge = np.empty((m, n_time_steps))
        bridge[:, 0] = 0.0
        np.cumsum(increments, axis=1, out=bridge[:, 1:])
        f = np.mean(np.exp(1j * amp * bridge), axis=1)
        acc_re.add(f.real)
        acc_im.add(f.imag)
        done += m
        chunk += 1
    return acc_re.estimate(rng_seed), acc_im.estimate(rng_seed)


def estimate_log_abs_sq(power: float, n_samples: int, rng_seed: int) -> McEstimate:
    """Monte Carlo estimate of E[ln |X|^2] for X ~ CN(0, power).

    The analytic value is ln(power) - gamma with gamma the Euler-Mascheroni
    constant.
    """
    if power <= 0.0:
        raise ValueError(f"power must be > 0, got {power}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    acc = _Accumulator()
    rows = _chunk_rows(2)
    done = 0
    chunk = 0
    half = math.sqrt(power / 2.0)
    while done < n_samples:
        m = min(rows, n_samples - done)
        rng = substream(rng_seed, chunk)
        re = rng.standard_normal(m) * half
        im = rng.standard_normal(m) * half
        acc.add(np.log(re * re + im * im))
        done += m
        chunk += 1
    return acc.estimate(rng_seed)
