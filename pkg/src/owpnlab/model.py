"""Channel configuration and shared value types for the oversampled Wiener
phase-noise (OWPN) channel.

The channel is parameterized by the average power budget ``P``, the number of
receiver samples per transmitted symbol ``L``, and the per-symbol frequency
noise variance ``sigma2`` (rad^2).  Everything downstream -- simulators,
capacity bounds, Fisher recursions, asymptotic exponents -- consumes the
:class:`ChannelParams` triple and the coherence constants produced by
:func:`derive_constants`.

All rates are handled internally in nats; bit values are a presentation-layer
conversion only (:func:`convert_rate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

LN2 = math.log(2.0)

# Below this value of sigma2/2 the closed form for phi cancels catastrophically
# (error ~1e-16/(sigma2/2)); the exact power series takes over there.
_PHI_SERIES_CUTOFF = 0.5
_PHI_SERIES_TERMS = 24


class Units(str, Enum):
    """Output unit for rates; nats is the internal base."""

    NATS = "nats"
    BITS = "bits"


def convert_rate(value_nats: float, units: Units) -> float:
    """Convert a rate from nats to the requested unit (identity for nats)."""
    if units is Units.BITS:
        return value_nats / LN2
    return value_nats


@dataclass(frozen=True)
class ChannelParams:
    """The (P, L, sigma2) triple that fixes one OWPN channel instance.

    avg_power:      average power budget P >= 0 over a whole symbol interval
                    (the per-sample budget is P/L, see :func:`per_symbol_power`).
    oversampling:   number of receiver samples per symbol, integer L >= 1.
    freq_noise_var: per-symbol variance sigma2 >= 0 of the Wiener phase
                    increments; the per-sample increment variance is sigma2/L.
    """

    avg_power: float
    oversampling: int
    freq_noise_var: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.avg_power) and self.avg_power >= 0.0):
            raise ValueError(f"avg_power must be finite and >= 0, got {self.avg_power}")
        if int(self.oversampling) != self.oversampling or self.oversampling < 1:
            raise ValueError(f"oversampling must be an integer >= 1, got {self.oversampling}")
        if not (math.isfinite(self.freq_noise_var) and self.freq_noise_var >= 0.0):
            raise ValueError(
                f"freq_noise_var must be finite and >= 0, got {self.freq_noise_var}"
            )
        object.__setattr__(self, "oversampling", int(self.oversampling))

    @property
    def xi(self) -> float:
        """Per-sample coherence factor exp(-sigma2/(2L)); equals 1 iff sigma2 == 0."""
        if self.freq_noise_var == 0.0:
            return 1.0
        return math.exp(-self.freq_noise_var / (2.0 * self.oversampling))


def per_symbol_power(params: ChannelParams) -> float:
    """Per-sample input power budget P/L implied by the average power constraint."""
    return params.avg_power / params.oversampling


class DerivedConstants(NamedTuple):
    xi: float
    kappa: float
    phi: float


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    # B_m with the B_1 = +1/2 convention, exact rationals.
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(1, 2)
    if m % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for j in range(m):
        bj = Fraction(-1, 2) if j == 1 else _bernoulli(j)
        acc += math.comb(m + 1, j) * bj
    return -acc / (m + 1)


@lru_cache(maxsize=None)
def _power_sum(m: int, n: int) -> Fraction:
    # sum_{d=1}^{n} d^m via Faulhaber's formula, exact for any integer n.
    acc = Fraction(0)
    for j in range(m + 1):
        acc += math.comb(m + 1, j) * _bernoulli(j) * Fraction(n) ** (m + 1 - j)
    return acc / (m + 1)


@lru_cache(maxsize=None)
def _phi_series_coeff(j: int, oversampling: int) -> float:
    # Coefficient of (sigma2/2)^j / j! in the exact expansion of phi:
    # 2(L*S_j(L-1) - S_{j+1}(L-1)) / L^(j+2), computed as an exact rational.
    big_l = int(oversampling)
    u_j = 2 * (big_l * _power_sum(j, big_l - 1) - _power_sum(j + 1, big_l - 1))
    return float(u_j / Fraction(big_l) ** (j + 2))


def _phi_series(half_sigma2: float, oversampling: int) -> float:
    total = 1.0
    factorial = 1.0
    power = 1.0
    for j in range(1, _PHI_SERIES_TERMS):
        factorial *= j
        power *= -half_sigma2
        total += power / factorial * _phi_series_coeff(j, oversampling)
    return total


def _phi_closed(half_sigma2: float, oversampling: int) -> float:
    big_l = oversampling
    step = half_sigma2 / big_l
    xi = math.exp(-step)
    one_minus_xi = -math.expm1(-step)
    one_minus_xi_l = -math.expm1(-half_sigma2)
    inner = one_minus_xi_l - big_l * one_minus_xi
    return (big_l - 2.0 * xi * inner / (one_minus_xi * one_minus_xi)) / (big_l * big_l)


def derive_constants(params: ChannelParams) -> DerivedConstants:
    """Coherence constants of the normalized coherent sum of phase rotations.

    With F = (1/L) sum_{i=1..L} exp(j(Theta_i - Theta_1)):

      xi    = exp(-sigma2/(2L)),  the one-step coherence factor;
      kappa = E[F]               = (1/L)(1 - xi^L)/(1 - xi);
      phi   = E[|F|^2]           = (1/L^2)(L - 2 xi (L(xi-1) - xi^L + 1)/(1-xi)^2)
                                 = (1/L^2) sum_{i,k} xi^{|i-k|}.

    The sigma2 == 0 case is the analytic limit kappa = phi = 1 (a removable
    singularity, never evaluated by division).  All three lie in [0, 1].
    phi is evaluated through a series/closed-form hybrid that keeps ~1e-15
    relative accuracy for every L >= 1, including L ~ 1e9.
    """
    big_l = params.oversampling
    sigma2 = params.freq_noise_var
    if sigma2 == 0.0 or big_l == 1:
        return DerivedConstants(params.xi, 1.0, 1.0)

    step = sigma2 / (2.0 * big_l)
    xi = math.exp(-step)
    one_minus_xi = -math.expm1(-step)
    one_minus_xi_l = -math.expm1(-sigma2 / 2.0)
    kappa = one_minus_xi_l / (big_l * one_minus_xi)

    half = sigma2 / 2.0
    if half <= _PHI_SERIES_CUTOFF:
        phi = _phi_series(half, big_l)
    else:
        phi = _phi_closed(half, big_l)
    return DerivedConstants(xi, min(kappa, 1.0), min(phi, 1.0))


@dataclass(frozen=True)
class RateSplit:
    """Amplitude-rate / phase-rate pair in nats per channel use.

    Individual terms may be negative where the underlying formula carries no
    clamp; only the total is clamped at zero.
    """

    amplitude_rate: float
    phase_rate: float

    @property
    def clamped_total(self) -> float:
        return max(self.amplitude_rate + self.phase_rate, 0.0)


@dataclass(frozen=True)
class GdofPoint:
    """Exponent pair: L = floor(P^alpha) samples, sigma2 = P^beta noise."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate: mean, standard error, sample count, seed.

    std_error is the sample standard deviation over sqrt(n_samples); the same
    (seed, n_samples, chunking) always reproduces the mean bit for bit.
    """

    mean: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        if self.std_error < 0.0:
            raise ValueError("std_error must be >= 0")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
