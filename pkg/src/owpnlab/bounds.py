"""Closed-form capacity bounds for the OWPN channel, plus the entropy and
moment inequalities that support them.

Three bounds, all in nats per channel use:

  upper_outer
      min{ ln(P+2),  (1/2) ln(P+1) + [ (1/2) ln(2pi/e)
           + (1/2) ln( sqrt(P^2/L^2 + 4P/sigma2)/2 - P/(2L) ) ]^+ }

  lower_partially_coherent  (norm combining for amplitude, two adjacent
  samples for phase)
      amp   = (1/2) ln( (e^2 (P+2)^2 + 8 pi (L-1)) / (8 pi e (L+P)) )
      phase = (1/2) [ ln( (2 pi / e^{1+g}) P L / (sigma2 P + pi^2 L^2) ) ]^+

  lower_coherent_combining  (coherent sum of all L samples; kappa/phi from
  model.derive_constants)
      amp   = [ [ln(phi^2/3) + ln(P/2+1)]^+ + (1/2) ln(e/pi)
                - (1/2) ln( 2(1+P phi) + P^2 (1-phi^2) ) ]^+
      phase = (1/2) ln(2 pi / e^{1+g})
              + (1/2) ln( 2LP / (2 sigma2 P + pi^2 (1-kappa) L P
                                 + 6 pi^2 L phi^{-3/2}) )

with g the Euler-Mascheroni constant.  Per-term values are reported raw
(they may be negative where the formula carries no clamp); only totals are
clamped at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import ChannelParams, RateSplit, derive_constants
from .riccati import crb_argument

EULER_MASCHERONI = 0.57721566490153286061

_LOG_2PI_OVER_E = math.log(2.0 * math.pi / math.e)
_LOG_PHASE_CONST = math.log(2.0 * math.pi) - (1.0 + EULER_MASCHERONI)  # ln(2pi/e^{1+g})


class BoundKind(str, Enum):
    UPPER_OUTER = "upper-outer"
    LOWER_PARTIALLY_COHERENT = "lower-partially-coherent"
    LOWER_COHERENT_COMBINING = "lower-coherent-combining"


@dataclass(frozen=True)
class BoundResult:
    """A bound evaluation: the clamped total in nats plus its raw rate split."""

    kind: BoundKind
    params: ChannelParams
    rate_split: RateSplit
    total: float
    note: str = ""


def upper_outer(params: ChannelParams) -> BoundResult:
    """Capacity outer bound; the min of a power-only branch and an
    amplitude+phase branch whose phase summand comes from the stationary
    posterior Fisher information.

    At sigma2 == 0 the phase summand diverges, so the power-only branch
    ln(P+2) is returned with the note "sigma-zero-limit".
    """
    p = params.avg_power
    branch_power = math.log(p + 2.0)
    if params.freq_noise_var == 0.0:
        return BoundResult(
            BoundKind.UPPER_OUTER,
            params,
            RateSplit(branch_power, 0.0),
            branch_power,
            note="sigma-zero-limit",
        )
    amplitude = 0.5 * math.log(p + 1.0)
    arg = crb_argument(p / params.oversampling, params.oversampling / params.freq_noise_var)
    if arg > 0.0:
        phase = max(0.5 * _LOG_2PI_OVER_E + 0.5 * math.log(arg), 0.0)
    else:
        phase = 0.0
    total = min(branch_power, amplitude + phase)
    return BoundResult(BoundKind.UPPER_OUTER, params, RateSplit(amplitude, phase), total)


def lower_partially_coherent(params: ChannelParams) -> BoundResult:
    """Achievable-rate lower bound for norm-based amplitude detection plus
    two-sample phase detection, under CN(0, P/L) inputs."""
    p = params.avg_power
    big_l = params.oversampling
    s2 = params.freq_noise_var
    amplitude = 0.5 * math.log(
        (math.e**2 * (p + 2.0) ** 2 + 8.0 * math.pi * (big_l - 1.0))
        / (8.0 * math.pi * math.e * (big_l + p))
    )
    if p == 0.0:
        phase = 0.0
    else:
        # separated logs: p*L can underflow for subnormal p
        phase = 0.5 * max(
            _LOG_PHASE_CONST
            + math.log(p)
            + math.log(big_l)
            - math.log(s2 * p + math.pi**2 * big_l * big_l),
            0.0,
        )
    split = RateSplit(amplitude, phase)
    return BoundResult(BoundKind.LOWER_PARTIALLY_COHERENT, params, split, split.clamped_total)


def lower_coherent_combining(params: ChannelParams) -> BoundResult:
    """Achievable-rate lower bound when all L samples are summed coherently
    before amplitude and phase detection.

    The phase term carries no clamp of its own and goes to -inf as
    sigma2 -> inf (coherent combining is destroyed); only the total is
    clamped.  P == 0 degenerates the phase statistic, so the phase term is
    reported as 0 there.
    """
    p = params.avg_power
    big_l = params.oversampling
    s2 = params.freq_noise_var
    _, kappa, phi = derive_constants(params)
    amplitude = max(
        max(math.log(phi * phi / 3.0) + math.log(p / 2.0 + 1.0), 0.0)
        + 0.5 * math.log(math.e / math.pi)
        - 0.5 * math.log(2.0 * (1.0 + p * phi) + p * p * (1.0 - phi * phi)),
        0.0,
    )
    if p == 0.0:
        phase = 0.0
    else:
        denom = (
            2.0 * s2 * p
            + math.pi**2 * (1.0 - kappa) * big_l * p
            + 6.0 * math.pi**2 * big_l * phi**-1.5
        )
        # separated logs: 2*L*p can underflow for subnormal p
        phase = 0.5 * _LOG_PHASE_CONST + 0.5 * (
            math.log(2.0) + math.log(big_l) + math.log(p) - math.log(denom)
        )
    split = RateSplit(amplitude, phase)
    return BoundResult(BoundKind.LOWER_COHERENT_COMBINING, params, split, split.clamped_total)


def entropy_chi2_lower(k: int) -> float:
    """Lower bound (1/2) ln(8 pi k) on the differential entropy of a
    chi-squared variable with 2k degrees of freedom, in nats."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k}")
    return 0.5 * math.log(8.0 * math.pi * k)


def entropy_noncentral_chi2_upper(k: int, lam: float) -> float:
    """Upper bound (1/2) ln(8 pi e (k + lambda)) on the differential entropy
    of a noncentral chi-squared variable with 2k degrees of freedom and
    noncentrality lambda (Gaussian max-entropy argument), in nats."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k}")
    if lam < 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return 0.5 * math.log(8.0 * math.pi * math.e * (k + lam))


def inverse_second_moment_bound(m4: float) -> float:
    """The fourth-moment bound 2 m4^{-3/4} + m4^{-1/4} used to control
    E[Z^-2] for a magnitude Z in [0, 1] with E[Z^4] = m4.

    Valid plug-in for the coherent-sum analysis; note that for magnitudes
    with a second-order zero of positive density the raw inverse moment is
    infinite and only the logarithmic consequence E[ln Z^2] >= ln(m2^2/3)
    remains informative.
    """
    if not 0.0 < m4 <= 1.0:
        raise ValueError(f"m4 must lie in (0, 1], got {m4}")
    return 2.0 * m4**-0.75 + m4**-0.25
