"""Posterior Fisher-information recursion for tracking a Wiener phase from
noisy observations, its Riccati fixed point, the resulting posterior
Cramer-Rao entropy bound, and an I-MMSE quadrature self-check.

For the phase-tracking problem the score constants are

    D11 = L/sigma2,   D12 = D21 = -L/sigma2,   D22 = E|X|^2 + L/sigma2,

so the information recursion specializes to the scalar Riccati map

    J' = x + r - r^2 / (J + r),      x = E|X|^2,  r = L/sigma2,

whose stationary point J* = x/2 + sqrt(x^2 + 4 r x)/2 is a global attractor.
Only these score constants ship; the general one-step recursion is exposed as
:func:`information_recursion_step` for completeness but no other observation
model is provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChannelParams

LOG_2PI = math.log(2.0 * math.pi)
LOG_2PIE = math.log(2.0 * math.pi * math.e)


@dataclass(frozen=True)
class FisherState:
    """Posterior Fisher information J (rad^-2) together with the two constants
    that drive the recursion: the input second moment and L/sigma2."""

    J: float
    x_mean_sq: float
    l_over_sigma2: float

    def __post_init__(self) -> None:
        if self.J < 0.0:
            raise ValueError("posterior Fisher information must be >= 0")
        if self.x_mean_sq < 0.0:
            raise ValueError("x_mean_sq must be >= 0")
        if self.l_over_sigma2 <= 0.0:
            raise ValueError("l_over_sigma2 must be > 0")


def information_recursion_step(
    J: float, d11: float, d12: float, d21: float, d22: float
) -> float:
    """One step J' = D22 - D21 (J + D11)^{-1} D12 of the scalar information
    recursion for a first-order state-space model."""
    return d22 - d21 * d12 / (J + d11)


def riccati_step(state: FisherState) -> FisherState:
    """Advance the phase-tracking Fisher information by one observation."""
    r = state.l_over_sigma2
    next_j = information_recursion_step(state.J, r, -r, -r, state.x_mean_sq + r)
    return FisherState(next_j, state.x_mean_sq, r)


def riccati_fixed_point(x_mean_sq: float, l_over_sigma2: float) -> float:
    """Stationary solution J* = x/2 + sqrt(x^2 + 4 r x)/2 of the Riccati map."""
    if x_mean_sq < 0.0 or l_over_sigma2 <= 0.0:
        raise ValueError("need x_mean_sq >= 0 and l_over_sigma2 > 0")
    x = x_mean_sq
    return 0.5 * x + 0.5 * math.sqrt(x * x + 4.0 * l_over_sigma2 * x)


def iterate_fixed_point(
    x_mean_sq: float,
    l_over_sigma2: float,
    j0: float = 0.0,
    tol: float = 1e-12,
    max_iter: int = 10**6,
) -> tuple[float, int]:
    """Iterate the Riccati map from `j0` until |J' - J| <= tol (1 + |J'|).

    Returns (J, steps).  The map is a contraction near the fixed point; the
    iteration cap guards against misuse and raises RuntimeError when hit.
    """
    state = FisherState(j0, x_mean_sq, l_over_sigma2)
    for step in range(1, max_iter + 1):
        nxt = riccati_step(state)
        if abs(nxt.J - state.J) <= tol * (1.0 + abs(nxt.J)):
            return nxt.J, step
        state = nxt
    raise RuntimeError(
        f"Riccati iteration did not converge within {max_iter} steps "
        f"(x={x_mean_sq}, r={l_over_sigma2})"
    )


def crb_argument(x_mean_sq: float, l_over_sigma2: float) -> float:
    """The stationary prediction-error scale J* - x = sqrt(x^2 + 4rx)/2 - x/2,
    evaluated in the cancellation-free form 2rx / (sqrt(x^2 + 4rx) + x)."""
    x = x_mean_sq
    r = l_over_sigma2
    if x == 0.0:
        return 0.0
    return 2.0 * r * x / (math.sqrt(x * x + 4.0 * r * x) + x)


def posterior_crb_entropy_lower(x_mean_sq: float, l_over_sigma2: float) -> float:
    """Lower bound on the differential entropy of the phase given the past:

        h >= (1/2) ln(2 pi e) - (1/2) ln(sqrt(x^2 + 4rx)/2 - x/2)   [nats].

    For small l_over_sigma2 the bound exceeds ln(2 pi); the raw value is
    reported either way.
    """
    if x_mean_sq <= 0.0:
        raise ValueError("x_mean_sq must be > 0 (the bound degenerates at 0)")
    if l_over_sigma2 <= 0.0:
        raise ValueError("l_over_sigma2 must be > 0")
    return 0.5 * LOG_2PIE - 0.5 * math.log(crb_argument(x_mean_sq, l_over_sigma2))


def phase_rate_upper(params: ChannelParams) -> float:
    """Upper bound on the phase-modulation rate in nats:

        [ (1/2) ln(2 pi / e) + (1/2) ln( sqrt(P^2/L^2 + 4P/sigma2)/2 - P/(2L) ) ]^+

    This is the phase summand of the capacity outer bound, exposed separately
    for asymptotic-exponent analysis.  Requires sigma2 > 0.
    """
    if params.freq_noise_var <= 0.0:
        raise ValueError("phase_rate_upper needs sigma2 > 0 (the argument diverges at 0)")
    p = params.avg_power
    if p == 0.0:
        return 0.0
    arg = crb_argument(p / params.oversampling, params.oversampling / params.freq_noise_var)
    return max(0.5 * math.log(2.0 * math.pi / math.e) + 0.5 * math.log(arg), 0.0)


def immse_entropy_quadrature(
    prior_std: float, n_grid: int = 100_000, rho_max: float = 1e6
) -> float:
    """Gaussian-prior self-check of the I-MMSE entropy identity.

    Numerically evaluates

        (1/2) int_0^rho_max ( s/(1 + s rho) - 1/(2 pi e + rho) ) d rho,

    with s = prior_std^2 and the Gaussian mmse s/(1+s rho), on a log-spaced
    grid, plus the analytic 1/rho^2 tail correction (2 pi e - 1/s)/(2 rho_max).
    The exact value is h(N(0, s)) = (1/2) ln(2 pi e s).
    """
    if prior_std <= 0.0:
        raise ValueError("prior_std must be > 0")
    if n_grid < 10:
        raise ValueError(f"n_grid must be >= 10, got {n_grid}")
    if rho_max <= 1.0:
        raise ValueError("rho_max must be > 1")
    s = prior_std * prior_std
    rho = np.concatenate(([0.0], np.logspace(-8.0, math.log10(rho_max), n_grid - 1)))
    integrand = s / (1.0 + s * rho) - 1.0 / (2.0 * math.pi * math.e + rho)
    body = 0.5 * float(np.trapezoid(integrand, rho))
    tail = 0.5 * (2.0 * math.pi * math.e - 1.0 / s) / rho_max
    return body + tail
