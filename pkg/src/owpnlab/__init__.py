"""owpnlab: numerical laboratory for the oversampled Wiener phase-noise channel.

Capacity bounds, the posterior Fisher-information recursion behind the outer
bound, generalized-degrees-of-freedom regions, and the Monte Carlo machinery
that cross-checks every closed form.
"""

from .bounds import (
    BoundKind,
    BoundResult,
    EULER_MASCHERONI,
    entropy_chi2_lower,
    entropy_noncentral_chi2_upper,
    inverse_second_moment_bound,
    lower_coherent_combining,
    lower_partially_coherent,
    upper_outer,
)
from .gdof import (
    GdofFamily,
    GdofValue,
    NEAR_AWGN_GAP_NATS,
    NEAR_ONC_GAP_NATS,
    Regime,
    channel_at_power,
    classify_regime,
    empirical_prelog,
    gdof_exact_if_known,
    gdof_inner_cc,
    gdof_inner_combined,
    gdof_inner_pc,
    gdof_outer,
    regime_gap_nats,
)
from .mioracle import MiEstimate, amplitude_channel_mi, histogram_mi, phase_channel_mi
from .model import (
    ChannelParams,
    DerivedConstants,
    GdofPoint,
    McEstimate,
    RateSplit,
    Units,
    convert_rate,
    derive_constants,
    per_symbol_power,
)
from .riccati import (
    FisherState,
    crb_argument,
    immse_entropy_quadrature,
    information_recursion_step,
    iterate_fixed_point,
    phase_rate_upper,
    posterior_crb_entropy_lower,
    riccati_fixed_point,
    riccati_step,
)
from .sim import (
    ChannelBlock,
    FMoments,
    PhasePath,
    estimate_F_moments,
    estimate_log_abs_sq,
    sample_phase_path,
    simulate_fading_integral,
    substream,
    transmit,
)

__version__ = "0.1.0"

__all__ = [
    "BoundKind",
    "BoundResult",
    "ChannelBlock",
    "ChannelParams",
    "DerivedConstants",
    "EULER_MASCHERONI",
    "FMoments",
    "FisherState",
    "GdofFamily",
    "GdofPoint",
    "GdofValue",
    "McEstimate",
    "MiEstimate",
    "NEAR_AWGN_GAP_NATS",
    "NEAR_ONC_GAP_NATS",
    "PhasePath",
    "RateSplit",
    "Regime",
    "Units",
    "amplitude_channel_mi",
    "channel_at_power",
    "classify_regime",
    "convert_rate",
    "crb_argument",
    "derive_constants",
    "empirical_prelog",
    "entropy_chi2_lower",
    "entropy_noncentral_chi2_upper",
    "estimate_F_moments",
    "estimate_log_abs_sq",
    "gdof_exact_if_known",
    "gdof_inner_cc",
    "gdof_inner_combined",
    "gdof_inner_pc",
    "gdof_outer",
    "histogram_mi",
    "immse_entropy_quadrature",
    "information_recursion_step",
    "inverse_second_moment_bound",
    "iterate_fixed_point",
    "lower_coherent_combining",
    "lower_partially_coherent",
    "per_symbol_power",
    "phase_channel_mi",
    "phase_rate_upper",
    "posterior_crb_entropy_lower",
    "regime_gap_nats",
    "riccati_fixed_point",
    "riccati_step",
    "sample_phase_path",
    "simulate_fading_integral",
    "substream",
    "transmit",
    "upper_outer",
]
