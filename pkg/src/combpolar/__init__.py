"""Comb-shaping polar codes.

Polar codes whose information indices are confined to a comb-shaping
index set, so the BPSK-modulated codeword has periodic spectral nulls and
can be separated from periodic interference by a comb filter, together
with the constrained construction/decoding that restores the lost
sub-channel reliability, and a baseband link simulator.
"""

from .channel import (
    ChannelProfile,
    CombFilterSpec,
    add_awgn,
    add_periodic_interference,
    comb_filter,
    tone_centers,
)
from .construction import (
    ReliabilityProfile,
    estimate_symmetric_reliability,
    mcsc,
    select_cis_constrained,
    select_conventional,
    select_symmetric,
    select_symmetric_in_cis,
    validate_params,
)
from .decoder import DecodeResult, ccd_decode, channel_llr, sc_decode, scl_decode
from .modem import (
    BasebandSignal,
    PulseSpec,
    bpsk_map,
    demodulate,
    modulate,
    signal_to_csv,
    srrc_taps,
)
from .polar import assemble_source, bit_reversal, encode, generator_entry, generator_matrix
from .shaping import (
    CisSpec,
    CodeConfig,
    cis,
    cis_to_half,
    half_to_cis,
    is_locally_periodic,
    receive_permutation,
)
from .spectral import PsdEstimate, g_window, null_depth, null_set, welch_psd

__version__ = "0.1.0"
