"""Zero-padded AFDM over doubly selective channels with a FoA-domain one-tap equalizer."""

from ._accel import USE_NUMBA
from .analysis import EffectiveMatrix, build_matrix, brute_matrix
from .baselines import OfdmConfig, lmmse_affine, matched_block_config, ofdm_chain, scfde_chain
from .channel import (
    ChannelRealization,
    PathSpec,
    add_awgn,
    apply_channel,
    draw_realization,
    eva_profile,
    fig3_channel,
)
from .harness import BerRecord, SweepSpec, efficiency_report, run_point, run_sweep
from .params import AfdmConfig, ConfigError, build_config, efficiency, load_config, select_params
from .transforms import ChirpParams, daft, dft, idaft, idft, kappa
from .zp_afdm import (
    demap,
    demodulate,
    equalize,
    foa,
    foa_diag,
    interference_power,
    map_bits,
    modulate,
    one_tap_equalize,
    reconstruct,
    recover,
    transmit,
    zero_pad,
)

__version__ = "0.1.0"
