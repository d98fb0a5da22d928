"""Link-level simulation and complexity analysis of turbo bit-interleaved
coded modulation with iterative demapping and signal-space diversity."""

from .channel import AlignedObservation, ChannelObservation, noise_sigma2, transmit
from .constellation import ConstellationTable, build_constellation, map_frame
from .demapper import CaseMode, DemapResult, demap_frame
from .errors import (
    ConfigurationError,
    ContractViolationError,
    FrameFormatError,
    NumericError,
    RetryExhaustedError,
    TbicmError,
)
from .exit_analysis import (
    ExitCurve,
    decoder_transfer,
    gen_apriori,
    j_function,
    j_inverse,
    measure_mi,
    trajectory,
    tunnel_opening,
)
from .interleaving import (
    Permutation,
    PuncturePattern,
    depuncture,
    gen_s_random,
    make_puncture_pattern,
    puncture,
    q_delay,
    q_undelay,
)
from .kernels import backend_name
from .scheduler import BerPoint, LinkSystem, Schedule, parse_schedule, run_ber_campaign
from .trellis import TrellisDef, build_trellis, circulation_state
from .turbo import SisoInput, SisoOutput, TurboDecoder, encode, siso_decode, turbo_decode

__version__ = "0.1.0"
