"""Capacity bounds and GDOF for the symmetric SIMO Gaussian interference channel.

Rates are in bits (base-2 logarithms) throughout.
"""

from .bounds import (
    corollary_conditions,
    many_to_one_bound,
    many_to_one_symmetric,
    new_outer_bound,
    noise_scales,
    outer_components,
    outer_symmetric,
    pair_genie_bound,
    single_user_bound,
    strong_mac_outer,
    symmetric_new_bound,
    two_user_bound,
    two_user_min,
)
from .channel import (
    GeneralSimoChannel,
    GramSpec3,
    SymmetricSimoChannel,
    channel_from_json,
    channel_to_json,
    generate_completely_symmetric3,
    generate_strong3,
    generate_symmetric,
    validate,
)
from .gdof import (
    GapGrid,
    certificate,
    estimate_gdof_numeric,
    gap_scan,
    gdof_orthogonal,
    gdof_theorem,
    gdof_tin,
    o1_capacity,
    verify_lemma1,
    verify_lemma2,
)
from .linalg import logdet_eye_plus, logdet_hermitian, woodbury_inverse
from .polytope import Polytope, fm_eliminate, polytope_equal, support
from .rates import (
    decode_all_region,
    decode_all_symmetric_rate,
    hk_symmetric_rate,
    inner_symmetric,
    mac_region,
    tin_rate,
)

__version__ = "0.1.0"
