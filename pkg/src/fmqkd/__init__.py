"""Security analysis of one-way Faraday-Michelson QKD with imperfect Faraday mirrors."""

from .errors import (
    ConfigError,
    DegenerateStateSpace,
    DomainError,
    NotHermitian,
    NotPSD,
    NumericalInconsistency,
)
from .linalg import eig_hermitian, mat_inv_sqrt, mat_sqrt, rank_estimate
from .jones import (
    BirefringentSegment,
    FaradayMirror,
    FourMirrorConfig,
    consistency_check,
    fm_jones,
    four_mirror_states,
    roundtrip,
)
from .states import (
    make_basis_mixtures,
    make_bob_basis,
    make_ensemble,
    make_states,
    inner_product,
)
from .attack import AttackMetrics, PovmSet, attack_metrics, build_povm, run_attack
from .keyrate import (
    KeyRateInput,
    KeyRateResult,
    binary_entropy,
    eps3_error_rates,
    fidelity,
    key_rate,
)

__version__ = "0.1.0"
