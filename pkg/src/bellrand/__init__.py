"""Bell functionals with 2**(n-1) x n settings, their classical and quantum
bounds, and min-entropy randomness certified by multi-copy Bell pairs."""

__version__ = "0.1.0"

from .behavior import Behavior, bell_value_of, compute_behavior, max_probability, validate
from .encoding import (
    BitString,
    EncodingScheme,
    build_scheme,
    coefficient,
    local_bound_bruteforce,
    local_bound_closed,
    quantum_optimum,
)
from .pauli import PauliString, anticommutes, maxent_expectation, multiply, to_dense, transpose_sign
from .randomness import RandomnessReport, certify, min_entropy, rmin_closed_form, table1_value
from .realization import (
    MaxEntangled,
    Observable,
    Realization,
    alice_observable,
    bell_value,
    canonical_bob_observables,
    canonical_realization,
    omega,
    padded_realization,
    single_copy_realization_n4,
    sos_certificate,
)
from .seesaw import SeesawConfig, SeesawResult, bell_operator, seesaw_optimize, spectral_sign
