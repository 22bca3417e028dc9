"""Compact knapsack lattice attacks, identification scheme and Fiat-Shamir signatures.

Exact integer linear algebra (Smith normal form, integral LLL, Babai's
nearest plane, Lenstra's embedding) underpins both the attacks and the
protocol checks.
"""

from .intmatrix import IntMatrix
from .linalg import (
    GeneralSolution,
    NoIntegerSolution,
    ResourceLimitError,
    SNFDecomposition,
    kernel_basis,
    snf,
    solve_integer_system,
)
from .lattice import (
    EmbeddingFailure,
    EmbeddingParams,
    LatticeBasis,
    babai_nearest_plane,
    check_lll,
    lenstra_particular_solution,
    lll_reduce,
)
from .attacks import (
    AttackConfig,
    AttackReport,
    KnapsackInstance,
    SolutionSpace,
    cvp_attack,
    divide_and_conquer_attack,
    generate_instance,
)
from .sigma import (
    DEFAULT_PARAMS,
    SchemeParams,
    PublicKey,
    SecretKey,
    Transcript,
    Verdict,
    choose_betas,
    commit,
    completeness_probability,
    extract_witness,
    keygen,
    respond,
    simulate_transcript,
    verify,
)
from .signature import (
    ChallengeHashConfig,
    Signature,
    commitment_collision_bound,
    derive_challenge,
    sign,
    verify_signature,
)
from .bench import ExperimentReport, ExperimentSpec, run_experiment

__version__ = "0.1.0"
