"""Linear list-decodable edit-correcting concatenated codes.

Sync matrix sequences turn a list-recoverable outer code into a binary
code that survives insertions and deletions: every block of the codeword
is multiplied by its own matrix, and a window-scanning decoder uses the
sequence's alignment properties to refill per-block candidate boxes before
outer list recovery.
"""

from .bitlinalg import (
    BitMatrix,
    BitVector,
    mat_vec_mul,
    random_matrix,
    rank,
    row_space_intersection,
    solve_left,
)
from .codec import (
    ConcatParams,
    Codeword,
    DecodeReport,
    EditOp,
    EditScript,
    apply_edits,
    concat_encode,
    decode,
    derive_params,
    overall_rate,
    random_edit_script,
    scan_windows,
    window_plan,
)
from .edit_metric import (
    EditBallQuery,
    ball_enumerate,
    ball_membership,
    binary_entropy,
    check_ball_size_bound,
    edit_distance,
)
from .errors import CapExceeded, ListBoundExceeded
from .inner_code import (
    InnerCode,
    capacity_experiment,
    inner_encode,
    inner_list_decode,
    measure_list_decodability,
)
from .outer_code import (
    OuterCodeSpec,
    RecoveryInput,
    RecoverySpec,
    fold_symbols,
    list_recover,
    outer_encode,
    unfold_symbols,
)
from .pseudorandom import (
    BiasedGeneratorSpec,
    KWiseSamplerSpec,
    eps_biased_expand,
    kwise_sample,
    measure_bias,
    xor_lemma_check,
)
from .sync import (
    SyncParams,
    SyncSequence,
    SyncViolation,
    check_rowspace_condition,
    derandomized_search,
    sample_sync,
    sync_rate_bound,
    verify_sync,
)

__all__ = [
    "BitMatrix",
    "BitVector",
    "BiasedGeneratorSpec",
    "CapExceeded",
    "Codeword",
    "ConcatParams",
    "DecodeReport",
    "EditBallQuery",
    "EditOp",
    "EditScript",
    "InnerCode",
    "KWiseSamplerSpec",
    "ListBoundExceeded",
    "OuterCodeSpec",
    "RecoveryInput",
    "RecoverySpec",
    "SyncParams",
    "SyncSequence",
    "SyncViolation",
    "apply_edits",
    "ball_enumerate",
    "ball_membership",
    "binary_entropy",
    "capacity_experiment",
    "check_ball_size_bound",
    "check_rowspace_condition",
    "concat_encode",
    "decode",
    "derandomized_search",
    "derive_params",
    "edit_distance",
    "eps_biased_expand",
    "fold_symbols",
    "inner_encode",
    "inner_list_decode",
    "kwise_sample",
    "list_recover",
    "mat_vec_mul",
    "measure_bias",
    "measure_list_decodability",
    "outer_encode",
    "overall_rate",
    "random_edit_script",
    "random_matrix",
    "rank",
    "row_space_intersection",
    "sample_sync",
    "scan_windows",
    "solve_left",
    "sync_rate_bound",
    "unfold_symbols",
    "verify_sync",
    "window_plan",
    "xor_lemma_check",
]
