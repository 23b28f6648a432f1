"""Exact computation with subspaces of symmetric bilinear forms over
finite fields: ranks, radicals, common isotropic points, spreads, and
machine verification of the dimension bounds they satisfy."""

from .errors import CapExceeded, NormalFormError
from .field import (
    Field,
    FieldElement,
    embed_subfield,
    enumerate_elements,
    make_field,
    rel_trace,
    sqrt_char2,
)
from .forms import (
    SymForm,
    evaluate,
    even_rank_check,
    is_alternating,
    is_totally_isotropic,
    radical,
    restrict,
)
from .linalg import (
    Matrix,
    VectorSubspace,
    batch_rank,
    complete_basis,
    congruence,
    kernel_basis,
    rank,
)
from .spaces import (
    DEFAULT_ENUMERATION_CAP,
    FormSubspace,
    RankSpectrum,
    alt_subspace,
    common_radical,
    enumerate_nonzero,
    kernel_at_point,
    load_space,
    member,
    normal_form_basis,
    rank_spectrum,
    save_space,
    span_canonicalize,
    v_of_m,
)
from .constructions import (
    ConstructionRecipe,
    alt_full_space,
    even_rank_space,
    rank2_space,
    restrict_scalars,
    trace_form_space,
)
from .verify import (
    SearchParams,
    SpreadDecomposition,
    check_common_radicals,
    check_inequalities,
    check_odd_rank_bound,
    check_radical_threshold,
    check_rank_bound,
    check_two_rank_bound,
    check_vm_bound,
    count_rank_elements,
    gaussian_binomial,
    random_subspace_search,
    spread_decomposition,
)
from .reports import FAIL, HYPOTHESES_NOT_MET, PASS, VerificationReport

__version__ = "0.1.0"
