from .bounds import BOUND_ALPHAS, CodebookBounds, codebook_bounds  # noqa
from .codebook import Codebook, codebook_average_state, sample_codebook  # noqa
from .decoding import (  # noqa
    DecodingResult,
    decode_codebook,
    decode_experiment,
    square_root_measurement,
)
from .expurgation import (  # noqa
    BatchResult,
    ExpurgationReport,
    codebook_batch,
    expurgation_check,
)
from .resolvability import (  # noqa
    conditional_resolvability_bound,
    conditional_resolvability_experiment,
    resolvability_bound,
    resolvability_experiment,
)
from .results import TrialResult  # noqa
from .secrecy import leakage, secrecy_batch, secrecy_experiment  # noqa


__all__ = [
    "BOUND_ALPHAS",
    "BatchResult",
    "Codebook",
    "CodebookBounds",
    "DecodingResult",
    "ExpurgationReport",
    "TrialResult",
    "codebook_average_state",
    "codebook_batch",
    "codebook_bounds",
    "conditional_resolvability_bound",
    "conditional_resolvability_experiment",
    "decode_codebook",
    "decode_experiment",
    "expurgation_check",
    "leakage",
    "resolvability_bound",
    "resolvability_experiment",
    "sample_codebook",
    "secrecy_batch",
    "secrecy_experiment",
    "square_root_measurement",
]
