import logging
from typing import Optional, Tuple

import numpy as np

from ..cq import CQState
from ..state import DensityMatrix
from ..status import BudgetExceededError, DimensionBudgetError
from ._rng import stream


LOGGER = logging.getLogger(__name__)

WORD_BUDGET = 2**16
"""largest number of codewords ``2^{R + R1 + r}`` of a sampled codebook"""

ALPHABET_BUDGET = 64
DIMENSION_BUDGET = 16


class Codebook:
    """
    Random superposition codebook with ``2^r`` outer words ``u(i)`` and, for
    every message ``m`` and outer word ``i``, ``2^{R1}`` inner words
    ``v(m, i, j)``.
    """

    def __init__(
        self,
        u_words: np.ndarray,
        v_words: np.ndarray,
        seed: int,
        rates: Tuple[int, int, int],
        trial: int = 0,
    ):
        R, R1, r = rates
        if u_words.shape != (2**r,):
            raise ValueError(f"expected {2**r} outer words, got {u_words.shape}")
        if v_words.shape != (2**R, 2**r, 2**R1):
            raise ValueError(
                f"expected inner words of shape {(2**R, 2**r, 2**R1)}, "
                f"got {v_words.shape}"
            )

        self.u_words: np.ndarray = u_words
        """symbols ``u(i)`` of the outer words"""
        self.v_words: np.ndarray = v_words
        """symbols ``v(m, i, j)`` of the inner words"""
        self.seed: int = seed
        self.trial: int = trial
        self.rates: Tuple[int, int, int] = (R, R1, r)
        """integer rates ``(R, R1, r)``"""

    @property
    def messages(self) -> int:
        return self.v_words.shape[0]

    @property
    def size(self) -> int:
        """total number of codewords ``2^{R + R1 + r}``"""
        return self.v_words.size

    def words(self, message: int):
        """iterate over the symbol pairs ``(u(i), v(m, i, j))`` of ``message``"""
        for i, u in enumerate(self.u_words):
            for v in self.v_words[message, i]:
                yield int(u), int(v)

    def __repr__(self) -> str:
        R, R1, r = self.rates
        return f"Codebook(R={R}, R1={R1}, r={r}, seed={self.seed}, trial={self.trial})"


def _check_rates(rates) -> Tuple[int, int, int]:
    checked = []
    for name, value in zip(("R", "R1", "r"), rates):
        if int(value) != value or value < 0:
            raise ValueError(
                f"codebook rates must be non-negative integers, got {name}={value}"
            )
        checked.append(int(value))
    return tuple(checked)


def sample_codebook(
    p_uv,
    rates: Tuple[int, int, int],
    seed: int,
    trial: int = 0,
    budget: int = WORD_BUDGET,
) -> Codebook:
    """
    Sample a random codebook: the outer words are i.i.d. according to
    ``p_U``, and the inner words ``v(m, i, ·)`` are i.i.d. according to
    ``p_{V|U = u(i)}``.

    The outer words use the first random stream of the trial, and the inner
    words of ``u(i)`` use stream ``i + 1``.

    :param p_uv: joint probability table of ``(U, V)``
    :param rates: integer rates ``(R, R1, r)``
    :param seed: seed of the experiment
    :param trial: index of the trial in the experiment
    :param budget: largest allowed number of codewords
    """
    R, R1, r = _check_rates(rates)
    if 2 ** (R + R1 + r) > budget:
        raise BudgetExceededError(
            f"a codebook with rates (R={R}, R1={R1}, r={r}) has "
            f"{2 ** (R + R1 + r)} words, more than the budget of {budget}"
        )

    p_uv = np.asarray(p_uv, dtype=np.float64)
    if p_uv.ndim != 2:
        raise ValueError("p_uv should be a two-dimensional probability table")
    p_u = np.sum(p_uv, axis=1)
    n_u, n_v = p_uv.shape

    u_words = stream(seed, trial, 0).choice(n_u, size=2**r, p=p_u / np.sum(p_u))
    v_words = np.zeros((2**R, 2**r, 2**R1), dtype=np.int64)
    for i, u in enumerate(u_words):
        p_v = p_uv[u] / p_u[u]
        v_words[:, i, :] = stream(seed, trial, i + 1).choice(
            n_v, size=(2**R, 2**R1), p=p_v
        )

    return Codebook(u_words.astype(np.int64), v_words, seed, (R, R1, r), trial)


def codebook_average_state(
    state: CQState,
    codebook: Codebook,
    message: Optional[int] = None,
    u: str = "U",
    v: str = "V",
) -> DensityMatrix:
    """
    Average of the conditional states ``ρ_{X|u(i), v(m, i, j)}`` over all
    words of ``message``, or over all words of the codebook when ``message``
    is ``None``.

    :param state: cq state over ``(U, V; X)``
    """
    joint = state.marginal(classical=[u, v])
    messages = range(codebook.messages) if message is None else [message]

    dim = joint.quantum_layout.total_dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    count = 0
    for m in messages:
        for word in codebook.words(m):
            total += joint.conditional(word).data
            count += 1
    return DensityMatrix(total / count, joint.quantum_layout)


def check_budget(state: CQState, quantum: str, classical=("U", "V")):
    """
    Check that ``state`` is small enough for the Monte Carlo experiments,
    with at most 64 classical symbols and a quantum register of dimension at
    most 16.
    """
    alphabet = int(np.prod(state.classical_layout.subset(classical).dims))
    dim = state.quantum_layout.dim(quantum)
    if alphabet > ALPHABET_BUDGET or dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(
            f"experiments are limited to {ALPHABET_BUDGET} classical symbols and "
            f"dimension {DIMENSION_BUDGET}, got {alphabet} symbols and a "
            f"register {quantum} of dimension {dim}"
        )
