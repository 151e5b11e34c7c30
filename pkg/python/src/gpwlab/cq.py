import itertools
import logging
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .layout import RegisterLayout
from .operations import partial_trace, partial_trace_array, reorder_registers
from .state import DensityMatrix, LayoutLike, _as_layout
from .status import (
    DOMAIN_ERROR,
    BadConditionalError,
    BadPmfError,
    DegenerateDenominatorError,
    GpwlabError,
    LayoutMismatchError,
    NoRootInUnitIntervalError,
    NotTracePreservingError,
    SchemaError,
)


LOGGER = logging.getLogger(__name__)

PMF_ATOL = 1e-12
"""tolerance on the normalization of probability tables"""

KRAUS_ATOL = 1e-10
"""tolerance on the completeness relation of Kraus operators"""

ERASURE_ATOL = 1e-9
"""tolerance used by the erasure equation to detect vanishing quantities"""

ClassicalIndex = Tuple[int, ...]


def _as_index(key, size: int) -> ClassicalIndex:
    if isinstance(key, (int, np.integer)):
        key = (int(key),)
    key = tuple(int(k) for k in key)
    if len(key) != size:
        raise BadConditionalError(
            f"conditional index {key} should have {size} entries"
        )
    return key


class CQState:
    """
    A :py:class:`CQState` is a classical-quantum state

    .. math::

        ρ = \\sum_c p(c) |c⟩⟨c| ⊗ ρ_{Q|c},

    where ``c`` runs over the joint alphabet of some classical registers and
    ``ρ_{Q|c}`` are density matrices on quantum registers.

    Classical registers are kept symbolic: only the probability table and the
    conditional states are stored, the block diagonal matrix is only created
    by :py:meth:`densify`. Conditional states are only required for indexes
    with positive probability.

    Instances are immutable after construction.
    """

    def __init__(
        self,
        classical: LayoutLike,
        pmf,
        conditionals: Mapping,
        quantum: LayoutLike,
        atol: float = PMF_ATOL,
    ):
        """
        :param classical: classical registers and their alphabet sizes
        :param pmf: joint probability table, with one axis per classical register
        :param conditionals: mapping from classical index tuples to the
            corresponding conditional :py:class:`DensityMatrix` (or raw matrix)
        :param quantum: quantum registers of the conditional states
        :param atol: tolerance on the normalization of ``pmf``
        """
        classical = _as_layout(classical)
        quantum = _as_layout(quantum)

        pmf = np.array(pmf, dtype=np.float64)
        if pmf.size != classical.total_dim:
            raise BadPmfError(
                f"probability table has {pmf.size} entries, expected "
                f"{classical.total_dim} for classical registers {classical}"
            )
        pmf = pmf.reshape(classical.dims)

        if np.any(~np.isfinite(pmf)) or np.any(pmf < -atol):
            raise BadPmfError("probability table contains negative or invalid entries")

        total = float(np.sum(pmf))
        if abs(total - 1.0) > atol:
            raise BadPmfError(f"probability table should sum to 1, got {total}")
        pmf = np.array(np.clip(pmf, 0.0, None))
        pmf.flags["WRITEABLE"] = False

        states: Dict[ClassicalIndex, DensityMatrix] = {}
        for key, value in conditionals.items():
            index = _as_index(key, len(classical))
            if any(i < 0 or i >= d for i, d in zip(index, classical.dims)):
                raise BadConditionalError(
                    f"conditional index {index} is out of range for {classical}"
                )
            states[index] = _as_conditional(value, quantum, index)

        if len(classical) == 0:
            support = [()]
        else:
            support = [
                tuple(int(i) for i in index)
                for index in zip(*np.nonzero(pmf > 0.0))
            ]

        for index in support:
            if index not in states:
                raise BadConditionalError(
                    f"missing conditional state for classical index {index}, "
                    f"which has probability {pmf[index]}"
                )

        self._classical = classical
        self._quantum = quantum
        self._pmf = pmf
        self._states = states
        self._support: List[ClassicalIndex] = support

    @property
    def classical_layout(self) -> RegisterLayout:
        """classical registers and their alphabet sizes"""
        return self._classical

    @property
    def quantum_layout(self) -> RegisterLayout:
        """quantum registers of the conditional states"""
        return self._quantum

    @property
    def pmf(self) -> np.ndarray:
        """read-only joint probability table of the classical registers"""
        return self._pmf

    def support(self) -> List[ClassicalIndex]:
        """classical indexes with positive probability, in row-major order"""
        return list(self._support)

    def probability(self, index) -> float:
        """probability of the given classical index"""
        return float(self._pmf[_as_index(index, len(self._classical))])

    def conditional(self, index) -> DensityMatrix:
        """conditional state associated with the given classical index"""
        index = _as_index(index, len(self._classical))
        try:
            return self._states[index]
        except KeyError:
            raise BadConditionalError(
                f"no conditional state for classical index {index}"
            ) from None

    def __iter__(self) -> Iterator[Tuple[ClassicalIndex, float, DensityMatrix]]:
        """iterate over ``(index, probability, conditional)`` for the support"""
        for index in self._support:
            yield index, float(self._pmf[index]), self._states[index]

    def __len__(self) -> int:
        return len(self._support)

    def __repr__(self) -> str:
        return (
            f"CQState with classical registers {self._classical} and quantum "
            f"registers {self._quantum} ({len(self)} non-zero blocks)"
        )

    def densify(self) -> DensityMatrix:
        """
        Get the full block-diagonal density matrix of this state, on the layout
        made of the classical registers followed by the quantum registers.
        """
        layout = self._classical.concat(self._quantum)
        dim_q = self._quantum.total_dim
        data = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
        for index, probability, state in self:
            start = self._classical.flat_index(index) * dim_q
            block = slice(start, start + dim_q)
            data[block, block] = probability * state.data
        return DensityMatrix(data, layout)

    def average(self, quantum: Optional[Iterable[str]] = None) -> DensityMatrix:
        """
        Get the quantum marginal ``Σ_c p(c) ρ_{Q|c}``, restricted to the
        ``quantum`` registers if given.
        """
        data = np.zeros(
            (self._quantum.total_dim, self._quantum.total_dim), dtype=np.complex128
        )
        for _, probability, state in self:
            data += probability * state.data
        result = DensityMatrix(data, self._quantum)
        if quantum is not None:
            result = partial_trace(result, quantum)
        return result

    def marginal(
        self,
        classical: Optional[Iterable[str]] = None,
        quantum: Optional[Iterable[str]] = None,
    ) -> "CQState":
        """
        Get the marginal of this state on some of the classical registers
        (default: all of them) and some of the quantum registers (default: all
        of them). Registers keep their order.
        """
        classical = (
            self._classical
            if classical is None
            else self._classical.subset(classical)
        )
        quantum = self._quantum if quantum is None else self._quantum.subset(quantum)

        positions = [self._classical.index(name) for name in classical.names]
        dropped = tuple(
            i for i in range(len(self._classical)) if i not in positions
        )
        pmf = np.sum(self._pmf, axis=dropped) if dropped else np.array(self._pmf)

        sums: Dict[ClassicalIndex, np.ndarray] = {}
        for index, probability, state in self:
            key = tuple(index[i] for i in positions)
            if key not in sums:
                sums[key] = np.zeros_like(state.data)
            sums[key] += probability * state.data

        conditionals = {}
        for key, data in sums.items():
            weight = float(pmf[key])
            if weight <= 0.0:
                continue
            data = data / weight
            if quantum != self._quantum:
                data = partial_trace_array(data, self._quantum, quantum.names)
            conditionals[key] = DensityMatrix(data, quantum)

        return CQState(classical, pmf / np.sum(pmf), conditionals, quantum)

    def map_conditionals(
        self,
        function: Callable[[ClassicalIndex, DensityMatrix], DensityMatrix],
        quantum: Optional[LayoutLike] = None,
    ) -> "CQState":
        """
        Create a new state with the same classical part, replacing each
        conditional state ``ρ_{Q|c}`` by ``function(c, ρ_{Q|c})``.

        :param quantum: quantum layout of the new conditional states, defaults
            to the current one
        """
        quantum = self._quantum if quantum is None else _as_layout(quantum)
        conditionals = {
            index: function(index, state) for index, _, state in self
        }
        return CQState(self._classical, self._pmf, conditionals, quantum)

    def merge_classical(self, names: Iterable[str], new_name: str) -> "CQState":
        """
        Merge several classical registers into a single one, with alphabet
        the product of the merged alphabets (flattened in row-major order).
        The merged register takes the position of the first merged register.
        """
        names = list(self._classical.subset(names).names)
        if len(names) == 0:
            raise SchemaError("at least one register is needed to merge")

        positions = [self._classical.index(name) for name in names]
        others = [i for i in range(len(self._classical)) if i not in positions]
        merged_dims = tuple(self._classical.dims[i] for i in positions)
        merged_size = int(np.prod(merged_dims, dtype=np.int64))

        registers = []
        order = []
        for i, (name, dim) in enumerate(self._classical):
            if i == positions[0]:
                registers.append((new_name, merged_size))
                order.append(positions)
            elif i not in positions:
                registers.append((name, dim))
                order.append([i])
        layout = RegisterLayout(registers)

        axes = [axis for group in order for axis in group]
        pmf = np.transpose(self._pmf, axes).reshape(layout.dims)

        def new_index(index):
            result = []
            for group in order:
                if len(group) == 1 and group[0] in others:
                    result.append(index[group[0]])
                else:
                    values = tuple(index[i] for i in group)
                    result.append(int(np.ravel_multi_index(values, merged_dims)))
            return tuple(result)

        conditionals = {new_index(index): state for index, _, state in self}
        return CQState(layout, pmf, conditionals, self._quantum)

    def tensor_power(self, n: int) -> "CQState":
        """
        State of ``n`` independent copies of this one. Each register keeps its
        name, and its dimension (or alphabet size) is raised to the power ``n``:
        copy ``k`` of register ``X`` is the ``k``-th factor of the new ``X``.
        """
        if n < 1:
            raise ValueError(f"the number of copies must be positive, got {n}")
        if n == 1:
            return self

        classical = RegisterLayout([(name, d**n) for name, d in self._classical])
        quantum = RegisterLayout([(name, d**n) for name, d in self._quantum])

        copies = RegisterLayout(
            [(f"{name}#{k}", d) for k in range(n) for name, d in self._quantum]
        )
        grouped = [f"{name}#{k}" for name, _ in self._quantum for k in range(n)]

        pmf = np.zeros(classical.dims, dtype=np.float64)
        conditionals = {}
        for entries in itertools.product(list(self), repeat=n):
            index = []
            for position, dim in enumerate(self._classical.dims):
                values = tuple(entry[0][position] for entry in entries)
                index.append(int(np.ravel_multi_index(values, (dim,) * n)))
            index = tuple(index)

            pmf[index] = np.prod([entry[1] for entry in entries])

            data = entries[0][2].data
            for entry in entries[1:]:
                data = np.kron(data, entry[2].data)
            data, _ = reorder_registers(data, copies, grouped)
            conditionals[index] = DensityMatrix(data, quantum)

        return CQState(classical, pmf / np.sum(pmf), conditionals, quantum)


def _as_conditional(value, quantum: RegisterLayout, index) -> DensityMatrix:
    if isinstance(value, DensityMatrix):
        if value.layout != quantum:
            raise BadConditionalError(
                f"conditional state for {index} is defined on {value.layout}, "
                f"expected {quantum}"
            )
        if not value.normalized:
            raise BadConditionalError(
                f"conditional state for {index} should be normalized"
            )
        return value

    try:
        return DensityMatrix(value, quantum)
    except GpwlabError as e:
        raise BadConditionalError(
            f"invalid conditional state for {index}: {e.message}"
        ) from e


def build_cq_state(
    pmf,
    conditionals: Mapping,
    classical: LayoutLike,
    quantum: LayoutLike,
) -> CQState:
    """
    Create and validate a :py:class:`CQState`.

    >>> import numpy as np
    >>> state = build_cq_state(
    ...     [0.5, 0.5],
    ...     {0: np.eye(2) / 2, 1: np.eye(2) / 2},
    ...     classical=[("U", 2)],
    ...     quantum=[("B", 2)],
    ... )
    >>> len(state)
    2

    :param pmf: joint probability table of the classical registers
    :param conditionals: mapping from classical indexes to conditional states
    :param classical: classical registers and alphabet sizes
    :param quantum: quantum registers of the conditional states
    """
    return CQState(classical, pmf, conditionals, quantum)


def product_cq_state(
    state: CQState, quantum: Optional[Iterable[str]] = None
) -> CQState:
    """
    Get the product state ``ρ_C ⊗ ρ_Q`` as a :py:class:`CQState` with the same
    classical part as ``state``: all conditional states are replaced by the
    quantum marginal, restricted to ``quantum`` if given.
    """
    average = state.average(quantum)
    return state.map_conditionals(lambda index, _: average, quantum=average.layout)


def markov_cq_state(
    state: CQState, v: str = "V", u: str = "U", quantum: str = "B"
) -> CQState:
    """
    Get the Markov state ``ρ_{V-U-X}`` in symbolic form, i.e. the
    :py:class:`CQState` over the classical registers ``(U, V)`` where the
    conditional state of ``(u, v)`` is ``ρ_{X|u}``.
    """
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    conditioned = state.marginal(classical=[u], quantum=[quantum])
    position = joint.classical_layout.index(u)
    return joint.map_conditionals(
        lambda index, _: conditioned.conditional((index[position],))
    )


def markov_state(
    state: CQState, v: str = "V", u: str = "U", quantum: str = "B"
) -> DensityMatrix:
    """
    Get the Markov state

    .. math::

        ρ_{V-U-X} = \\sum_u p_U(u) |u⟩⟨u| ⊗ ρ_{V|u} ⊗ ρ_{X|u}

    as a full :py:class:`DensityMatrix` on the registers ``(U, V, X)`` (in the
    order of ``state``'s layouts).
    """
    return markov_cq_state(state, v=v, u=u, quantum=quantum).densify()


class QuantumChannel:
    """
    Completely positive and trace preserving map, given in Kraus form
    ``N(ρ) = Σ_k K_k ρ K_k^†``, with declared input and output registers.
    """

    def __init__(
        self,
        kraus_ops: Iterable,
        input_layout: LayoutLike,
        output_layout: LayoutLike,
        atol: float = KRAUS_ATOL,
    ):
        """
        :param kraus_ops: Kraus operators, as matrices of shape
            ``(output_layout.total_dim, input_layout.total_dim)``
        :param input_layout: input registers
        :param output_layout: output registers
        :param atol: tolerance on ``Σ K^† K = I``
        """
        input_layout = _as_layout(input_layout)
        output_layout = _as_layout(output_layout)

        kraus_ops = [np.array(k, dtype=np.complex128) for k in kraus_ops]
        if len(kraus_ops) == 0:
            raise NotTracePreservingError("a channel needs at least one Kraus operator")

        shape = (output_layout.total_dim, input_layout.total_dim)
        completeness = np.zeros((shape[1], shape[1]), dtype=np.complex128)
        for kraus in kraus_ops:
            if kraus.shape != shape:
                raise LayoutMismatchError(
                    f"Kraus operator of shape {kraus.shape} does not map "
                    f"{input_layout} to {output_layout}"
                )
            completeness += kraus.conj().T @ kraus

        error = np.max(np.abs(completeness - np.eye(shape[1])))
        if error > atol:
            raise NotTracePreservingError(
                f"Kraus operators are not trace preserving: max|Σ K^†K - I| = "
                f"{error:.3e}"
            )

        for kraus in kraus_ops:
            kraus.flags["WRITEABLE"] = False

        self._kraus = kraus_ops
        self._input = input_layout
        self._output = output_layout

    @staticmethod
    def identity(layout: LayoutLike) -> "QuantumChannel":
        """The identity channel on ``layout``"""
        layout = _as_layout(layout)
        return QuantumChannel([np.eye(layout.total_dim)], layout, layout)

    @staticmethod
    def depolarizing(
        input_layout: LayoutLike, output_layout: Optional[LayoutLike] = None
    ) -> "QuantumChannel":
        """
        The fully depolarizing channel ``ρ ↦ Tr(ρ) I/d``, from ``input_layout``
        to ``output_layout`` (defaults to the input layout).
        """
        input_layout = _as_layout(input_layout)
        output_layout = (
            input_layout if output_layout is None else _as_layout(output_layout)
        )
        d_in = input_layout.total_dim
        d_out = output_layout.total_dim
        kraus = []
        for i in range(d_out):
            for j in range(d_in):
                op = np.zeros((d_out, d_in), dtype=np.complex128)
                op[i, j] = 1.0 / np.sqrt(d_out)
                kraus.append(op)
        return QuantumChannel(kraus, input_layout, output_layout)

    @staticmethod
    def classical(
        transition, input_layout: LayoutLike, output_layout: LayoutLike
    ) -> "QuantumChannel":
        """
        Classical channel with transition matrix ``W[y, x] = P(y|x)``, acting
        on states diagonal in the computational basis. Off-diagonal entries
        are destroyed.

        :param transition: column-stochastic matrix of shape
            ``(output_layout.total_dim, input_layout.total_dim)``
        """
        input_layout = _as_layout(input_layout)
        output_layout = _as_layout(output_layout)
        transition = np.asarray(transition, dtype=np.float64)
        if np.any(transition < 0):
            raise NotTracePreservingError("transition probabilities must be positive")

        kraus = []
        for y, x in zip(*np.nonzero(transition)):
            op = np.zeros(transition.shape, dtype=np.complex128)
            op[y, x] = np.sqrt(transition[y, x])
            kraus.append(op)
        return QuantumChannel(kraus, input_layout, output_layout)

    @property
    def kraus_ops(self) -> List[np.ndarray]:
        """read-only Kraus operators"""
        return list(self._kraus)

    @property
    def input_layout(self) -> RegisterLayout:
        """input registers of this channel"""
        return self._input

    @property
    def output_layout(self) -> RegisterLayout:
        """output registers of this channel"""
        return self._output

    def apply(self, state: DensityMatrix) -> DensityMatrix:
        """Apply this channel to ``state``, defined on the input registers"""
        if state.layout != self._input:
            raise LayoutMismatchError(
                f"channel input is {self._input}, got a state on {state.layout}"
            )
        return DensityMatrix(self.apply_matrix(state.data), self._output)

    def apply_matrix(self, matrix: np.ndarray) -> np.ndarray:
        """Apply the Kraus map to an arbitrary operator on the input space"""
        result = np.zeros(
            (self._output.total_dim, self._output.total_dim), dtype=np.complex128
        )
        for kraus in self._kraus:
            result += kraus @ matrix @ kraus.conj().T
        return result

    def discard(self, names: Iterable[str]) -> "QuantumChannel":
        """
        Compose this channel with the partial trace over the output registers
        in ``names``.
        """
        kept = self._output.subset(self._output.complement(names))
        dropped = self._output.subset(names)
        order = list(kept.names) + list(dropped.names)

        kraus = []
        for op in self._kraus:
            # move the discarded registers last, then split the output index
            permuted, _ = _reorder_rows(op, self._output, order)
            blocks = permuted.reshape(kept.total_dim, dropped.total_dim, -1)
            for e in range(dropped.total_dim):
                kraus.append(blocks[:, e, :])
        return QuantumChannel(kraus, self._input, kept)

    def tensor_power(self, k: int) -> "QuantumChannel":
        """
        Channel ``N^{⊗k}`` acting on ``k`` copies of the input registers. As for
        :py:meth:`CQState.tensor_power`, register names are kept and
        dimensions raised to the power ``k``.
        """
        if k < 1:
            raise ValueError(f"the number of copies must be positive, got {k}")
        if k == 1:
            return self

        in_copies = RegisterLayout(
            [(f"{name}#{c}", d) for c in range(k) for name, d in self._input]
        )
        out_copies = RegisterLayout(
            [(f"{name}#{c}", d) for c in range(k) for name, d in self._output]
        )
        in_order = [f"{name}#{c}" for name, _ in self._input for c in range(k)]
        out_order = [f"{name}#{c}" for name, _ in self._output for c in range(k)]

        kraus = []
        for ops in itertools.product(self._kraus, repeat=k):
            op = ops[0]
            for other in ops[1:]:
                op = np.kron(op, other)
            op, _ = _reorder_rows(op, out_copies, out_order)
            op, _ = _reorder_rows(op.T, in_copies, in_order)
            kraus.append(op.T)

        return QuantumChannel(
            kraus,
            [(name, d**k) for name, d in self._input],
            [(name, d**k) for name, d in self._output],
        )

    def __repr__(self) -> str:
        return (
            f"QuantumChannel from {self._input} to {self._output} "
            f"({len(self._kraus)} Kraus operators)"
        )


def _reorder_rows(matrix: np.ndarray, layout: RegisterLayout, order):
    """Permute the tensor factors of the row index of a rectangular matrix"""
    permutation = [layout.index(name) for name in order]
    columns = matrix.shape[1]
    tensor = matrix.reshape(layout.dims + (columns,))
    tensor = tensor.transpose(permutation + [len(layout)])
    new_layout = RegisterLayout([(name, layout.dim(name)) for name in order])
    return np.ascontiguousarray(tensor).reshape(layout.total_dim, columns), new_layout


class SideInfoSetup:
    """
    Everything defining a coding scenario over a channel with side
    information: the channel ``N_{AS→BE}`` and the encoder state ``ρ_UVAS``.
    The state of the channel ``S`` must have the marginal of the shared
    state ``φ_{S'S}`` when one is given; otherwise the ``S`` marginal of
    ``ρ_UVAS`` defines it.
    """

    def __init__(
        self,
        channel: QuantumChannel,
        state: CQState,
        phi: Optional[DensityMatrix] = None,
        side: str = "S",
        atol: float = 1e-9,
    ):
        """
        :param channel: the channel, from registers ``(A, S)`` to ``(B, E)``
        :param state: the cq state ``ρ_UVAS``
        :param phi: optional state ``φ_{S'S}`` on registers ``(S', S)``
        :param side: name of the channel state register
        :param atol: tolerance of the marginal check
        """
        if channel.input_layout != state.quantum_layout:
            raise LayoutMismatchError(
                f"channel input is {channel.input_layout}, but the encoder state "
                f"is defined on {state.quantum_layout}"
            )
        state.quantum_layout.index(side)

        if phi is not None:
            marginal = state.average([side])
            reduced = partial_trace(phi, [side])
            difference = np.max(np.abs(reduced.data - marginal.data))
            if difference > atol:
                raise SchemaError(
                    f"the {side} marginal of the encoder state differs from the "
                    f"one of φ by {difference:.3e}"
                )

        self._channel = channel
        self._state = state
        self._phi = phi
        self._side = side

    @property
    def channel(self) -> QuantumChannel:
        """the channel ``N_{AS→BE}``"""
        return self._channel

    @property
    def state(self) -> CQState:
        """the encoder state ``ρ_UVAS``"""
        return self._state

    @property
    def phi(self) -> Optional[DensityMatrix]:
        """the shared state ``φ_{S'S}``, if any"""
        return self._phi

    @property
    def side(self) -> str:
        """name of the channel state register"""
        return self._side

    def side_marginal(self) -> DensityMatrix:
        """the state ``ρ_S`` of the channel state register"""
        return self._state.average([self._side])

    def output_state(self) -> CQState:
        """the state ``ρ_UVBE``, see :py:func:`apply_channel`"""
        return apply_channel(self)

    def evaluation_state(self) -> CQState:
        """
        Get a cq state over the channel outputs and the channel state
        register, with conditional states ``ρ_{BE|uv} ⊗ ρ_{S|uv}``.

        The joint conditional state of outputs and ``S`` is not physical (the
        channel consumes ``S``), but every information quantity used for coding
        only involves one quantum register at a time, and all of them can be
        read from this state.
        """
        dim = self._state.quantum_layout.dim(self._side)
        side = RegisterLayout.single(self._side, dim)
        layout = self._channel.output_layout.concat(side)

        def evaluate(index, state):
            output = self._channel.apply(state)
            marginal = partial_trace(state, [self._side])
            return DensityMatrix(np.kron(output.data, marginal.data), layout)

        return self._state.map_conditionals(evaluate, quantum=layout)


def apply_channel(setup: SideInfoSetup) -> CQState:
    """
    Apply the channel of ``setup`` to each conditional state of the encoder
    state, giving ``ρ_UVBE = N_{AS→BE}(ρ_UVAS)``.
    """
    channel = setup.channel
    return setup.state.map_conditionals(
        lambda index, state: channel.apply(state), quantum=channel.output_layout
    )


def erasure_extend(
    state: CQState, epsilon: float, u: str = "U", v: str = "V"
) -> CQState:
    """
    Extend ``state`` with an erased copy ``Ṽ`` of ``V``: ``Ṽ = V`` with
    probability ``1 - ε`` and ``Ṽ = ⊥`` with probability ``ε``. The result has
    the classical registers ``(U', V')`` where ``U' = (U, Ṽ)`` is stored under
    the name of ``U`` and ``V' = V``. The erasure symbol ``⊥`` is the last
    letter of the ``Ṽ`` alphabet.

    :param state: cq state whose classical registers are exactly ``U`` and ``V``
    :param epsilon: erasure probability, in ``[0, 1]``
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {epsilon}")

    if set(state.classical_layout.names) != {u, v}:
        raise LayoutMismatchError(
            f"erasure extension needs exactly the classical registers {u} and {v}, "
            f"got {state.classical_layout.names}"
        )
    ordered = _ordered_classical(state, u, v)

    n_u = state.classical_layout.dim(u)
    n_v = state.classical_layout.dim(v)
    erased = n_v

    classical = RegisterLayout([(u, n_u * (n_v + 1)), (v, n_v)])
    pmf = np.zeros(classical.dims, dtype=np.float64)
    conditionals = {}
    for (x_u, x_v), probability, conditional in ordered:
        for tilde, weight in ((x_v, 1.0 - epsilon), (erased, epsilon)):
            if weight == 0.0:
                continue
            index = (x_u * (n_v + 1) + tilde, x_v)
            pmf[index] += probability * weight
            conditionals[index] = conditional

    return CQState(classical, pmf, conditionals, state.quantum_layout)


def _ordered_classical(state: CQState, u: str, v: str) -> CQState:
    """Get ``state`` with classical registers in the order ``(u, v)``"""
    if state.classical_layout.names == (u, v):
        return state

    pmf = np.transpose(state.pmf)
    conditionals = {(x_u, x_v): rho for (x_v, x_u), _, rho in state}
    classical = [(u, state.classical_layout.dim(u)), (v, state.classical_layout.dim(v))]
    return CQState(classical, pmf, conditionals, state.quantum_layout)


def solve_erasure_epsilon(
    state: CQState,
    u: str = "U",
    v: str = "V",
    output: str = "B",
    side: str = "S",
    atol: float = ERASURE_ATOL,
) -> float:
    """
    Find the erasure probability ``ε`` for which the erasure extension of
    ``state`` (see :py:func:`erasure_extend`) satisfies
    ``I[U';B] = I[U';S]``:

    .. math::

        ε = 1 + \\frac{I[U;B] - I[U;S]}{I[V;B|U] - I[V;S|U]}.

    The root is in ``[0, 1]`` when ``I[U;B] ≤ I[U;S]`` and
    ``I[UV;B] > I[UV;S]``.

    :param state: cq state with classical registers ``U``, ``V`` and quantum
        registers including ``B`` and ``S``
    :param atol: tolerance used to detect vanishing quantities
    """
    from .divergence import mutual_information

    def information(classical, quantum, given=()):
        return mutual_information(state, classical, quantum, given=given)

    numerator = information([u], [output]) - information([u], [side])
    denominator = information([v], [output], given=[u]) - information(
        [v], [side], given=[u]
    )
    total = information([u, v], [output]) - information([u, v], [side])

    if abs(denominator) <= atol:
        raise DegenerateDenominatorError(
            f"I[{v};{output}|{u}] - I[{v};{side}|{u}] vanishes "
            f"({denominator:.3e}), the erasure equation has no unique root"
        )

    if numerator > atol or total <= atol:
        raise NoRootInUnitIntervalError(
            f"the erasure equation needs I[{u};{output}] <= I[{u};{side}] and "
            f"I[{u}{v};{output}] > I[{u}{v};{side}], got differences "
            f"{numerator:.6g} and {total:.6g}"
        )

    epsilon = 1.0 + numerator / denominator
    if epsilon < -atol or epsilon > 1.0 + atol:
        raise NoRootInUnitIntervalError(f"the erasure root {epsilon} is not in [0, 1]")
    epsilon = float(np.clip(epsilon, 0.0, 1.0))

    extended = erasure_extend(state, epsilon, u=u, v=v)
    residual = mutual_information(extended, [u], [output]) - mutual_information(
        extended, [u], [side]
    )
    LOGGER.debug("erasure probability %.12g, residual %.3e", epsilon, residual)
    if abs(residual) > 1e-8:
        raise GpwlabError(
            f"erasure extension at ε = {epsilon} leaves I[U';B] - I[U';S] = "
            f"{residual:.3e}",
            DOMAIN_ERROR,
        )

    return epsilon
