"""
Parametric families of encoder states ``ρ_UVAS`` together with a fixed
channel, used to maximize achievable rates over a grid of parameters.
"""
import itertools
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .cq import CQState, QuantumChannel, SideInfoSetup, build_cq_state
from .state import DensityMatrix
from .status import EmptyFeasibleSetError


Parameters = Tuple[float, ...]


class StateFamily:
    """
    Base class for families of encoder states over classical registers
    ``(U, V)`` and quantum registers ``(A, S)``, all sharing the channel
    ``N_{AS→BE}`` and the same channel state marginal ``ρ_S``.

    Sub-classes implement :py:meth:`state`.
    """

    def __init__(self, channel: QuantumChannel, grid: Iterable[Parameters]):
        """
        :param channel: channel applied to every state of the family
        :param grid: parameters of the sampled states
        """
        self._channel = channel
        self._grid: List[Parameters] = [tuple(p) for p in grid]

    @property
    def channel(self) -> QuantumChannel:
        """the channel shared by all states of this family"""
        return self._channel

    @property
    def grid(self) -> List[Parameters]:
        """parameters of the sampled states"""
        return list(self._grid)

    def __iter__(self) -> Iterator[Parameters]:
        return iter(self._grid)

    def __len__(self) -> int:
        return len(self._grid)

    def state(self, parameters: Parameters) -> CQState:
        """Get the encoder state ``ρ_UVAS`` associated with ``parameters``"""
        raise NotImplementedError()

    def setup(self, parameters: Parameters) -> SideInfoSetup:
        """Get the coding setup associated with ``parameters``"""
        return SideInfoSetup(self._channel, self.state(parameters))

    def evaluation_state(self, parameters: Parameters) -> CQState:
        """Get the state over ``(U, V; B, E, S)`` associated with ``parameters``"""
        return self.setup(parameters).evaluation_state()

    def check_not_empty(self):
        """Raise :py:class:`EmptyFeasibleSetError` if this family has no state"""
        if len(self._grid) == 0:
            raise EmptyFeasibleSetError(
                f"{self.__class__.__name__} does not contain any state"
            )


class GridFamily(StateFamily):
    """
    Family defined by an arbitrary ``builder`` function mapping parameters to
    encoder states.
    """

    def __init__(
        self,
        builder: Callable[[Parameters], CQState],
        channel: QuantumChannel,
        grid: Iterable[Parameters],
    ):
        super().__init__(channel, grid)
        self._builder = builder

    def state(self, parameters: Parameters) -> CQState:
        return self._builder(tuple(parameters))


def binary_symmetric_channel(flip: float) -> np.ndarray:
    """Transition matrix of the binary symmetric channel with flip probability"""
    if not 0.0 <= flip <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {flip}")
    return np.array([[1.0 - flip, flip], [flip, 1.0 - flip]])


def uniform_grid(step: float, start: float = 0.0, stop: float = 1.0) -> np.ndarray:
    """Points ``start, start + step, ...`` up to ``stop`` (included)"""
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


class BinaryWiretapFamily(StateFamily):
    """
    Binary classical Gel'fand-Pinsker wiretap family with parameters
    ``(p_v, c)``:

    - ``U`` is a uniform bit, independent of ``V ~ Bernoulli(p_v)``;
    - the channel input ``A`` is a copy of ``V``;
    - the channel state is ``ρ_{S|u} = diag((1 + c)/2, (1 - c)/2)`` for
      ``u = 0`` and the reversed diagonal for ``u = 1``, so that ``ρ_S = I/2``
      for every ``c``;
    - the channel sends ``A`` through two binary symmetric channels, with
      flip probabilities ``q_b`` towards ``B`` and ``q_e`` towards ``E``,
      and ignores ``S``.

    Since ``S`` only depends on ``U``, ``I[U;B] - I[U;S] = -I[U;S]`` and the
    states with ``c > 0`` violate ``I[U;B] ≥ I[U;S]``.
    """

    def __init__(
        self,
        q_b: float,
        q_e: float,
        p_v: Optional[Sequence[float]] = None,
        c: Optional[Sequence[float]] = None,
        step: float = 0.02,
    ):
        """
        :param q_b: flip probability of the channel to ``B``
        :param q_e: flip probability of the channel to ``E``
        :param p_v: sampled values of ``P(V = 1)``, defaults to a uniform grid
        :param c: sampled values of the channel state bias, defaults to a
            uniform grid on ``[0, 1)``
        :param step: step of the default grids
        """
        p_v = uniform_grid(step) if p_v is None else np.asarray(p_v, dtype=float)
        if c is None:
            c = uniform_grid(step, stop=1.0 - step)
        c = np.asarray(c, dtype=float)

        if np.any((p_v < 0) | (p_v > 1)) or np.any((c < 0) | (c > 1)):
            raise ValueError("family parameters must be in [0, 1]")

        to_b = binary_symmetric_channel(q_b)
        to_e = binary_symmetric_channel(q_e)
        # W(b, e | a, s) = W_B(b|a) W_E(e|a), the channel state is discarded
        transition = np.stack([np.kron(to_b[:, a], to_e[:, a]) for a in range(2)], 1)
        transition = np.repeat(transition, 2, axis=1)
        channel = QuantumChannel.classical(
            transition, [("A", 2), ("S", 2)], [("B", 2), ("E", 2)]
        )

        super().__init__(channel, itertools.product(p_v, c))
        self.q_b = q_b
        self.q_e = q_e

    def state(self, parameters: Parameters) -> CQState:
        p_v, c = parameters
        pmf = np.outer([0.5, 0.5], [1.0 - p_v, p_v])

        conditionals = {}
        for u, v in itertools.product(range(2), range(2)):
            bias = (1.0 + c) / 2 if u == 0 else (1.0 - c) / 2
            a = np.zeros(2)
            a[v] = 1.0
            diagonal = np.kron(a, [bias, 1.0 - bias])
            conditionals[(u, v)] = DensityMatrix.from_diagonal(
                diagonal, [("A", 2), ("S", 2)]
            )

        return build_cq_state(
            pmf,
            conditionals,
            classical=[("U", 2), ("V", 2)],
            quantum=[("A", 2), ("S", 2)],
        )
