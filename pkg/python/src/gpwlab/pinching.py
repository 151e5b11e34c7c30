import logging
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .cq import ClassicalIndex, CQState
from .layout import RegisterLayout
from .operations import eigh
from .operations.linalg import _clusters
from .state import DensityMatrix, LayoutLike, _as_layout
from .status import LayoutMismatchError, SchemaError


LOGGER = logging.getLogger(__name__)

CLUSTER_TOL = 1e-9
"""eigenvalues closer than this (relative to the spectral radius) share a projector"""

PROJECTOR_ATOL = 1e-9
"""tolerance on orthogonality and completeness of pinching projectors"""

COMMUTATOR_ATOL = 1e-8
"""operators with commutator norms below this value are considered commuting"""


class PinchingMap:
    """
    Pinching map ``E(ρ) = Σ_i P_i ρ P_i`` for a complete family of orthogonal
    projectors ``P_i`` acting on the space of a :py:class:`RegisterLayout`.
    """

    def __init__(self, projectors, layout: LayoutLike, atol: float = PROJECTOR_ATOL):
        """
        :param projectors: list of Hermitian projectors
        :param layout: registers the projectors act on
        :param atol: tolerance on ``P_i P_j = δ_ij P_i`` and ``Σ P_i = I``
        """
        layout = _as_layout(layout)
        dim = layout.total_dim

        projectors = [np.array(p, dtype=np.complex128) for p in projectors]
        if len(projectors) == 0:
            raise SchemaError("a pinching map needs at least one projector")

        total = np.zeros((dim, dim), dtype=np.complex128)
        for i, first in enumerate(projectors):
            if first.shape != (dim, dim):
                raise LayoutMismatchError(
                    f"projector of shape {first.shape} does not act on {layout}"
                )
            for j, second in enumerate(projectors[i:], start=i):
                expected = first if i == j else 0.0
                if np.max(np.abs(first @ second - expected)) > atol:
                    raise SchemaError(
                        f"projectors {i} and {j} of the pinching map are not "
                        "orthogonal projectors"
                    )
            total += first

        if np.max(np.abs(total - np.eye(dim))) > atol:
            raise SchemaError("projectors of the pinching map do not sum to identity")

        for projector in projectors:
            projector.flags["WRITEABLE"] = False

        self._projectors = projectors
        self._layout = layout

    @property
    def projectors(self) -> List[np.ndarray]:
        """read-only projectors of this map"""
        return list(self._projectors)

    @property
    def layout(self) -> RegisterLayout:
        """registers this map acts on"""
        return self._layout

    @property
    def count(self) -> int:
        """number of projectors, i.e. the pinching constant of this map"""
        return len(self._projectors)

    def apply_matrix(self, matrix) -> np.ndarray:
        """Apply this map to an arbitrary operator"""
        matrix = np.asarray(matrix)
        result = np.zeros_like(matrix, dtype=np.complex128)
        for projector in self._projectors:
            result += projector @ matrix @ projector
        return result

    def __len__(self) -> int:
        return len(self._projectors)

    def __repr__(self) -> str:
        return f"PinchingMap on {self._layout} with {self.count} projectors"


def _spectral_projectors(matrix: np.ndarray, cluster_tol: float) -> List[np.ndarray]:
    values, vectors = eigh(matrix)
    projectors = []
    for start, stop in _clusters(values, cluster_tol):
        block = vectors[:, start:stop]
        projectors.append(block @ block.conj().T)
    return projectors


def pinching_from_state(
    sigma: DensityMatrix, cluster_tol: float = CLUSTER_TOL
) -> PinchingMap:
    """
    Pinching map with respect to the spectral decomposition of ``sigma``:
    one projector per cluster of eigenvalues, clusters being separated by
    gaps larger than ``cluster_tol`` times the spectral radius.

    >>> import numpy as np
    >>> from gpwlab.state import DensityMatrix
    >>> sigma = DensityMatrix.from_diagonal([0.5, 0.3, 0.2], [("B", 3)])
    >>> pinching_from_state(sigma).count
    3

    :param sigma: the :py:class:`DensityMatrix` defining the map
    :param cluster_tol: relative tolerance used to group eigenvalues
    """
    return PinchingMap(_spectral_projectors(sigma.data, cluster_tol), sigma.layout)


def apply_pinching(pinching: PinchingMap, rho) -> DensityMatrix:
    """
    Apply ``pinching`` to ``rho``, giving ``Σ_i P_i ρ P_i``.

    :param pinching: the :py:class:`PinchingMap`
    :param rho: :py:class:`DensityMatrix` on the layout of the map
    """
    if rho.layout != pinching.layout:
        raise LayoutMismatchError(
            f"pinching map acts on {pinching.layout}, got a state on {rho.layout}"
        )
    return DensityMatrix(
        pinching.apply_matrix(rho.data), rho.layout, normalized=rho.normalized
    )


def _refine(projectors: List[np.ndarray], reference: PinchingMap) -> List[np.ndarray]:
    """
    Joint refinement of two commuting projector families: all the non-zero
    products ``P_k Q_j``.
    """
    refined = []
    for first in projectors:
        for second in reference.projectors:
            product = first @ second
            product = 0.5 * (product + product.conj().T)
            if np.real(np.trace(product)) > 0.5:
                refined.append(product)
    return refined


class ConditionalPinching:
    """
    Family of pinching maps ``u ↦ E_{|u}`` indexed by the symbols of a
    classical register, acting as ``E(ρ) = Σ_u |u⟩⟨u| ⊗ E_{|u}(⟨u|ρ|u⟩)``.
    """

    def __init__(self, maps: Dict[ClassicalIndex, PinchingMap], register: str):
        if len(maps) == 0:
            raise SchemaError("a conditional pinching needs at least one map")

        layouts = {pinching.layout for pinching in maps.values()}
        if len(layouts) != 1:
            raise LayoutMismatchError(
                "all maps of a conditional pinching should act on the same layout"
            )

        self._maps = dict(maps)
        self._register = register
        self._layout = layouts.pop()

    @property
    def register(self) -> str:
        """name of the classical register indexing the maps"""
        return self._register

    @property
    def layout(self) -> RegisterLayout:
        """quantum registers the maps act on"""
        return self._layout

    @property
    def count(self) -> int:
        """largest number of projectors among all maps"""
        return max(pinching.count for pinching in self._maps.values())

    def __getitem__(self, index) -> PinchingMap:
        if isinstance(index, (int, np.integer)):
            index = (int(index),)
        return self._maps[tuple(index)]

    def __iter__(self) -> Iterator[Tuple[ClassicalIndex, PinchingMap]]:
        return iter(self._maps.items())

    def __len__(self) -> int:
        return len(self._maps)

    def apply(self, state: CQState) -> CQState:
        """
        Pinch every conditional state of ``state`` with the map associated
        with its symbol of the indexing register.
        """
        if state.quantum_layout != self._layout:
            raise LayoutMismatchError(
                f"conditional pinching acts on {self._layout}, got a state on "
                f"{state.quantum_layout}"
            )
        position = state.classical_layout.index(self._register)
        return state.map_conditionals(
            lambda index, rho: apply_pinching(self[(index[position],)], rho)
        )


def build_conditional_pinching(
    references: Dict[ClassicalIndex, DensityMatrix],
    register: str,
    cluster_tol: float = CLUSTER_TOL,
    refine: Optional[PinchingMap] = None,
) -> ConditionalPinching:
    """
    Build the conditional pinching whose map for the symbol ``u`` is the
    pinching with respect to the spectral decomposition of ``references[u]``.

    :param references: reference states, indexed by classical symbol tuples
    :param register: name of the indexing classical register
    :param cluster_tol: relative tolerance used to group eigenvalues
    :param refine: when given, the spectral projectors are refined with the
        projectors of this map, which must commute with the references
    """
    maps = {}
    for index, reference in references.items():
        projectors = _spectral_projectors(reference.data, cluster_tol)
        if refine is not None:
            projectors = _refine(projectors, refine)
        maps[tuple(index)] = PinchingMap(projectors, reference.layout)
    return ConditionalPinching(maps, register)


class PinchingChain:
    """
    The pair of pinchings ``(E1, E2)`` built from a cq state over ``(U, V; X)``
    together with their pinching constants.
    """

    def __init__(self, first: PinchingMap, second: ConditionalPinching):
        self.first: PinchingMap = first
        """``E1``, pinching with respect to ``ρ_X``"""

        self.second: ConditionalPinching = second
        """``E2``, conditional pinching with respect to ``E1(ρ_{X|u})``"""

    @property
    def v1(self) -> int:
        """number of projectors of ``E1``"""
        return self.first.count

    @property
    def v2(self) -> int:
        """largest number of projectors of the maps ``E_{2|u}``"""
        return self.second.count

    def __iter__(self):
        yield self.first
        yield self.second
        yield (self.v1, self.v2)

    def __repr__(self) -> str:
        return f"PinchingChain(v1={self.v1}, v2={self.v2})"


def build_E_chain(
    state: CQState, u: str = "U", quantum: str = "B", cluster_tol: float = CLUSTER_TOL
) -> PinchingChain:
    """
    Build the pinchings used by the decoder tests:

    - ``E1`` is the pinching with respect to the spectral decomposition of
      ``ρ_X``;
    - ``E_{2|u}`` is the pinching with respect to the spectral decomposition
      of ``E1(ρ_{X|u})``. Its projectors are refined with the ones of
      ``E1``, so that ``E1(ρ_{V-U-X})``, ``E2(ρ_{UVX})`` and ``ρ_{UV} ⊗ ρ_X``
      commute with each other. With generic spectra the refinement does not
      change anything.

    The same construction gives the pinchings associated with the channel
    state register (with ``quantum="S"``).

    :param state: cq state with a classical register ``u`` and a quantum
        register ``quantum``
    :param u: name of the conditioning classical register
    :param quantum: name of the quantum register ``X``
    :param cluster_tol: relative tolerance used to group eigenvalues
    """
    average = state.average([quantum])
    first = pinching_from_state(average, cluster_tol)

    conditioned = state.marginal(classical=[u], quantum=[quantum])
    references = {index: apply_pinching(first, rho) for index, _, rho in conditioned}
    second = build_conditional_pinching(references, u, cluster_tol, refine=first)

    chain = PinchingChain(first, second)
    LOGGER.debug("pinching chain on %s: v1 = %d, v2 = %d", quantum, chain.v1, chain.v2)
    return chain


def _commutator_norm(first: np.ndarray, second: np.ndarray) -> float:
    return float(np.max(np.abs(first @ second - second @ first), initial=0.0))


def commutator_norms(
    state: CQState,
    u: str = "U",
    v: str = "V",
    quantum: str = "B",
    chain: Optional[PinchingChain] = None,
    cluster_tol: float = CLUSTER_TOL,
) -> Tuple[float, float, float]:
    """
    Largest entries of the pairwise commutators of ``E1(ρ_{V-U-X})``,
    ``E2(ρ_{UVX})`` and ``ρ_{UV} ⊗ ρ_X``. All three operators are block
    diagonal in the classical registers, the commutators are computed block
    by block.

    :param chain: pinchings to use, built with :py:func:`build_E_chain` by
        default
    :return: norms of the ``(E1, E2)``, ``(E1, product)`` and
        ``(E2, product)`` commutators
    """
    if chain is None:
        chain = build_E_chain(state, u=u, quantum=quantum, cluster_tol=cluster_tol)

    joint = state.marginal(classical=[u, v], quantum=[quantum])
    conditioned = state.marginal(classical=[u], quantum=[quantum])
    average = state.average([quantum]).data
    position = joint.classical_layout.index(u)

    norms = np.zeros(3)
    for index, _, rho in joint:
        key = (index[position],)
        markov = chain.first.apply_matrix(conditioned.conditional(key).data)
        pinched = chain.second[key].apply_matrix(rho.data)
        norms = np.maximum(
            norms,
            [
                _commutator_norm(markov, pinched),
                _commutator_norm(markov, average),
                _commutator_norm(pinched, average),
            ],
        )

    return tuple(float(n) for n in norms)


def commutation_check(
    state: CQState,
    u: str = "U",
    v: str = "V",
    quantum: str = "B",
    chain: Optional[PinchingChain] = None,
    cluster_tol: float = CLUSTER_TOL,
    atol: float = COMMUTATOR_ATOL,
) -> bool:
    """
    Check that ``E1(ρ_{V-U-X})``, ``E2(ρ_{UVX})`` and ``ρ_{UV} ⊗ ρ_X`` commute
    with each other, see :py:func:`commutator_norms`.

    :param cluster_tol: relative tolerance used to group eigenvalues when
        building the default chain
    :param atol: largest accepted commutator entry
    """
    norms = commutator_norms(
        state, u=u, v=v, quantum=quantum, chain=chain, cluster_tol=cluster_tol
    )
    return max(norms) <= atol


def iid_component_bounds(n: int, d_u: int, d_x: int) -> Tuple[float, float]:
    """
    Upper bounds on the pinching constants of ``n`` i.i.d. copies:
    ``(n + 1)^{d_X - 1}`` for the number of distinct eigenvalues of
    ``ρ_X^{⊗n}`` and ``(n + 1)^{d_U (d_X + 2)(d_X - 1) / 2}`` for the
    conditional pinching. The bounds are computed in log-space and can be
    ``inf`` when they overflow.

    >>> iid_component_bounds(3, 2, 2)
    (4.0, 256.0)

    :param n: number of copies
    :param d_u: alphabet size of the conditioning register
    :param d_x: dimension of the quantum register
    """
    _check_positive(n=n, d_u=d_u, d_x=d_x)
    log_base = np.log2(n + 1)
    log_v1 = (d_x - 1) * log_base
    log_v2 = d_u * (d_x + 2) * (d_x - 1) / 2 * log_base
    return _exp2(log_v1), _exp2(log_v2)


def iid_conditional_bound(n: int, d_u: int, d_x: int) -> float:
    """
    Upper bound ``(n + 1)^{d_U (d_X - 1)}`` on the number of distinct
    eigenvalues of ``⊗_k ρ_{X|u_k}`` over all sequences ``u``, used for the
    pinching with respect to the conditional states of the eavesdropper.
    """
    _check_positive(n=n, d_u=d_u, d_x=d_x)
    return _exp2(d_u * (d_x - 1) * np.log2(n + 1))


def _check_positive(**values):
    for name, value in values.items():
        if int(value) != value or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value}")


def _exp2(value: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp2(value))


class PinchingConstants:
    """
    The five pinching constants measured on a state over ``(U, V; B, E, S)``:

    - ``v1``, ``v2``: pinchings with respect to ``ρ_B`` and ``E1(ρ_{B|u})``;
    - ``v3``, ``v4``: the same construction on the channel state ``S``;
    - ``v5``: largest number of distinct eigenvalues of ``ρ_{E|u}``.
    """

    FIELDS = ("v1", "v2", "v3", "v4", "v5")

    def __init__(self, v1: int, v2: int, v3: int, v4: int, v5: int):
        for name, value in zip(self.FIELDS, (v1, v2, v3, v4, v5)):
            if value < 1:
                raise ValueError(f"pinching constant {name} must be at least 1")
            setattr(self, name, value)

    def as_dict(self) -> Dict[str, float]:
        """Get all constants as a dictionary"""
        return {name: getattr(self, name) for name in self.FIELDS}

    def __repr__(self) -> str:
        values = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"PinchingConstants({values})"


def pinching_constants(
    state: CQState,
    u: str = "U",
    b: str = "B",
    e: str = "E",
    s: str = "S",
    cluster_tol: float = CLUSTER_TOL,
) -> PinchingConstants:
    """
    Measure the pinching constants ``v1`` to ``v5`` of ``state``. Constants
    attached to a quantum register absent from ``state`` are 1.

    :param state: cq state over ``(U, V; B, E, S)``, typically from
        :py:meth:`gpwlab.cq.SideInfoSetup.evaluation_state`
    """
    quantum = state.quantum_layout

    def chain_counts(register):
        if register not in quantum:
            return 1, 1
        chain = build_E_chain(state, u=u, quantum=register, cluster_tol=cluster_tol)
        return chain.v1, chain.v2

    v1, v2 = chain_counts(b)
    v3, v4 = chain_counts(s)

    v5 = 1
    if e in quantum:
        conditioned = state.marginal(classical=[u], quantum=[e])
        references = {index: rho for index, _, rho in conditioned}
        v5 = build_conditional_pinching(references, u, cluster_tol).count

    return PinchingConstants(v1, v2, v3, v4, v5)
