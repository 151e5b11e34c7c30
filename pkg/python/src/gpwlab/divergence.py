import logging
import warnings
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np
import scipy.special

from .cq import ClassicalIndex, CQState
from .layout import _as_name_set
from .operations import mat_pow, support_projector
from .operations._utils import _check_states
from .state import DensityMatrix
from .status import LayoutMismatchError, NonConvergenceWarning, UnsupportedOrderError


LOGGER = logging.getLogger(__name__)

FIXED_POINT_TOL = 1e-10
"""stopping tolerance on the change of the conditional mutual information"""

FIXED_POINT_MAX_ITERATIONS = 1000
"""maximal number of fixed point iterations"""

SUPPORT_ATOL = 1e-12
"""weight of ρ outside of the support of σ above which ``D(ρ‖σ) = +∞``"""

MIN_CERTIFIED_ORDER = 0.5


class RenyiOrder:
    """
    Order of a Rényi divergence. Orders are stored as ``t > 0, t ≠ 1``; the
    same order can be written ``t = 1 + α``.

    >>> RenyiOrder.from_alpha(-0.25).t
    0.75
    """

    def __init__(self, t: float):
        t = float(t)
        if not np.isfinite(t) or t <= 0.0:
            raise UnsupportedOrderError(f"Rényi order must be positive, got {t}")
        if t == 1.0:
            raise UnsupportedOrderError(
                "Rényi order 1 is the von Neumann limit, use the von Neumann "
                "quantities instead"
            )
        self._t = t

    @staticmethod
    def from_alpha(alpha: float) -> "RenyiOrder":
        """Create the order ``t = 1 + α``"""
        return RenyiOrder(1.0 + float(alpha))

    @property
    def t(self) -> float:
        """the order ``t``"""
        return self._t

    @property
    def alpha(self) -> float:
        """the order written as ``α = t - 1``"""
        return self._t - 1.0

    def __float__(self) -> float:
        return self._t

    def __eq__(self, other) -> bool:
        if not isinstance(other, RenyiOrder):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(self._t)

    def __repr__(self) -> str:
        return f"RenyiOrder(t={self._t})"


OrderLike = Union[RenyiOrder, float]


def _as_order(order: OrderLike) -> RenyiOrder:
    if isinstance(order, RenyiOrder):
        return order
    return RenyiOrder(order)


def _sandwiched_trace(rho: np.ndarray, sigma: np.ndarray, t: float) -> float:
    """
    ``Tr[(σ^{(1-t)/2t} ρ σ^{(1-t)/2t})^t]``, or ``+inf`` when ``t > 1`` and the
    support of ``ρ`` is not contained in the support of ``σ``.
    """
    if t > 1.0:
        outside = np.eye(sigma.shape[0]) - support_projector(sigma)
        if np.real(np.trace(outside @ rho)) > SUPPORT_ATOL:
            return np.inf

    power = mat_pow(sigma, (1.0 - t) / (2.0 * t))
    sandwiched = power @ rho @ power
    sandwiched = 0.5 * (sandwiched + sandwiched.conj().T)
    eigenvalues = np.clip(np.linalg.eigvalsh(sandwiched), 0.0, None)
    return float(np.sum(eigenvalues**t))


def _from_trace(quantity: float, t: float) -> float:
    if quantity == np.inf:
        return np.inf
    if quantity <= 0.0:
        # only possible for t < 1, with orthogonal supports
        return np.inf
    return float(np.log2(quantity) / (t - 1.0))


def sandwiched_renyi(
    rho: DensityMatrix, sigma: DensityMatrix, order: OrderLike
) -> float:
    """
    Sandwiched Rényi relative entropy in bits,

    .. math::

        \\underline{D}_t(ρ \\| σ) = \\frac{1}{t - 1} \\log_2 \\text{Tr}\\left[
            \\left(σ^{\\frac{1-t}{2t}} ρ σ^{\\frac{1-t}{2t}}\\right)^t
        \\right],

    where powers of ``σ`` are taken on its support. For ``t > 1`` the result
    is ``+inf`` when the support of ``ρ`` is not included in the support of
    ``σ``. Orders below one are written ``t = 1 - α``, orders above one
    ``t = 1 + α``.

    :param rho: first :py:class:`DensityMatrix`
    :param sigma: second :py:class:`DensityMatrix`, on the same layout
    :param order: the order ``t``, as a float or a :py:class:`RenyiOrder`
    """
    _check_states(rho, sigma, "sandwiched_renyi")
    t = _as_order(order).t
    return _from_trace(_sandwiched_trace(rho.data, sigma.data, t), t)


def cq_sandwiched_renyi(first: CQState, second: CQState, order: OrderLike) -> float:
    """
    Sandwiched Rényi relative entropy between two cq states sharing the same
    classical and quantum layouts, computed block by block:

    .. math::

        \\underline{D}_t(ρ \\| σ) = \\frac{1}{t - 1} \\log_2 \\sum_c
            p(c)^t q(c)^{1-t}
            \\text{Tr}\\left[\\left(σ_c^{\\frac{1-t}{2t}} ρ_c
            σ_c^{\\frac{1-t}{2t}}\\right)^t\\right].

    The result is the same as :py:func:`sandwiched_renyi` on the densified
    states.
    """
    if first.classical_layout != second.classical_layout:
        raise LayoutMismatchError(
            "cq states should have the same classical registers, got "
            f"{first.classical_layout} and {second.classical_layout}"
        )
    if first.quantum_layout != second.quantum_layout:
        raise LayoutMismatchError(
            "cq states should have the same quantum registers, got "
            f"{first.quantum_layout} and {second.quantum_layout}"
        )

    t = _as_order(order).t
    total = 0.0
    for index, p, rho in first:
        q = second.probability(index)
        if q <= 0.0:
            if t > 1.0:
                return np.inf
            continue

        block = _sandwiched_trace(rho.data, second.conditional(index).data, t)
        if block == np.inf:
            return np.inf
        total += p**t * q ** (1.0 - t) * block

    return _from_trace(total, t)


def von_neumann_entropy(state) -> float:
    """
    von Neumann entropy ``S(ρ) = -Tr[ρ log₂ ρ]`` in bits.

    :param state: :py:class:`DensityMatrix` or Hermitian matrix
    """
    data = state.data if isinstance(state, DensityMatrix) else np.asarray(state)
    eigenvalues = np.clip(np.linalg.eigvalsh(0.5 * (data + data.conj().T)), 0, None)
    return float(np.sum(scipy.special.entr(eigenvalues)) / np.log(2.0))


def conditional_entropy(
    state: CQState, quantum: Iterable[str], given: Iterable[str] = ()
) -> float:
    """
    Entropy ``H(Q|G) = Σ_g p(g) S(ρ_{Q|g})`` of the quantum registers ``quantum``
    conditioned on the classical registers ``given``, in bits.
    """
    marginal = state.marginal(classical=given, quantum=quantum)
    return float(sum(p * von_neumann_entropy(rho) for _, p, rho in marginal))


def mutual_information(
    state: CQState,
    classical: Iterable[str],
    quantum: Iterable[str],
    given: Iterable[str] = (),
) -> float:
    """
    Conditional mutual information ``I[C;Q|G] = H(Q|G) - H(Q|GC)`` in bits,
    between the classical registers ``classical`` and the quantum registers
    ``quantum`` of ``state``, conditioned on the classical registers
    ``given``. Negative values coming from round-off are clipped to zero.

    >>> import numpy as np
    >>> from gpwlab.cq import build_cq_state
    >>> state = build_cq_state(
    ...     [0.5, 0.5],
    ...     {0: np.diag([1.0, 0.0]), 1: np.diag([0.0, 1.0])},
    ...     classical=[("X", 2)],
    ...     quantum=[("B", 2)],
    ... )
    >>> round(mutual_information(state, ["X"], ["B"]), 12)
    1.0
    """
    classical = _as_name_set(classical)
    given = _as_name_set(given)
    quantum = _as_name_set(quantum)

    joint = list(dict.fromkeys(given + classical))
    value = conditional_entropy(state, quantum, given) - conditional_entropy(
        state, quantum, joint
    )
    return max(value, 0.0)


class CMIResult:
    """
    Result of the minimization defining a Rényi (conditional) mutual
    information.
    """

    def __init__(
        self,
        value: float,
        minimizer: Dict[ClassicalIndex, DensityMatrix],
        iterations: int,
        residual: float,
        converged: bool,
        certified: bool = True,
    ):
        self.value: float = value
        """value of the Rényi (conditional) mutual information, in bits"""

        self.minimizer: Dict[ClassicalIndex, DensityMatrix] = minimizer
        """minimizing states ``σ_{X|u}``, indexed by the conditioning symbol"""

        self.iterations: int = iterations
        """number of fixed point iterations performed"""

        self.residual: float = residual
        """change of the value during the last iteration"""

        self.converged: bool = converged
        """did the iteration reach its tolerance?"""

        self.certified: bool = certified
        """``False`` for orders where the minimizer is not known to be unique"""

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return (
            f"CMIResult(value={self.value}, iterations={self.iterations}, "
            f"converged={self.converged})"
        )


def renyi_mutual_info(
    state: CQState,
    classical: Iterable[str],
    quantum: Iterable[str],
    order: OrderLike,
    **kwargs,
) -> CMIResult:
    """
    Rényi mutual information

    .. math::

        \\underline{I}_t[C;X] = \\min_{σ_X} \\underline{D}_t(ρ_{CX} \\| ρ_C ⊗ σ_X)

    between the classical registers ``classical`` (treated as a single joint
    register) and the quantum registers ``quantum``. This is
    :py:func:`renyi_cond_mutual_info` with nothing to condition on, and takes
    the same keyword arguments.
    """
    return renyi_cond_mutual_info(state, classical, quantum, (), order, **kwargs)


def renyi_cond_mutual_info(
    state: CQState,
    classical: Iterable[str],
    quantum: Iterable[str],
    given: Iterable[str],
    order: OrderLike,
    tol: float = FIXED_POINT_TOL,
    max_iterations: int = FIXED_POINT_MAX_ITERATIONS,
    allow_uncertified: bool = False,
) -> CMIResult:
    """
    Rényi conditional mutual information

    .. math::

        \\underline{I}_t[V;X|U] = \\min_{σ_{X|u}} \\underline{D}_t\\left(
            ρ_{UVX} \\middle\\| \\sum_u p(u) |u⟩⟨u| ⊗ ρ_{V|u} ⊗ σ_{X|u}
        \\right),

    where ``V`` stands for the registers in ``classical``, ``U`` for the
    registers in ``given`` and ``X`` for the quantum registers in
    ``quantum``.

    For ``t ≥ 1/2`` the minimizer is unique and characterized by the fixed
    point equation (with ``β = (1 - t) / t``)

    .. math::

        σ_{X|u} ∝ \\sum_v p(v|u) \\left(σ_{X|u}^{β/2} ρ_{X|uv}
            σ_{X|u}^{β/2}\\right)^t,

    which is iterated starting from ``σ_{X|u} = ρ_{X|u}``. A step that does
    not decrease the divergence is shortened by halving until it does. The
    iteration stops when the value changes by less than ``tol``; if this
    does not happen within ``max_iterations`` iterations a
    :py:class:`NonConvergenceWarning` is emitted and the returned result has
    ``converged=False``.

    :param state: the cq state
    :param classical: names of the classical registers ``V``
    :param quantum: names of the quantum registers ``X``
    :param given: names of the classical registers ``U`` to condition on
    :param order: the order ``t``
    :param tol: stopping tolerance on the change of the value
    :param max_iterations: maximal number of iterations
    :param allow_uncertified: run the iteration for ``t < 1/2`` as well; the
        result is then flagged with ``certified=False``
    """
    t = _as_order(order).t
    certified = t >= MIN_CERTIFIED_ORDER
    if not certified and not allow_uncertified:
        raise UnsupportedOrderError(
            f"the Rényi conditional mutual information minimizer is only "
            f"characterized for orders t >= {MIN_CERTIFIED_ORDER}, got t = {t}"
        )

    classical = _as_name_set(classical)
    given = _as_name_set(given)
    blocks = _conditional_blocks(state, classical, quantum, given)

    # t > 1 minimizes the trace quantity, t < 1 maximizes it
    sign = 1.0 if t > 1.0 else -1.0

    sigmas = {}
    traces = {}
    for u, (_, rhos) in blocks.items():
        sigma = sum(p * rho for p, rho in rhos)
        sigmas[u] = sigma
        traces[u] = _block_trace(rhos, sigma, t)

    value = _block_value(blocks, traces, t)
    residual = np.inf
    iteration = 0
    converged = False
    while iteration < max_iterations:
        iteration += 1
        for u, (_, rhos) in blocks.items():
            sigmas[u], traces[u] = _fixed_point_step(
                rhos, sigmas[u], traces[u], t, sign
            )

        new_value = _block_value(blocks, traces, t)
        residual = abs(new_value - value)
        value = new_value
        LOGGER.debug("fixed point iteration %d: value %.15g", iteration, value)
        if residual <= tol:
            converged = True
            break

    if not converged:
        warnings.warn(
            f"Rényi conditional mutual information did not converge after "
            f"{iteration} iterations (last change {residual:.3e})",
            NonConvergenceWarning,
            stacklevel=2,
        )

    layout = state.quantum_layout.subset(quantum)
    minimizer = {
        u: DensityMatrix(sigma / np.real(np.trace(sigma)), layout)
        for u, sigma in sigmas.items()
    }
    return CMIResult(
        value=value,
        minimizer=minimizer,
        iterations=iteration,
        residual=residual,
        converged=converged,
        certified=certified,
    )


_Blocks = Dict[ClassicalIndex, Tuple[float, List[Tuple[float, np.ndarray]]]]


def _conditional_blocks(state: CQState, classical, quantum, given) -> _Blocks:
    """
    Group the conditional states of ``ρ_{UVX}`` as ``u ↦ (p(u), [(p(v|u),
    ρ_{X|uv}), ...])``.
    """
    overlap = set(classical) & set(given)
    if overlap:
        raise LayoutMismatchError(
            f"registers {sorted(overlap)} can not be both conditioned on and "
            "measured"
        )

    marginal = state.marginal(classical=list(given) + list(classical), quantum=quantum)
    names = marginal.classical_layout.names
    u_positions = [i for i, name in enumerate(names) if name in given]

    blocks: _Blocks = {}
    for index, p, rho in marginal:
        u = tuple(index[i] for i in u_positions)
        if u not in blocks:
            blocks[u] = (0.0, [])
        weight, rhos = blocks[u]
        rhos.append((p, rho.data))
        blocks[u] = (weight + p, rhos)

    for u, (weight, rhos) in blocks.items():
        blocks[u] = (weight, [(p / weight, rho) for p, rho in rhos])

    return blocks


def _block_trace(rhos, sigma: np.ndarray, t: float) -> float:
    total = 0.0
    for p, rho in rhos:
        total += p * _sandwiched_trace(rho, sigma, t)
    return total


def _block_value(blocks: _Blocks, traces, t: float) -> float:
    return _from_trace(sum(blocks[u][0] * traces[u] for u in blocks), t)


def _fixed_point_step(rhos, sigma, trace, t, sign, min_step=2.0**-30):
    power = mat_pow(sigma, (1.0 - t) / (2.0 * t))
    update = np.zeros_like(sigma)
    for p, rho in rhos:
        update += p * mat_pow(power @ rho @ power, t)
    update /= np.real(np.trace(update))

    step = 1.0
    while step >= min_step:
        candidate = sigma + step * (update - sigma)
        candidate = 0.5 * (candidate + candidate.conj().T)
        candidate_trace = _block_trace(rhos, candidate, t)
        if sign * (candidate_trace - trace) <= 1e-15 * abs(trace):
            return candidate, candidate_trace
        step *= 0.5

    return sigma, trace


class VonNeumannTable:
    """
    The von Neumann mutual informations (in bits) entering the achievable
    rate formulas, for a state over classical registers ``(U, V)`` and
    quantum registers ``(B, E, S)``. Quantities involving a register absent
    from the state are zero.
    """

    FIELDS = (
        "u_b",
        "u_e",
        "u_s",
        "uv_b",
        "uv_e",
        "uv_s",
        "v_b_given_u",
        "v_e_given_u",
        "v_s_given_u",
    )

    def __init__(self, **values):
        missing = set(self.FIELDS) - set(values)
        if missing or set(values) - set(self.FIELDS):
            raise TypeError(f"VonNeumannTable needs exactly the fields {self.FIELDS}")

        for name in self.FIELDS:
            setattr(self, name, float(values[name]))

    def as_dict(self) -> Dict[str, float]:
        """Get all quantities as a dictionary"""
        return {name: getattr(self, name) for name in self.FIELDS}

    def __repr__(self) -> str:
        values = ", ".join(f"{k}={v:.6g}" for k, v in self.as_dict().items())
        return f"VonNeumannTable({values})"


def von_neumann_quantities(
    state: CQState,
    u: str = "U",
    v: str = "V",
    b: str = "B",
    e: str = "E",
    s: str = "S",
) -> VonNeumannTable:
    """
    Compute every von Neumann mutual information used by the rate formulas:
    ``I[U;B]``, ``I[U;E]``, ``I[U;S]``, ``I[UV;B]``, ``I[UV;E]``, ``I[UV;S]``,
    ``I[V;B|U]``, ``I[V;E|U]`` and ``I[V;S|U]``.

    Missing classical registers are trivial, as are missing quantum
    registers.

    :param state: cq state over ``(U, V; B, E, S)``, typically from
        :py:meth:`gpwlab.cq.SideInfoSetup.evaluation_state`
    """
    classical = state.classical_layout
    us = [u] if u in classical else []
    vs = [v] if v in classical else []

    def information(register: str, measured: List[str], given: List[str]) -> float:
        if register not in state.quantum_layout or not measured:
            return 0.0
        return mutual_information(state, measured, [register], given)

    values = {}
    for name, register in (("b", b), ("e", e), ("s", s)):
        values[f"u_{name}"] = information(register, us, [])
        values[f"uv_{name}"] = information(register, us + vs, [])
        values[f"v_{name}_given_u"] = information(register, vs, us)

    return VonNeumannTable(**values)
