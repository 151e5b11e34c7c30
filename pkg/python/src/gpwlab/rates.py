import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cq import (
    CQState,
    QuantumChannel,
    SideInfoSetup,
    erasure_extend,
    solve_erasure_epsilon,
)
from .divergence import VonNeumannTable, von_neumann_quantities
from .families import Parameters, StateFamily
from .status import EmptyFeasibleSetError, InfeasibleRatesError


LOGGER = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-9
"""tolerance of the ``I[U;B] ≥ I[U;S]`` membership test"""

ERASURE_CHECK_TOL = 1e-7
"""tolerance of the rate inequalities verified on erasure extensions"""


class RatePoint:
    """
    Achievable rates of a single state over ``(U, V; B, E, S)``:

    .. math::

        R_a = \\min\\{I[V;B|U] - I[V;E|U],\\ I[UV;B] - I[UV;S],\\
                      I[UV;B] - I[U;S] - I[V;E|U]\\}

    and ``R_alt``, the minimum of the first two components only.
    """

    def __init__(self, table: VonNeumannTable, tol: float = MEMBERSHIP_TOL):
        self.table: VonNeumannTable = table
        """the von Neumann quantities this point was computed from"""

        self.components: Tuple[float, float, float] = (
            table.v_b_given_u - table.v_e_given_u,
            table.uv_b - table.uv_s,
            table.uv_b - table.u_s - table.v_e_given_u,
        )
        """the three arguments of the minimum defining ``R_a``"""

        self.rate_a: float = min(self.components)
        """the rate ``R_a``"""

        self.rate_alt: float = min(self.components[:2])
        """the rate ``R_alt``"""

        self.s2_member: bool = table.u_b - table.u_s >= -tol
        """does the state satisfy ``I[U;B] ≥ I[U;S]``?"""

    def as_dict(self) -> Dict:
        """Get this rate point as a JSON-serializable dictionary"""
        return {
            "rate_a": self.rate_a,
            "rate_alt": self.rate_alt,
            "components": list(self.components),
            "s2_member": self.s2_member,
            "quantities": self.table.as_dict(),
        }

    def __repr__(self) -> str:
        return f"RatePoint(rate_a={self.rate_a:.6g}, rate_alt={self.rate_alt:.6g})"


def rate_point(state: CQState, **registers) -> RatePoint:
    """
    Compute the achievable rates ``R_a`` and ``R_alt`` of ``state``.

    Registers absent from the state are trivial, so that the same function
    covers channels without channel state or without eavesdropper.

    :param state: cq state over ``(U, V; B, E, S)``, typically from
        :py:meth:`gpwlab.cq.SideInfoSetup.evaluation_state`
    :param registers: register names, forwarded to
        :py:func:`gpwlab.divergence.von_neumann_quantities`
    """
    return RatePoint(von_neumann_quantities(state, **registers))


class RateAllocation:
    """
    Message rate ``R``, secrecy scrambling rate ``R1`` and channel state
    scrambling rate ``r`` of a superposition code, in bits.
    """

    CONSTRAINTS = (
        "total_rate",
        "inner_rate",
        "state_scrambling",
        "outer_scrambling",
        "secrecy_scrambling",
    )

    def __init__(
        self,
        R: float,
        R1: float,
        r: float,
        slack: Tuple[float, float, float] = (0.0, 0.0, 0.0),
    ):
        if R < 0 or R1 < 0 or r < 0:
            raise ValueError(f"rates must be non-negative, got R={R}, R1={R1}, r={r}")

        self.R: float = float(R)
        """message rate"""
        self.R1: float = float(R1)
        """rate of the scrambling variable protecting against the eavesdropper"""
        self.r: float = float(r)
        """rate of the scrambling variable matching the channel state"""
        self.slack: Tuple[float, float, float] = tuple(slack)
        """the margins ``(ε1, ε2, ε3)`` used to build this allocation"""

    def constraint_slacks(self, table: VonNeumannTable) -> Dict[str, float]:
        """
        Margins of the five rate constraints, all positive when the
        allocation is admissible:

        - ``total_rate``: ``I[UV;B] - (R + R1 + r)``
        - ``inner_rate``: ``I[V;B|U] - (R + R1)``
        - ``state_scrambling``: ``R1 + r - I[UV;S]``
        - ``outer_scrambling``: ``r - I[U;S]``
        - ``secrecy_scrambling``: ``R1 - I[V;E|U]``
        """
        return {
            "total_rate": table.uv_b - (self.R + self.R1 + self.r),
            "inner_rate": table.v_b_given_u - (self.R + self.R1),
            "state_scrambling": self.R1 + self.r - table.uv_s,
            "outer_scrambling": self.r - table.u_s,
            "secrecy_scrambling": self.R1 - table.v_e_given_u,
        }

    def is_admissible(self, table: VonNeumannTable) -> bool:
        """Are all the rate constraints strictly satisfied?"""
        return all(value > 0 for value in self.constraint_slacks(table).values())

    def scaled(self, n: int) -> "RateAllocation":
        """Rates of ``n`` uses of the channel"""
        return RateAllocation(self.R * n, self.R1 * n, self.r * n, self.slack)

    def as_dict(self) -> Dict:
        return {"R": self.R, "R1": self.R1, "r": self.r, "slack": list(self.slack)}

    def __repr__(self) -> str:
        return f"RateAllocation(R={self.R:.6g}, R1={self.R1:.6g}, r={self.r:.6g})"


def allocate_rates(
    table: VonNeumannTable, eps1: float, eps2: float, eps3: float
) -> RateAllocation:
    """
    Choose rates satisfying every rate constraint with the given margins:

    .. math::

        R_1 &= I[V;E|U] + ε_1 \\\\
        r &= \\max(I[U;S], I[UV;S] - I[V;E|U]) + ε_2 \\\\
        R &= \\min(I[UV;B] - (R_1 + r), I[V;B|U] - R_1) - ε_3

    :param table: von Neumann quantities of the state
    :raises InfeasibleRatesError: if the resulting message rate is not
        positive
    """
    if eps1 <= 0 or eps2 <= 0 or eps3 <= 0:
        raise ValueError("rate margins must be positive")

    R1 = table.v_e_given_u + eps1
    r = max(table.u_s, table.uv_s - table.v_e_given_u) + eps2
    R = min(table.uv_b - (R1 + r), table.v_b_given_u - R1) - eps3
    if R <= 0:
        raise InfeasibleRatesError(
            f"no positive message rate with margins ({eps1}, {eps2}, {eps3}): "
            f"the best rate would be {R:.6g}"
        )

    allocation = RateAllocation(R, R1, r, slack=(eps1, eps2, eps3))
    LOGGER.debug("allocated %s", allocation)
    return allocation


class ErasureCheck:
    """
    Result of moving a state violating ``I[U;B] ≥ I[U;S]`` with an erasure
    extension. Every ``*_margin`` must be non-negative (up to tolerance).
    """

    def __init__(self, epsilon: float, rate_a: float, original, extended):
        self.epsilon: float = epsilon
        """erasure probability solving the boundary equation"""

        self.rate_a: float = rate_a
        """``R_a`` of the original state"""

        self.boundary_residual: float = extended.u_b - extended.u_s
        """``I[U';B] - I[U';S]`` on the extended state, should vanish"""

        self.total_margin: float = (extended.uv_b - extended.uv_s) - rate_a
        """``I[U'V';B] - I[U'V';S] - R_a``"""

        self.secrecy_margin: float = (
            epsilon * (original.v_b_given_u - original.v_e_given_u) - rate_a
        )
        """``ε (I[V;B|U] - I[V;E|U]) - R_a``"""

        self.scaling_residual: float = (
            extended.v_b_given_u
            - extended.v_e_given_u
            - epsilon * (original.v_b_given_u - original.v_e_given_u)
        )
        """``I[V';B|U'] - I[V';E|U'] - ε (I[V;B|U] - I[V;E|U])``, should vanish"""

        self.rate_alt: float = min(
            extended.v_b_given_u - extended.v_e_given_u,
            extended.uv_b - extended.uv_s,
        )
        """``R_alt`` of the extended state"""

    def passed(self, tol: float = ERASURE_CHECK_TOL) -> bool:
        """Do all the erasure identities and inequalities hold?"""
        return (
            abs(self.boundary_residual) <= tol
            and abs(self.scaling_residual) <= tol
            and self.total_margin >= -tol
            and self.secrecy_margin >= -tol
        )

    def as_dict(self) -> Dict:
        return {
            "epsilon": self.epsilon,
            "boundary_residual": self.boundary_residual,
            "total_margin": self.total_margin,
            "secrecy_margin": self.secrecy_margin,
            "scaling_residual": self.scaling_residual,
            "rate_alt": self.rate_alt,
            "passed": self.passed(),
        }


def erasure_check(state: CQState) -> ErasureCheck:
    """
    Solve the erasure probability of ``state`` (see
    :py:func:`gpwlab.cq.solve_erasure_epsilon`), extend the state and check
    that the extended state keeps the rate ``R_a`` of the original one.
    """
    original = von_neumann_quantities(state)
    point = RatePoint(original)
    epsilon = solve_erasure_epsilon(state)
    extended = von_neumann_quantities(erasure_extend(state, epsilon))
    return ErasureCheck(epsilon, point.rate_a, original, extended)


class LemmaLAReport:
    """Comparison of the maxima of ``R_a`` and ``R_alt`` over a family"""

    def __init__(
        self,
        points: List[Tuple[Parameters, RatePoint]],
        erasure: Optional[ErasureCheck],
    ):
        self.points = points
        """all sampled ``(parameters, RatePoint)`` pairs, in grid order"""

        best = int(np.argmax([p.rate_a for _, p in points]))
        self.argmax: Parameters = points[best][0]
        """parameters of the state maximizing ``R_a``"""

        self.max_rate_a: float = points[best][1].rate_a
        """maximum of ``R_a`` over the family"""

        members = [p.rate_alt for _, p in points if p.s2_member]
        self.max_rate_alt: Optional[float] = max(members) if members else None
        """maximum of ``R_alt`` over the states with ``I[U;B] ≥ I[U;S]``"""

        self.erasure: Optional[ErasureCheck] = erasure
        """erasure extension of the maximizer, when it violates ``I[U;B] ≥ I[U;S]``"""

    @property
    def gap(self) -> Optional[float]:
        """``|max R_a - max R_alt|`` when both maxima exist"""
        if self.max_rate_alt is None:
            return None
        return abs(self.max_rate_a - self.max_rate_alt)

    def as_dict(self) -> Dict:
        return {
            "argmax": list(self.argmax),
            "max_rate_a": self.max_rate_a,
            "max_rate_alt": self.max_rate_alt,
            "gap": self.gap,
            "erasure": None if self.erasure is None else self.erasure.as_dict(),
        }


def lemma_LA_equivalence(
    family: StateFamily,
    grid: Optional[Sequence[Parameters]] = None,
    threads: int = 1,
) -> LemmaLAReport:
    """
    Compare the maximum of ``R_a`` over all the states of ``family`` with the
    maximum of ``R_alt`` over the states satisfying ``I[U;B] ≥ I[U;S]``.

    When the maximizer of ``R_a`` violates ``I[U;B] ≥ I[U;S]`` and has a
    positive rate, it is moved inside the set with an erasure extension, and
    the extension is checked to keep the rate (see :py:func:`erasure_check`).

    :param family: the sampled family of states
    :param grid: parameters to sample, defaults to the family grid
    :param threads: number of threads evaluating the grid points
    """
    grid = family.grid if grid is None else [tuple(p) for p in grid]
    if len(grid) == 0:
        raise EmptyFeasibleSetError("no parameters to sample in the family")

    def evaluate(parameters):
        return rate_point(family.evaluation_state(parameters))

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        points = list(zip(grid, executor.map(evaluate, grid)))

    erasure = None
    best = max(points, key=lambda entry: entry[1].rate_a)
    if not best[1].s2_member and best[1].rate_a > 0:
        erasure = erasure_check(family.evaluation_state(best[0]))

    report = LemmaLAReport(points, erasure)
    LOGGER.info(
        "max R_a = %.9g at %s, max R_alt = %s",
        report.max_rate_a,
        report.argmax,
        report.max_rate_alt,
    )
    return report


def trivialize(
    state: CQState,
    quantum: Sequence[str] = (),
    merge_classical: bool = False,
    u: str = "U",
    v: str = "V",
) -> CQState:
    """
    Make some registers of ``state`` trivial: the quantum registers in
    ``quantum`` are traced out, and with ``merge_classical`` the classical
    registers ``U`` and ``V`` are merged into a single register named ``V``
    (leaving ``U`` trivial).
    """
    kept = state.quantum_layout.complement(quantum)
    state = state.marginal(quantum=kept)
    if merge_classical:
        state = state.merge_classical([u, v], v)
    return state


class CorollaryRates:
    """Rates of the three special cases of the coding theorem"""

    def __init__(self, holevo: float, wiretap: float, gel_fand_pinsker: float, k: int):
        self.holevo: float = holevo
        """``max I[X;B] / k`` for the point-to-point channel ``A → B``"""

        self.wiretap: float = wiretap
        """``max (I[X;B] - I[X;E]) / k`` for the wiretap channel ``A → BE``"""

        self.gel_fand_pinsker: float = gel_fand_pinsker
        """``max R_alt / k`` without eavesdropper"""

        self.k: int = k
        """number of channel uses"""

    def as_dict(self) -> Dict:
        return {
            "holevo": self.holevo,
            "wiretap": self.wiretap,
            "gel_fand_pinsker": self.gel_fand_pinsker,
            "k": self.k,
        }


def corollary_reductions(
    channel: QuantumChannel, family: StateFamily, k: int = 1
) -> CorollaryRates:
    """
    Evaluate the special cases of ``R_alt`` over ``k`` uses of ``channel``,
    maximizing over the states of ``family`` (taken ``k`` times
    independently):

    - point-to-point: ``U``, ``S`` and ``E`` trivial, giving ``I[X;B]``;
    - wiretap: ``U`` and ``S`` trivial, giving ``I[X;B] - I[X;E]``;
    - Gel'fand-Pinsker: ``E`` trivial.

    Each maximum is divided by ``k``.

    :param channel: channel from ``(A, S)`` to ``(B, E)``
    :param family: family of encoder states over ``(U, V; A, S)``
    :param k: number of channel uses, between 1 and 3
    """
    if k not in (1, 2, 3):
        raise ValueError(f"the number of channel uses must be 1, 2 or 3, got {k}")
    family.check_not_empty()

    block_channel = channel.tensor_power(k)
    holevo = []
    wiretap = []
    gel_fand_pinsker = []
    for parameters in family:
        setup = SideInfoSetup(block_channel, family.state(parameters).tensor_power(k))
        state = setup.evaluation_state()

        point_to_point = trivialize(state, ["S", "E"], merge_classical=True)
        holevo.append(rate_point(point_to_point).rate_alt)

        with_eavesdropper = trivialize(state, ["S"], merge_classical=True)
        wiretap.append(rate_point(with_eavesdropper).rate_alt)

        without_eavesdropper = trivialize(state, ["E"])
        gel_fand_pinsker.append(rate_point(without_eavesdropper).rate_alt)

    return CorollaryRates(
        max(holevo) / k, max(wiretap) / k, max(gel_fand_pinsker) / k, k
    )
