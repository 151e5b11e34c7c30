import os

import numpy as np

from gpwlab import CQState, DensityMatrix, QuantumChannel
from gpwlab.families import BinaryWiretapFamily


DATA_ROOT = os.path.join(os.path.dirname(__file__), "data")


def binary_entropy(p):
    """binary entropy in bits"""
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def random_density_matrix(rng, layout, rank=None):
    """
    Create a random full rank (or rank ``rank``) density matrix on ``layout``,
    from a Gaussian matrix ``G`` as ``G G^† / Tr[G G^†]``.
    """
    dim = int(np.prod([d for _, d in layout]))
    rank = dim if rank is None else rank
    matrix = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    data = matrix @ matrix.conj().T
    return DensityMatrix(data / np.real(np.trace(data)), layout)


def random_channel(rng, input_layout, output_layout, n_kraus=3):
    """
    Create a random channel with ``n_kraus`` Kraus operators, cut from a
    random isometry obtained by QR decomposition of a Gaussian matrix.
    """
    d_in = int(np.prod([d for _, d in input_layout]))
    d_out = int(np.prod([d for _, d in output_layout]))
    shape = (n_kraus * d_out, d_in)
    gaussian = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    isometry, _ = np.linalg.qr(gaussian)
    kraus = [isometry[k * d_out : (k + 1) * d_out] for k in range(n_kraus)]
    return QuantumChannel(kraus, input_layout, output_layout)


def random_cq_state(rng, classical, quantum):
    """Create a cq state with random full rank conditional states"""
    sizes = [size for _, size in classical]
    pmf = rng.uniform(0.1, 1.0, size=sizes)
    pmf /= np.sum(pmf)

    conditionals = {
        index: random_density_matrix(rng, quantum) for index in np.ndindex(*sizes)
    }
    return CQState(classical, pmf, conditionals, quantum)


def binary_state(p_v=0.5, c=0.0, q_b=0.1, q_e=0.3):
    """
    Evaluation state over ``(U, V; B, E, S)`` of the binary family with a
    single set of parameters.
    """
    family = BinaryWiretapFamily(q_b, q_e, p_v=[p_v], c=[c])
    return family.evaluation_state((p_v, c))


def binary_setup(p_v=0.5, c=0.0, q_b=0.1, q_e=0.3):
    """Coding setup of the binary family with a single set of parameters"""
    family = BinaryWiretapFamily(q_b, q_e, p_v=[p_v], c=[c])
    return family.setup((p_v, c))


def noiseless_state(size=4):
    """
    State with a trivial ``U``, a uniform ``V`` with ``size`` symbols and a
    receiver ``B`` getting a perfect copy of ``V``. There is no eavesdropper
    and no channel state.
    """
    conditionals = {}
    for v in range(size):
        vector = np.zeros(size)
        vector[v] = 1.0
        conditionals[(0, v)] = DensityMatrix.from_pure(vector, [("B", size)])

    return CQState(
        [("U", 1), ("V", size)],
        np.full((1, size), 1.0 / size),
        conditionals,
        [("B", size)],
    )
