"""
``gpwlab`` evaluates achievable rates, finite blocklength error and leakage
bounds of wiretap codes whose channel depends on a quantum state known to the
encoder, and checks these bounds against randomly sampled codes.

The core objects are :py:class:`gpwlab.RegisterLayout`,
:py:class:`gpwlab.DensityMatrix` and the classical-quantum states
:py:class:`gpwlab.CQState`. :ref:`Operations <python-api-operations>` act on
density matrices, and the information quantities, pinching maps, rates and
exponents are built on top of them.
"""

from .version import __version__  # noqa
from .operations import *  # noqa
from .layout import RegisterLayout  # noqa
from .state import DensityMatrix  # noqa
from .status import GpwlabError  # noqa
from .cq import CQState, QuantumChannel, SideInfoSetup  # noqa

from .io import load_setup, load_state, save_state  # noqa


__all__ = [
    "CQState",
    "DensityMatrix",
    "GpwlabError",
    "QuantumChannel",
    "RegisterLayout",
    "SideInfoSetup",
    "load_setup",
    "load_state",
    "save_state",
]
