"""
Configuration of the command line experiments, read from JSON files.

Every command reads the same kind of document, for example

.. code-block:: json

    {
        "input": "binary-gp.json",
        "alpha": [0.25, 0.5],
        "rates": {"R": 1, "R1": 1, "r": 1},
        "trials": 100,
        "seed": 42
    }

Unknown keys are rejected, and relative paths are resolved against the
directory of the configuration file.
"""
import dataclasses
import json
import os
from typing import Any, Dict, Optional, Tuple

from .pinching import CLUSTER_TOL
from .status import SchemaError


COMMANDS = ("rate", "exponent", "hyptest", "resolve", "decode", "secrecy", "lemma-la")


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_number(value, what: str, optional: bool = False):
    if optional and value is None:
        return
    if not _is_number(value):
        raise SchemaError(f"{what} should be a number, got {value!r}")


def _check_integer(value, what: str, optional: bool = False):
    if optional and value is None:
        return
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{what} should be an integer, got {value!r}")


@dataclasses.dataclass(frozen=True)
class Rates:
    """Rates ``(R, R1, r)`` of a code, in bits"""

    R: float
    R1: float
    r: float

    def __post_init__(self):
        for name in ("R", "R1", "r"):
            _check_number(getattr(self, name), f"rates.{name}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.R, self.R1, self.r)

    def as_integers(self) -> Tuple[int, int, int]:
        """the rates as integer codebook sizes, for simulated codes"""
        values = self.as_tuple()
        if any(int(value) != value or value < 0 for value in values):
            raise SchemaError(
                f"simulated codes need non-negative integer rates, got {values}"
            )
        return tuple(int(value) for value in values)


@dataclasses.dataclass(frozen=True)
class FamilyConfig:
    """Parameters of :py:class:`gpwlab.families.BinaryWiretapFamily`"""

    q_b: float
    q_e: float
    step: float = 0.02
    p_v: Optional[Tuple[float, ...]] = None
    c: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        _check_number(self.q_b, "family.q_b")
        _check_number(self.q_e, "family.q_e")
        _check_number(self.step, "family.step")


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of one command line experiment"""

    command: str
    """name of the command"""
    input: Optional[str] = None
    """path to the setup file"""
    alpha: Optional[Tuple[float, ...]] = None
    """values of ``α``, each command has its own default"""
    rates: Optional[Rates] = None
    margins: Tuple[float, float, float] = (0.01, 0.01, 0.01)
    """margins used to choose rates when ``rates`` is not given"""
    trials: int = 100
    seed: int = 0
    cluster_tol: float = CLUSTER_TOL
    n: int = 1
    """number of independent copies for the exponent command"""
    optimize: bool = False
    """also optimize ``α`` in the exponent command"""
    M1: Optional[float] = None
    M2: Optional[float] = None
    mode: str = "joint"
    """``"joint"`` or ``"conditional"`` resolvability"""
    beta: float = 1.1
    """expurgation parameter"""
    family: Optional[FamilyConfig] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError(f"unknown command '{self.command}'")
        for name in ("trials", "seed", "n"):
            _check_integer(getattr(self, name), name)
        _check_integer(self.threads, "threads", optional=True)
        for name in ("cluster_tol", "beta"):
            _check_number(getattr(self, name), name)
        _check_number(self.M1, "M1", optional=True)
        _check_number(self.M2, "M2", optional=True)
        if not isinstance(self.optimize, bool):
            raise SchemaError(f"optimize should be a boolean, got {self.optimize!r}")
        if self.input is not None and not isinstance(self.input, str):
            raise SchemaError(f"input should be a path, got {self.input!r}")
        if self.threads is not None and self.threads < 1:
            raise SchemaError(f"threads must be positive, got {self.threads}")
        if self.alpha is not None:
            if len(self.alpha) == 0:
                raise SchemaError("at least one value of alpha is required")
            for alpha in self.alpha:
                if not 0.0 < alpha < 1.0:
                    raise SchemaError(f"alpha must be in (0, 1), got {alpha}")
        if self.trials < 1:
            raise SchemaError(f"trials must be positive, got {self.trials}")
        if self.n < 1:
            raise SchemaError(f"n must be positive, got {self.n}")
        if self.mode not in ("joint", "conditional"):
            raise SchemaError(f"unknown resolvability mode '{self.mode}'")
        if not 0 <= self.seed < 2**64:
            raise SchemaError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}"
            )

        if self.command == "lemma-la":
            if self.family is None:
                raise SchemaError("the lemma-la command requires a 'family'")
        elif self.input is None:
            raise SchemaError(f"the {self.command} command requires an 'input' file")

    def alphas(self, default: Tuple[float, ...]) -> Tuple[float, ...]:
        """the configured values of ``α``, or ``default``"""
        return default if self.alpha is None else self.alpha

    def replace(self, **changes) -> "ExperimentConfig":
        """get a copy of this configuration with some fields changed"""
        return dataclasses.replace(self, **changes)


def _build(cls, data: Dict[str, Any], what: str):
    if not isinstance(data, dict):
        raise SchemaError(f"{what} should be a JSON object")

    fields = {field.name: field for field in dataclasses.fields(cls)}
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise SchemaError(f"unknown keys in {what}: {unknown}")

    missing = [
        name
        for name, field in fields.items()
        if name not in data
        and field.default is dataclasses.MISSING
        and field.default_factory is dataclasses.MISSING
    ]
    if missing:
        raise SchemaError(f"missing keys in {what}: {missing}")

    try:
        return cls(**data)
    except TypeError as e:
        raise SchemaError(f"invalid {what}: {e}") from e


def _as_tuple(value, what: str) -> Tuple[float, ...]:
    if _is_number(value):
        return (float(value),)
    if not isinstance(value, list) or not all(_is_number(v) for v in value):
        raise SchemaError(f"{what} should be a number or a list of numbers")
    return tuple(float(v) for v in value)


def config_from_dict(
    data: Dict[str, Any], command: Optional[str] = None, directory: str = "."
) -> ExperimentConfig:
    """
    Create an :py:class:`ExperimentConfig` from a JSON object. The command can
    be given by the caller instead of the ``"command"`` key; when both are
    present they must agree.

    :param data: the JSON object
    :param command: name of the command being run
    :param directory: directory used to resolve a relative ``input`` path
    """
    if not isinstance(data, dict):
        raise SchemaError("configuration should be a JSON object")
    data = dict(data)

    if command is not None:
        if data.get("command", command) != command:
            raise SchemaError(
                f"configuration is for the '{data['command']}' command, "
                f"not '{command}'"
            )
        data["command"] = command

    if "alpha" in data:
        data["alpha"] = _as_tuple(data["alpha"], "alpha")
    if "margins" in data:
        data["margins"] = _as_tuple(data["margins"], "margins")
        if len(data["margins"]) != 3:
            raise SchemaError("margins should contain three values")
    if data.get("rates") is not None:
        data["rates"] = _build(Rates, data["rates"], "rates")
    if data.get("family") is not None:
        if not isinstance(data["family"], dict):
            raise SchemaError("family should be a JSON object")
        family = dict(data["family"])
        for key in ("p_v", "c"):
            if family.get(key) is not None:
                family[key] = _as_tuple(family[key], f"family.{key}")
        data["family"] = _build(FamilyConfig, family, "family")

    if isinstance(data.get("input"), str) and not os.path.isabs(data["input"]):
        data["input"] = os.path.join(directory, data["input"])

    return _build(ExperimentConfig, data, "configuration")


def load_config(path: str, command: Optional[str] = None) -> ExperimentConfig:
    """Load an :py:class:`ExperimentConfig` from the JSON file at ``path``"""
    try:
        with open(path, encoding="utf8") as fd:
            data = json.load(fd)
    except FileNotFoundError:
        raise SchemaError(f"configuration file '{path}' does not exist") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"configuration file '{path}' is not valid JSON: {e}") from e

    directory = os.path.dirname(os.path.abspath(path))
    return config_from_dict(data, command, directory)
