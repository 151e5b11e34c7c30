"""
Reading cq states, channels and setups from JSON files, and writing the
results of experiments as JSON summaries and CSV tables.

Matrices are stored row-major as nested lists, each complex entry being a
``[re, im]`` pair (plain numbers are accepted for real entries). A cq state
looks like

.. code-block:: json

    {
        "classical": [{"name": "U", "size": 2}, {"name": "V", "size": 2}],
        "pmf": [[0.25, 0.25], [0.25, 0.25]],
        "quantum": [{"name": "A", "dim": 2}, {"name": "S", "dim": 2}],
        "conditionals": {"0,0": [[[1, 0], [0, 0]], ...], ...}
    }

and a channel like ``{"input": [...], "output": [...], "kraus": [...]}``, with
``"transition"`` replacing ``"kraus"`` for classical channels.
"""
import csv
import json
import math
import os
import warnings
from typing import Dict, Iterable, List, Union

import numpy as np

from .cq import CQState, QuantumChannel, SideInfoSetup
from .layout import RegisterLayout
from .state import DensityMatrix
from .status import SchemaError


SCHEMA_VERSION = "v1"

SUMMARY_KEYS = ("schema_version", "command", "result")
"""keys present in every JSON summary"""

PathLike = Union[str, os.PathLike]


def _read_json(path: PathLike) -> Dict:
    try:
        with open(path, encoding="utf8") as fd:
            return json.load(fd)
    except FileNotFoundError:
        raise SchemaError(f"file '{path}' does not exist") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"file '{path}' is not valid JSON: {e}") from e


def _require(data: Dict, keys: Iterable[str], what: str, optional=()):
    if not isinstance(data, dict):
        raise SchemaError(f"{what} should be a JSON object")
    missing = [key for key in keys if key not in data]
    if missing:
        raise SchemaError(f"{what} is missing the keys {missing}")
    unknown = sorted(set(data) - set(keys) - set(optional))
    if unknown:
        raise SchemaError(f"{what} contains unknown keys {unknown}")


def _layout_from_list(entries, size_key: str, what: str) -> RegisterLayout:
    if not isinstance(entries, list):
        raise SchemaError(f"{what} registers should be a list")
    registers = []
    for entry in entries:
        _require(entry, ("name", size_key), f"{what} register")
        size = entry[size_key]
        if not isinstance(size, int) or isinstance(size, bool):
            raise SchemaError(
                f"{what} register '{entry['name']}' should have an integer "
                f"{size_key}, got {size!r}"
            )
        registers.append((str(entry["name"]), size))
    return RegisterLayout(registers)


def _layout_to_list(layout: RegisterLayout, size_key: str) -> List[Dict]:
    return [{"name": name, size_key: dim} for name, dim in layout]


def _only_numbers(value) -> bool:
    if isinstance(value, list):
        return all(_only_numbers(item) for item in value)
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _real_array(value, what: str) -> np.ndarray:
    if not _only_numbers(value):
        raise SchemaError(f"{what} should be nested lists of numbers")
    try:
        return np.array(value, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise SchemaError(
            f"{what} should be nested lists of numbers with a regular shape: {e}"
        ) from e


def matrix_from_json(value) -> np.ndarray:
    """Decode a matrix stored as nested lists of ``[re, im]`` pairs"""
    array = _real_array(value, "matrix")
    if array.ndim == 3 and array.shape[-1] == 2:
        return array[..., 0] + 1j * array[..., 1]
    elif array.ndim == 2:
        return array.astype(np.complex128)
    raise SchemaError(f"can not decode a matrix from an array of shape {array.shape}")


def matrix_to_json(matrix) -> List:
    """Encode a matrix as nested lists of ``[re, im]`` pairs"""
    matrix = np.asarray(matrix, dtype=np.complex128)
    return np.stack([matrix.real, matrix.imag], axis=-1).tolist()


def _parse_index(key: str, size: int):
    if size == 0:
        if key != "":
            raise SchemaError(f"unexpected conditional index '{key}'")
        return ()
    try:
        index = tuple(int(part) for part in key.split(","))
    except ValueError:
        raise SchemaError(f"invalid conditional index '{key}'") from None
    if len(index) != size:
        raise SchemaError(f"conditional index '{key}' should have {size} entries")
    return index


def state_from_dict(data: Dict) -> CQState:
    """Create a :py:class:`gpwlab.cq.CQState` from its JSON representation"""
    _require(data, ("classical", "pmf", "quantum", "conditionals"), "cq state")
    classical = _layout_from_list(data["classical"], "size", "classical")
    quantum = _layout_from_list(data["quantum"], "dim", "quantum")

    if not isinstance(data["conditionals"], dict):
        raise SchemaError("conditionals should be a JSON object")
    conditionals = {
        _parse_index(key, len(classical)): matrix_from_json(value)
        for key, value in data["conditionals"].items()
    }
    pmf = _real_array(data["pmf"], "pmf")
    return CQState(classical, pmf, conditionals, quantum)


def state_to_dict(state: CQState) -> Dict:
    """Get the JSON representation of a :py:class:`gpwlab.cq.CQState`"""
    return {
        "classical": _layout_to_list(state.classical_layout, "size"),
        "pmf": state.pmf.tolist(),
        "quantum": _layout_to_list(state.quantum_layout, "dim"),
        "conditionals": {
            ",".join(str(i) for i in index): matrix_to_json(rho.data)
            for index, _, rho in state
        },
    }


def channel_from_dict(data: Dict) -> QuantumChannel:
    """
    Create a :py:class:`gpwlab.cq.QuantumChannel` from its JSON representation.
    Classical channels can be given by their ``"transition"`` matrix
    ``W[y, x]`` instead of ``"kraus"`` operators.
    """
    if isinstance(data, dict) and "transition" in data:
        _require(data, ("input", "output", "transition"), "channel")
        return QuantumChannel.classical(
            _real_array(data["transition"], "transition matrix"),
            _layout_from_list(data["input"], "dim", "input"),
            _layout_from_list(data["output"], "dim", "output"),
        )

    _require(data, ("input", "output", "kraus"), "channel")
    if not isinstance(data["kraus"], list):
        raise SchemaError("kraus should be a list of matrices")
    return QuantumChannel(
        [matrix_from_json(kraus) for kraus in data["kraus"]],
        _layout_from_list(data["input"], "dim", "input"),
        _layout_from_list(data["output"], "dim", "output"),
    )


def channel_to_dict(channel: QuantumChannel) -> Dict:
    """Get the JSON representation of a :py:class:`gpwlab.cq.QuantumChannel`"""
    return {
        "input": _layout_to_list(channel.input_layout, "dim"),
        "output": _layout_to_list(channel.output_layout, "dim"),
        "kraus": [matrix_to_json(kraus) for kraus in channel.kraus_ops],
    }


def _resolve(value, directory: str, loader):
    if isinstance(value, str):
        path = value if os.path.isabs(value) else os.path.join(directory, value)
        return loader(_read_json(path))
    return loader(value)


def setup_from_dict(data: Dict, directory: str = ".") -> SideInfoSetup:
    """
    Create a :py:class:`gpwlab.cq.SideInfoSetup` from its JSON representation
    ``{"state": ..., "channel": ..., "phi": ..., "side": "S"}``. The state and
    the channel can be given inline or as paths to other JSON files, relative
    to ``directory``. ``phi`` is an optional object ``{"quantum": [...],
    "matrix": ...}``.
    """
    _require(data, ("state", "channel"), "setup", optional=("phi", "side"))
    state = _resolve(data["state"], directory, state_from_dict)
    channel = _resolve(data["channel"], directory, channel_from_dict)

    phi = None
    if data.get("phi") is not None:
        _require(data["phi"], ("quantum", "matrix"), "phi")
        phi = DensityMatrix(
            matrix_from_json(data["phi"]["matrix"]),
            _layout_from_list(data["phi"]["quantum"], "dim", "phi"),
        )
    return SideInfoSetup(channel, state, phi=phi, side=data.get("side", "S"))


def load_state(path: PathLike) -> CQState:
    """Load a :py:class:`gpwlab.cq.CQState` from the JSON file at ``path``"""
    return state_from_dict(_read_json(path))


def load_channel(path: PathLike) -> QuantumChannel:
    """Load a :py:class:`gpwlab.cq.QuantumChannel` from the JSON file at ``path``"""
    return channel_from_dict(_read_json(path))


def load_setup(path: PathLike) -> SideInfoSetup:
    """
    Load a :py:class:`gpwlab.cq.SideInfoSetup` from the JSON file at ``path``.
    Relative paths inside the file are resolved against its directory.
    """
    return setup_from_dict(_read_json(path), os.path.dirname(os.path.abspath(path)))


def _plain(value):
    if isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, np.floating):
        return float(value)
    elif isinstance(value, np.ndarray):
        return value.tolist()
    elif isinstance(value, tuple):
        return list(value)
    elif value is None or isinstance(value, (bool, int, float, str, list, dict)):
        return value
    raise TypeError(f"can not serialize {type(value)} to JSON")


def _float_to_json(value: float) -> str:
    if math.isfinite(value):
        return "%.17g" % value
    # JSON has no literal for these, they are written as strings
    return json.dumps("%.17g" % value)


def _to_json(value, level: int = 0) -> str:
    value = _plain(value)
    inner = "  " * (level + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(key))}: {_to_json(item, level + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    elif isinstance(value, list):
        if not value:
            return "[]"
        items = [inner + _to_json(item, level + 1) for item in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    elif isinstance(value, float):
        return _float_to_json(value)
    return json.dumps(value)


def _with_extension(path: str, extension: str) -> str:
    if not path.endswith(extension):
        path += extension
        warnings.warn(
            message=f"adding '{extension}' extension, the file will be saved "
            f"at '{path}'",
            stacklevel=2,
        )
    return path


def save_state(path: str, state: CQState):
    """Save ``state`` as JSON at ``path``"""
    path = _with_extension(str(path), ".json")
    with open(path, "w", encoding="utf8") as fd:
        json.dump(state_to_dict(state), fd)


def summary(command: str, result) -> Dict:
    """Wrap the result of ``command`` into a versioned JSON summary"""
    return {"schema_version": SCHEMA_VERSION, "command": command, "result": result}


def validate_summary(data: Dict) -> Dict:
    """
    Check that ``data`` is a valid JSON summary, as written by
    :py:func:`write_json`, and return it.
    """
    _require(data, SUMMARY_KEYS, "summary")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema version '{data['schema_version']}', "
            f"expected '{SCHEMA_VERSION}'"
        )
    if not isinstance(data["command"], str):
        raise SchemaError("summary command should be a string")
    return data


def write_json(path: str, command: str, result):
    """
    Write the JSON summary of ``command`` to ``path``. Finite floats are
    written with 17 significant digits, like in CSV tables, and non-finite
    floats as the strings ``"inf"``, ``"-inf"`` and ``"nan"`` so that the file
    stays valid JSON. numpy scalars and arrays are converted to plain values.
    """
    with open(path, "w", encoding="utf8") as fd:
        fd.write(_to_json(summary(command, result)))
        fd.write("\n")


def read_json(path: str) -> Dict:
    """Read and validate a JSON summary written by :py:func:`write_json`"""
    return validate_summary(_read_json(path))


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    elif isinstance(value, (int, np.integer)):
        return str(int(value))
    elif isinstance(value, (float, np.floating)):
        return "%.17g" % value
    elif value is None:
        return ""
    return str(value)


def write_csv(path: str, rows: List[Dict]):
    """
    Write ``rows`` as a CSV table with a header. Columns are the keys of the
    first row, followed by keys only present in later rows; floats are
    written with 17 significant digits.
    """
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)

    with open(path, "w", encoding="utf8", newline="") as fd:
        writer = csv.writer(fd)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format(row.get(column)) for column in columns])
