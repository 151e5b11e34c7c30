from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .status import LayoutMismatchError, SchemaError, UnknownRegisterError


class RegisterLayout:
    """
    A :py:class:`RegisterLayout` is an ordered list of named registers, each one
    with a finite dimension. The same class is used for quantum registers
    (the dimension is the dimension of the Hilbert space) and for classical
    registers (the dimension is the alphabet size).

    The joint space of all registers is flattened in row-major order over the
    declared registers, i.e. the last register varies fastest. This matches
    the convention of :py:func:`numpy.kron`.

    >>> layout = RegisterLayout([("A", 2), ("S", 3)])
    >>> layout.total_dim
    6
    >>> layout.flat_index((1, 2))
    5
    >>> layout.multi_index(5)
    (1, 2)
    """

    def __init__(self, registers: Iterable[Tuple[str, int]]):
        """
        :param registers: sequence of ``(name, dim)`` pairs
        """
        names = []
        dims = []
        for entry in registers:
            if len(entry) != 2:
                raise SchemaError(
                    f"registers must be given as (name, dim) pairs, got {entry}"
                )
            name, dim = entry
            if not isinstance(name, str) or name == "":
                raise SchemaError(
                    f"register names must be non-empty strings, got {name}"
                )

            if name in names:
                raise SchemaError(f"register '{name}' is declared more than once")

            if int(dim) != dim or dim < 1:
                raise SchemaError(
                    f"register '{name}' must have a positive integer dimension, "
                    f"got {dim}"
                )

            names.append(name)
            dims.append(int(dim))

        self._names: Tuple[str, ...] = tuple(names)
        self._dims: Tuple[int, ...] = tuple(dims)

    @staticmethod
    def single(name: str, dim: int) -> "RegisterLayout":
        """Create a layout containing a single register"""
        return RegisterLayout([(name, dim)])

    @property
    def names(self) -> Tuple[str, ...]:
        """names of the registers, in order"""
        return self._names

    @property
    def dims(self) -> Tuple[int, ...]:
        """dimensions of the registers, in order"""
        return self._dims

    @property
    def total_dim(self) -> int:
        """dimension of the joint space, i.e. the product of all dimensions"""
        return int(np.prod(self._dims, dtype=np.int64))

    def index(self, name: str) -> int:
        """position of the register with the given ``name``"""
        try:
            return self._names.index(name)
        except ValueError:
            raise UnknownRegisterError(
                f"register '{name}' is not part of this layout {self._names}"
            ) from None

    def dim(self, name: str) -> int:
        """dimension of the register with the given ``name``"""
        return self._dims[self.index(name)]

    def subset(self, names: Union[str, Iterable[str]]) -> "RegisterLayout":
        """
        Get the layout restricted to ``names``. The registers of the result keep
        the order of this layout, whatever the order of ``names``.
        """
        keep = _as_name_set(names)
        for name in keep:
            self.index(name)

        return RegisterLayout(
            [(n, d) for n, d in zip(self._names, self._dims) if n in keep]
        )

    def complement(self, names: Union[str, Iterable[str]]) -> List[str]:
        """names of the registers of this layout not in ``names``"""
        drop = _as_name_set(names)
        for name in drop:
            self.index(name)
        return [n for n in self._names if n not in drop]

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        """Join two layouts, the registers of ``other`` coming last"""
        return RegisterLayout(list(self) + list(other))

    def flat_index(self, multi_index: Sequence[int]) -> int:
        """Convert per-register indexes to an index in the joint space"""
        if len(multi_index) != len(self._dims):
            raise LayoutMismatchError(
                f"expected {len(self._dims)} indexes, got {len(multi_index)}"
            )
        if len(self._dims) == 0:
            return 0
        return int(np.ravel_multi_index(tuple(multi_index), self._dims))

    def multi_index(self, flat_index: int) -> Tuple[int, ...]:
        """Convert an index in the joint space to per-register indexes"""
        if len(self._dims) == 0:
            if flat_index != 0:
                raise ValueError("the only valid index of an empty layout is 0")
            return ()
        return tuple(int(i) for i in np.unravel_index(flat_index, self._dims))

    def __iter__(self) -> Iterator[Tuple[str, int]]:
        return iter(zip(self._names, self._dims))

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name) -> bool:
        return name in self._names

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegisterLayout):
            return NotImplemented
        return self._names == other._names and self._dims == other._dims

    def __hash__(self):
        return hash((self._names, self._dims))

    def __repr__(self) -> str:
        registers = ", ".join(f"{n}: {d}" for n, d in self)
        return f"RegisterLayout({registers})"


def _as_name_set(names: Union[str, Iterable[str]]) -> List[str]:
    if isinstance(names, str):
        return [names]
    return list(names)
