"""Variable identifiers.

Three families of commuting indeterminates appear in the analyses:

* base variables x1, x2, ... (kind X),
* fresh tuple variables y<j>_<i>, one full tuple per factor of a product
  (kind Y, tuple index j >= 1),
* scalar parameters t<j> (kind T).

The global order is total: every t variable sorts before every x variable,
which sorts before every y variable; y variables sort by (tuple, index).
This order fixes leading terms and the printing order everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KIND_T = 0
KIND_X = 1
KIND_Y = 2

_NAME_X = re.compile(r"x([1-9][0-9]*)\Z")
_NAME_Y = re.compile(r"y([1-9][0-9]*)_([1-9][0-9]*)\Z")
_NAME_T = re.compile(r"t([1-9][0-9]*)\Z")


@dataclass(frozen=True, order=True)
class VarId:
    kind: int
    tuple_index: int
    index: int

    @property
    def name(self) -> str:
        if self.kind == KIND_X:
            return f"x{self.index}"
        if self.kind == KIND_Y:
            return f"y{self.tuple_index}_{self.index}"
        return f"t{self.tuple_index}"

    def __repr__(self):
        return self.name


def xvar(i: int) -> VarId:
    if i < 1:
        raise ValueError("variable index must be >= 1")
    return VarId(KIND_X, 0, i)


def yvar(j: int, i: int) -> VarId:
    if j < 1 or i < 1:
        raise ValueError("tuple and variable indices must be >= 1")
    return VarId(KIND_Y, j, i)


def tvar(j: int) -> VarId:
    if j < 1:
        raise ValueError("tuple index must be >= 1")
    return VarId(KIND_T, j, 1)


def xvars(n: int) -> list[VarId]:
    """The ordered base-variable universe x1..xn."""
    return [xvar(i) for i in range(1, n + 1)]


def parse_var_name(name: str) -> VarId | None:
    """Map a textual variable name to its VarId, or None if malformed."""
    m = _NAME_X.match(name)
    if m:
        return xvar(int(m.group(1)))
    m = _NAME_Y.match(name)
    if m:
        return yvar(int(m.group(1)), int(m.group(2)))
    m = _NAME_T.match(name)
    if m:
        return tvar(int(m.group(1)))
    return None
