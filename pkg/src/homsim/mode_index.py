"""Spatial-mode labels and the canonical orderings used throughout the package.

LG modes are labelled by radial index ``p`` and azimuthal index ``ell``; HG modes
by their Cartesian orders ``(m, n)``. Both have a mode order (``2p + |ell|`` and
``m + n``), and basis conversion only mixes modes of equal order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, order=True)
class LGIndex:
    p: int
    ell: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.ell, int):
            raise TypeError("LG indices must be integers")
        if self.p < 0:
            raise ValueError(f"radial index must be non-negative, got p={self.p}")

    @property
    def order(self) -> int:
        return 2 * self.p + abs(self.ell)

    def __str__(self) -> str:
        return f"LG({self.p},{self.ell})"


@dataclass(frozen=True, order=True)
class HGIndex:
    m: int
    n: int

    def __post_init__(self):
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise TypeError("HG indices must be integers")
        if self.m < 0 or self.n < 0:
            raise ValueError(f"HG orders must be non-negative, got ({self.m},{self.n})")

    @property
    def order(self) -> int:
        return self.m + self.n

    def __str__(self) -> str:
        return f"HG({self.m},{self.n})"


Mode = Union[LGIndex, HGIndex]

_MODE_RE = re.compile(r"^\s*(LG|HG)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_mode(text: str) -> Mode:
    """Parse ``"LG(p,ell)"`` or ``"HG(m,n)"``; inverse of ``str(mode)``."""
    match = _MODE_RE.match(text)
    if match is None:
        raise ValueError(f"cannot parse mode {text!r}; expected LG(p,ell) or HG(m,n)")
    kind, a, b = match.group(1), int(match.group(2)), int(match.group(3))
    return LGIndex(a, b) if kind == "LG" else HGIndex(a, b)


def _check_order(N: int) -> None:
    if not isinstance(N, int) or N < 0:
        raise ValueError(f"mode order must be a non-negative integer, got {N!r}")


def lg_modes_of_order(N: int) -> list[LGIndex]:
    """LG modes with ``2p + |ell| == N``, ``ell`` descending (``N, N-2, ..., -N``)."""
    _check_order(N)
    return [LGIndex((N - abs(ell)) // 2, ell) for ell in range(N, -N - 1, -2)]


def hg_modes_of_order(N: int) -> list[HGIndex]:
    """HG modes with ``m + n == N``, ``m`` descending."""
    _check_order(N)
    return [HGIndex(m, N - m) for m in range(N, -1, -1)]


def modes_of_order(kind: str, N: int) -> list[Mode]:
    if kind == "LG":
        return lg_modes_of_order(N)
    if kind == "HG":
        return hg_modes_of_order(N)
    raise ValueError(f"unknown basis {kind!r}")


def position_in_order(mode: Mode) -> int:
    """Index of ``mode`` within the canonical list of its order."""
    if isinstance(mode, LGIndex):
        return (mode.order - mode.ell) // 2
    return mode.order - mode.m


def basis_of(mode: Mode) -> str:
    return "LG" if isinstance(mode, LGIndex) else "HG"


def canonical_key(mode: Mode) -> tuple[int, int]:
    """Sort key: mode order first, then position within the order."""
    return (mode.order, position_in_order(mode))
