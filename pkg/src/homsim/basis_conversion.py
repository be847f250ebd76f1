"""Normalized unitary change of basis between LG and HG modes of one order.

Columns of :func:`conversion_matrix` are LG modes (``ell`` descending), rows are
HG modes (``m`` descending). Each column is the exact Hermite-product expansion
from :mod:`homsim.poly_oracle`, weighted by the Gaussian norm of each Hermite
product, normalized, and phase-rotated so the ``HG(N,0)`` entry is real and
non-negative.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from homsim.mode_index import HGIndex, LGIndex, hg_modes_of_order, lg_modes_of_order
from homsim.poly_oracle import raw_lg_coefficients

UNITARY_TOL = 1e-12


def hermite_norm_factor(a: int, b: int) -> float:
    """sqrt(2^(a+b) a! b!): Gaussian-weighted norm of H_a(x)H_b(y), up to sqrt(pi)."""
    return math.sqrt(2 ** (a + b) * math.factorial(a) * math.factorial(b))


def _column(mode: LGIndex) -> np.ndarray:
    N = mode.order
    rows = hg_modes_of_order(N)
    raw = raw_lg_coefficients(mode.p, mode.ell)
    vec = np.zeros(N + 1, dtype=complex)
    for i, hg in enumerate(rows):
        c = raw.get(hg)
        if c is not None:
            vec[i] = complex(c) * hermite_norm_factor(hg.m, hg.n)
    extra = set(raw) - set(rows)
    if extra:
        raise AssertionError(f"{mode} expands outside its order: {sorted(map(str, extra))}")
    vec /= np.linalg.norm(vec)
    lead = vec[0]
    if abs(lead) > 0:
        vec *= abs(lead) / lead
    vec[0] = abs(vec[0])
    return vec


@lru_cache(maxsize=None)
def _matrix(N: int) -> np.ndarray:
    U = np.column_stack([_column(mode) for mode in lg_modes_of_order(N)])
    U.setflags(write=False)
    return U


def conversion_matrix(N: int) -> np.ndarray:
    """(N+1)x(N+1) unitary mapping LG amplitudes of order N to HG amplitudes.

    The returned array is shared and read-only.
    """
    if not isinstance(N, int) or N < 0:
        raise ValueError(f"mode order must be a non-negative integer, got {N!r}")
    return _matrix(N)


def lg_to_hg_coeffs(mode: LGIndex) -> dict[HGIndex, complex]:
    """Normalized HG expansion of one LG mode (nonzero entries only)."""
    U = conversion_matrix(mode.order)
    col = lg_modes_of_order(mode.order).index(mode)
    return {hg: complex(U[i, col]) for i, hg in enumerate(hg_modes_of_order(mode.order)) if U[i, col] != 0}


def hg_to_lg_coeffs(mode: HGIndex) -> dict[LGIndex, complex]:
    """Normalized LG expansion of one HG mode: a row of U conjugate-transposed."""
    U = conversion_matrix(mode.order)
    row = hg_modes_of_order(mode.order).index(mode)
    out = {}
    for j, lg in enumerate(lg_modes_of_order(mode.order)):
        v = complex(np.conj(U[row, j]))
        if abs(v) > 1e-15:
            out[lg] = v
    return out


def unitarity_error(U: np.ndarray) -> float:
    """max |U^H U - I|."""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
