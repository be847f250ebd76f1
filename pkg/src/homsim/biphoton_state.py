"""Two-photon spatial-mode states and path-exchange symmetry.

A :class:`TwoPhotonState` is a sparse map from ordered mode pairs
``(mode on path A, mode on path B)`` to complex amplitudes, tagged with the
basis (LG or HG) its modes belong to. Operations never mutate; they return new
states.

Internally, local operators act order block by order block: the amplitudes with
photon A in order ``NA`` and photon B in order ``NB`` form a dense
``(NA+1) x (NB+1)`` matrix ``M`` and a local unitary maps it to ``UA @ M @ UB.T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy.stats import unitary_group

from homsim import basis_conversion
from homsim.mode_index import LGIndex, Mode, basis_of, canonical_key, modes_of_order, parse_mode, position_in_order

NORM_TOL = 1e-12
PRUNE_TOL = 1e-14
CLASSIFY_TOL = 1e-9


class Basis(str, Enum):
    LG = "LG"
    HG = "HG"

    def other(self) -> "Basis":
        return Basis.HG if self is Basis.LG else Basis.LG


class BasisMismatchError(ValueError):
    pass


class StateError(ValueError):
    pass


Pair = tuple[Mode, Mode]


@dataclass(frozen=True)
class TwoPhotonState:
    basis: Basis
    amplitudes: Mapping[Pair, complex]

    def __post_init__(self):
        basis = Basis(self.basis)
        clean = {}
        for (a, b), amp in self.amplitudes.items():
            if basis_of(a) != basis.value or basis_of(b) != basis.value:
                raise BasisMismatchError(f"pair ({a}, {b}) does not belong to the {basis.value} basis")
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                clean[(a, b)] = amp
        norm = math.sqrt(sum(abs(v) ** 2 for v in clean.values()))
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalized (norm {norm!r})")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "amplitudes", MappingProxyType(clean))

    @classmethod
    def from_amplitudes(cls, basis, amplitudes: Mapping[Pair, complex], normalize: bool = False) -> "TwoPhotonState":
        amps = {k: complex(v) for k, v in amplitudes.items()}
        if normalize:
            norm = math.sqrt(sum(abs(v) ** 2 for v in amps.values()))
            if norm == 0:
                raise StateError("cannot normalize the zero vector")
            amps = {k: v / norm for k, v in amps.items()}
        return cls(Basis(basis), amps)

    def amplitude(self, a: Mode, b: Mode) -> complex:
        return self.amplitudes.get((a, b), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.amplitudes.values()))

    def orders(self) -> set[int]:
        """Single-photon mode orders occupied on either path."""
        out = set()
        for a, b in self.amplitudes:
            out.add(a.order)
            out.add(b.order)
        return out

    def sorted_terms(self) -> list[tuple[Mode, Mode, complex]]:
        keys = sorted(self.amplitudes, key=lambda k: (canonical_key(k[0]), canonical_key(k[1])))
        return [(a, b, self.amplitudes[(a, b)]) for a, b in keys]

    def allclose(self, other: "TwoPhotonState", tol: float = NORM_TOL) -> bool:
        if self.basis != other.basis:
            return False
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self.amplitude(*k) - other.amplitude(*k)) <= tol for k in keys)

    def to_document(self) -> dict:
        return {
            "basis": self.basis.value,
            "terms": [
                {"modeA": str(a), "modeB": str(b), "re": v.real, "im": v.imag}
                for a, b, v in self.sorted_terms()
            ],
        }

    @classmethod
    def from_document(cls, doc: Mapping, renormalize: bool = False, tol: float = 1e-9) -> "TwoPhotonState":
        """Read the ``{basis, terms: [{modeA, modeB, re, im}]}`` form.

        Input whose norm differs from 1 by more than ``tol`` is rejected unless
        ``renormalize`` is set.
        """
        try:
            basis = Basis(doc["basis"])
            amps: dict[Pair, complex] = {}
            for term in doc["terms"]:
                key = (parse_mode(term["modeA"]), parse_mode(term["modeB"]))
                amps[key] = amps.get(key, 0j) + complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise StateError(f"malformed state document: {exc}") from exc
        norm = math.sqrt(sum(abs(v) ** 2 for v in amps.values()))
        if norm == 0:
            raise StateError("state document has zero norm")
        if not renormalize and abs(norm - 1.0) > tol:
            raise StateError(f"state is not normalized (norm {norm:.12g}); pass renormalize to rescale")
        return cls.from_amplitudes(basis, amps, normalize=True)


def superpose(terms: Iterable[tuple[complex, TwoPhotonState]]) -> TwoPhotonState:
    """Normalized ``sum w_k |s_k>``; all states must share a basis."""
    amps: dict[Pair, complex] = {}
    basis = None
    for w, s in terms:
        if basis is None:
            basis = s.basis
        elif s.basis != basis:
            raise BasisMismatchError("cannot superpose states in different bases")
        for k, v in s.amplitudes.items():
            amps[k] = amps.get(k, 0j) + w * v
    if basis is None:
        raise StateError("nothing to superpose")
    return TwoPhotonState.from_amplitudes(basis, amps, normalize=True)


def product_state(a: Mode, b: Mode) -> TwoPhotonState:
    if basis_of(a) != basis_of(b):
        raise BasisMismatchError("both photons must be labelled in the same basis")
    return TwoPhotonState(Basis(basis_of(a)), {(a, b): 1.0})


# Constructors ---------------------------------------------------------------


def _bell(p: int, q: int, ell: int, sign: int) -> TwoPhotonState:
    if ell < 1:
        raise ValueError("Bell pairs need ell >= 1; at ell = 0 both terms coincide")
    if p < 0 or q < 0:
        raise ValueError("radial indices must be non-negative")
    r = 1 / math.sqrt(2)
    return TwoPhotonState(
        Basis.LG,
        {(LGIndex(p, ell), LGIndex(q, -ell)): r, (LGIndex(p, -ell), LGIndex(q, ell)): sign * r},
    )


def bell_plus(p: int, q: int, ell: int) -> TwoPhotonState:
    """(|L_p^l>_A |L_q^-l>_B + |L_p^-l>_A |L_q^l>_B) / sqrt(2)."""
    return _bell(p, q, ell, +1)


def bell_minus(p: int, q: int, ell: int) -> TwoPhotonState:
    """(|L_p^l>_A |L_q^-l>_B - |L_p^-l>_A |L_q^l>_B) / sqrt(2)."""
    return _bell(p, q, ell, -1)


@dataclass(frozen=True)
class SpdcSpectrum:
    """Entries ``(p, q, ell, alpha)``; each stands for the symmetrized +-ell pair."""

    entries: tuple[tuple[int, int, int, complex], ...]

    def __post_init__(self):
        entries = tuple((int(p), int(q), int(ell), complex(alpha)) for p, q, ell, alpha in self.entries)
        for p, q, ell, _ in entries:
            if p < 0 or q < 0 or ell < 0:
                raise ValueError(f"spectrum entry ({p}, {q}, {ell}) has a negative index")
        object.__setattr__(self, "entries", entries)


# Placeholder OAM spectrum for demos: p = q = 0, decaying weight over ell = 1..4.
DEMO_SPECTRUM = SpdcSpectrum(((0, 0, 1, 0.45), (0, 0, 2, 0.30), (0, 0, 3, 0.15), (0, 0, 4, 0.10)))


def spdc_state(spectrum: SpdcSpectrum) -> TwoPhotonState:
    """Normalized sum of alpha * Psi+ over the spectrum.

    Entries with ``ell = 0`` contribute the product |L_p^0>|L_q^0>. Radial
    indices are symmetrized (``alpha_pq`` and ``alpha_qp`` share the weight) so
    the result is an exchange eigenstate even when ``p != q``.
    """
    amps: dict[Pair, complex] = {}

    def add(key, v):
        amps[key] = amps.get(key, 0j) + v

    r = 1 / math.sqrt(2)
    for p, q, ell, alpha in spectrum.entries:
        if alpha == 0:
            continue
        for a, b in {(p, q), (q, p)}:
            w = alpha if p == q else alpha / 2
            if ell == 0:
                add((LGIndex(a, 0), LGIndex(b, 0)), w)
            else:
                add((LGIndex(a, ell), LGIndex(b, -ell)), w * r)
                add((LGIndex(a, -ell), LGIndex(b, ell)), w * r)
    if all(abs(v) < PRUNE_TOL for v in amps.values()):
        raise StateError("empty spectrum")
    return TwoPhotonState.from_amplitudes(Basis.LG, amps, normalize=True)


# Block representation -------------------------------------------------------


def _to_blocks(state: TwoPhotonState) -> dict[tuple[int, int], np.ndarray]:
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for (a, b), v in state.amplitudes.items():
        key = (a.order, b.order)
        if key not in blocks:
            blocks[key] = np.zeros((a.order + 1, b.order + 1), dtype=complex)
        blocks[key][position_in_order(a), position_in_order(b)] = v
    return blocks


def _from_blocks(basis: Basis, blocks: Mapping[tuple[int, int], np.ndarray], normalize: bool = False) -> TwoPhotonState:
    amps: dict[Pair, complex] = {}
    for (na, nb), M in blocks.items():
        ma = modes_of_order(basis.value, na)
        mb = modes_of_order(basis.value, nb)
        for i, j in zip(*np.nonzero(np.abs(M) >= PRUNE_TOL)):
            amps[(ma[i], mb[j])] = complex(M[i, j])
    return TwoPhotonState.from_amplitudes(basis, amps, normalize=normalize)


# Local operators ------------------------------------------------------------


@dataclass(frozen=True)
class LocalUnitary:
    """Single-photon unitary, block diagonal over mode orders.

    ``blocks`` holds explicit matrices; ``generator`` (if given) supplies any
    other order on demand. ``basis`` restricts which states it may act on
    (``None``: any basis).
    """

    blocks: Mapping[int, np.ndarray] = field(default_factory=dict)
    basis: Basis | None = None
    generator: Callable[[int], np.ndarray] | None = None

    def __post_init__(self):
        checked = {}
        for N, U in self.blocks.items():
            U = np.asarray(U, dtype=complex)
            if U.shape != (N + 1, N + 1):
                raise ValueError(f"block for order {N} must be {(N + 1, N + 1)}, got {U.shape}")
            if basis_conversion.unitarity_error(U) > NORM_TOL:
                raise ValueError(f"block for order {N} is not unitary")
            U.setflags(write=False)
            checked[N] = U
        object.__setattr__(self, "blocks", MappingProxyType(checked))

    @classmethod
    def identity(cls) -> "LocalUnitary":
        return cls(generator=lambda N: np.eye(N + 1, dtype=complex))

    def block(self, N: int) -> np.ndarray:
        if N in self.blocks:
            return self.blocks[N]
        if self.generator is not None:
            return self.generator(N)
        raise StateError(f"local unitary has no block for mode order {N}")


def random_local_unitary(rng: np.random.Generator, max_order: int, basis: Basis | None = None) -> LocalUnitary:
    """Haar-random unitary on every order 0..max_order."""
    blocks = {}
    for N in range(max_order + 1):
        if N == 0:
            blocks[N] = np.array([[np.exp(2j * np.pi * rng.random())]])
        else:
            blocks[N] = unitary_group.rvs(N + 1, random_state=rng)
    return LocalUnitary(blocks, basis)


def apply_local(state: TwoPhotonState, uA: LocalUnitary, uB: LocalUnitary) -> TwoPhotonState:
    """(uA (x) uB)|state>."""
    for u in (uA, uB):
        if u.basis is not None and u.basis != state.basis:
            raise BasisMismatchError(f"operator acts on {u.basis.value} states, state is {state.basis.value}")
    out = {}
    for (na, nb), M in _to_blocks(state).items():
        out[(na, nb)] = uA.block(na) @ M @ uB.block(nb).T
    return _from_blocks(state.basis, out)


def exchange(state: TwoPhotonState) -> TwoPhotonState:
    """Swap the two photon paths: amplitude of (a, b) becomes that of (b, a)."""
    return TwoPhotonState(state.basis, {(b, a): v for (a, b), v in state.amplitudes.items()})


def to_hg(state: TwoPhotonState) -> TwoPhotonState:
    if state.basis is not Basis.LG:
        raise BasisMismatchError("to_hg expects an LG-basis state")
    out = {}
    for (na, nb), M in _to_blocks(state).items():
        out[(na, nb)] = basis_conversion.conversion_matrix(na) @ M @ basis_conversion.conversion_matrix(nb).T
    return _from_blocks(Basis.HG, out)


def to_lg(state: TwoPhotonState) -> TwoPhotonState:
    if state.basis is not Basis.HG:
        raise BasisMismatchError("to_lg expects an HG-basis state")
    out = {}
    for (na, nb), M in _to_blocks(state).items():
        out[(na, nb)] = basis_conversion.conversion_matrix(na).conj().T @ M @ basis_conversion.conversion_matrix(nb).conj()
    return _from_blocks(Basis.LG, out)


def to_basis(state: TwoPhotonState, basis) -> TwoPhotonState:
    basis = Basis(basis)
    if state.basis == basis:
        return state
    return to_hg(state) if basis is Basis.HG else to_lg(state)


def overlap(a: TwoPhotonState, b: TwoPhotonState) -> complex:
    """<a|b>."""
    if a.basis != b.basis:
        raise BasisMismatchError("overlap needs both states in the same basis")
    return sum((np.conj(v) * b.amplitude(*k) for k, v in a.amplitudes.items()), 0j)


# Symmetry -------------------------------------------------------------------


class Symmetry(str, Enum):
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    MIXED = "Mixed"


@dataclass(frozen=True)
class SymmetryClass:
    value: Symmetry
    deviation: float


def exchange_distances(state: TwoPhotonState) -> tuple[float, float]:
    """(||s + Xs||, ||s - Xs||)."""
    plus = minus = 0.0
    pairs = set(state.amplitudes) | {(b, a) for a, b in state.amplitudes}
    for a, b in pairs:
        v, w = state.amplitude(a, b), state.amplitude(b, a)
        plus += abs(v + w) ** 2
        minus += abs(v - w) ** 2
    return math.sqrt(plus), math.sqrt(minus)


def symmetry_classify(state: TwoPhotonState, tol: float = CLASSIFY_TOL) -> SymmetryClass:
    d_plus, d_minus = exchange_distances(state)
    if d_minus <= tol:
        return SymmetryClass(Symmetry.SYMMETRIC, d_minus / 2)
    if d_plus <= tol:
        return SymmetryClass(Symmetry.ANTISYMMETRIC, d_plus / 2)
    return SymmetryClass(Symmetry.MIXED, min(d_plus, d_minus) / 2)


def random_state(
    rng: np.random.Generator,
    max_order: int,
    basis=Basis.LG,
    symmetry: Symmetry | None = None,
) -> TwoPhotonState:
    """Complex-Gaussian random state over all mode pairs up to ``max_order``.

    With ``symmetry`` set, the draw is projected onto that exchange eigenspace.
    """
    basis = Basis(basis)
    modes = [m for N in range(max_order + 1) for m in modes_of_order(basis.value, N)]
    d = len(modes)
    C = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    if symmetry is Symmetry.SYMMETRIC:
        C = C + C.T
    elif symmetry is Symmetry.ANTISYMMETRIC:
        C = C - C.T
    amps = {(modes[i], modes[j]): C[i, j] for i in range(d) for j in range(d)}
    return TwoPhotonState.from_amplitudes(basis, amps, normalize=True)
