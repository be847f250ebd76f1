"""Optical elements of the HOM setup and the coincidence probabilities they give.

Beamsplitter convention: a+ -> (c+ + i d+)/sqrt(2), b+ -> (i c+ + d+)/sqrt(2).
For a two-photon amplitude map ``c`` the probability of one photon at detector C
in mode u and the other at detector D in mode v is ``|c_uv - c_vu|^2 / 4`` when
the photons are indistinguishable in time, and ``(|c_uv|^2 + |c_vu|^2) / 4``
when a path delay makes them distinguishable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import speed_of_light

from homsim.biphoton_state import (
    Basis,
    BasisMismatchError,
    LocalUnitary,
    TwoPhotonState,
    apply_local,
)
from homsim.mode_index import Mode, basis_of, lg_modes_of_order


@dataclass(frozen=True)
class DovePairSetting:
    theta: float  # radians between the two prisms


@dataclass(frozen=True)
class DelaySetting:
    tau: float
    coherence_time: float

    def __post_init__(self):
        if not self.coherence_time > 0:
            raise ValueError("coherence_time must be positive")


@dataclass(frozen=True)
class CoincidenceResult:
    probability: float
    mode_pair: tuple[Mode, Mode]


def dove_pair_unitary(theta: float) -> LocalUnitary:
    """Diagonal LG operator |L_p^l> -> exp(-2i l theta) |L_p^l>.

    Two Dove prisms at relative angle theta rotate the image by 2*theta.
    """

    def block(N: int) -> np.ndarray:
        ells = np.array([m.ell for m in lg_modes_of_order(N)])
        return np.diag(np.exp(-2j * ells * theta))

    return LocalUnitary(basis=Basis.LG, generator=block)


def apply_dove_pair(state: TwoPhotonState, theta: float) -> TwoPhotonState:
    """Rotate the image on path B only."""
    return apply_local(state, LocalUnitary.identity(), dove_pair_unitary(theta))


def _pair_amplitudes(state: TwoPhotonState, u: Mode, v: Mode) -> tuple[complex, complex]:
    if basis_of(u) != state.basis.value or basis_of(v) != state.basis.value:
        raise BasisMismatchError(
            f"detection modes {u}, {v} are not in the state's {state.basis.value} basis"
        )
    return state.amplitude(u, v), state.amplitude(v, u)


def visibility(tau: float, coherence_time: float) -> float:
    """Gaussian two-photon visibility envelope exp(-(tau/tau_c)^2)."""
    return math.exp(-((tau / coherence_time) ** 2))


def coincidence_interfering(state: TwoPhotonState, u: Mode, v: Mode) -> CoincidenceResult:
    cuv, cvu = _pair_amplitudes(state, u, v)
    return CoincidenceResult(abs(cuv - cvu) ** 2 / 4, (u, v))


def coincidence_distinguishable(state: TwoPhotonState, u: Mode, v: Mode) -> CoincidenceResult:
    cuv, cvu = _pair_amplitudes(state, u, v)
    return CoincidenceResult((abs(cuv) ** 2 + abs(cvu) ** 2) / 4, (u, v))


def coincidence_with_delay(state: TwoPhotonState, u: Mode, v: Mode, delay: DelaySetting) -> CoincidenceResult:
    cuv, cvu = _pair_amplitudes(state, u, v)
    V = visibility(delay.tau, delay.coherence_time)
    dist = (abs(cuv) ** 2 + abs(cvu) ** 2) / 4
    interf = abs(cuv - cvu) ** 2 / 4
    # equals dist - Re(cuv conj(cvu)) V / 2; this form stays monotone in V under rounding
    if V == 1.0:
        prob = interf
    elif V == 0.0:
        prob = dist
    else:
        prob = dist + V * (interf - dist)
    return CoincidenceResult(float(prob), (u, v))


def coherence_time_from_filter(center_wavelength: float, bandwidth: float) -> float:
    """tau_c = lambda^2 / (c * delta_lambda), in seconds."""
    if not (center_wavelength > 0 and bandwidth > 0):
        raise ValueError("wavelength and bandwidth must be positive")
    return center_wavelength**2 / (speed_of_light * bandwidth)


def total_coincidence_probability(state: TwoPhotonState) -> float:
    """Sum of coincidence_interfering over all ordered detection-mode pairs.

    Equals the squared norm of the exchange-antisymmetric part of the state.
    """
    pairs = set(state.amplitudes) | {(b, a) for a, b in state.amplitudes}
    return sum(abs(state.amplitude(a, b) - state.amplitude(b, a)) ** 2 / 4 for a, b in pairs)
