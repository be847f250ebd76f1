"""Hong-Ou-Mandel interference of entangled Laguerre-Gauss / Hermite-Gauss photon pairs.

Submodules
----------
mode_index
    LG/HG mode labels, mode orders and canonical orderings.
poly_oracle
    Exact Gaussian-rational bivariate polynomials; Hermite/Laguerre generators
    and the LG-to-HG polynomial identity.
basis_conversion
    Normalized per-order unitary between LG and HG amplitudes.
biphoton_state
    Two-photon states, Bell/SPDC constructors, local unitaries, exchange symmetry.
interferometer
    Dove-prism pair, 50:50 beamsplitter coincidence probabilities, delay envelope.
experiment
    Coincidence grid scans, dip traces, CSV/PGM output.
"""

from homsim.mode_index import HGIndex, LGIndex, hg_modes_of_order, lg_modes_of_order, parse_mode

__all__ = [
    "HGIndex",
    "LGIndex",
    "hg_modes_of_order",
    "lg_modes_of_order",
    "parse_mode",
]

__version__ = "0.1.0"
