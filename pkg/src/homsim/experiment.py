"""Measurement campaigns: joint-mode coincidence grids and HOM dip traces.

Counts are expected values, probability * pair_rate * integration_time.
Shot noise is only added on request (:func:`with_shot_noise`).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.special import eval_genlaguerre, eval_hermite

from homsim.biphoton_state import DEMO_SPECTRUM, Basis, SpdcSpectrum, TwoPhotonState, spdc_state, to_basis
from homsim.interferometer import (
    DelaySetting,
    apply_dove_pair,
    coherence_time_from_filter,
    coincidence_with_delay,
)
from homsim.mode_index import HGIndex, LGIndex, Mode, basis_of, canonical_key, parse_mode

INTERFERENCE_MODES = ("interfering", "distinguishable", "delay_scan")


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    spectrum: SpdcSpectrum = DEMO_SPECTRUM
    dove_theta_degrees: float = 0.0
    detection_basis: Basis = Basis.HG
    max_index: int = 4
    interference: str = "interfering"
    delays: tuple[float, ...] = ()
    pair_rate: float = 1.0
    integration_time: float = 1.0
    # interference filter; sets the coherence time of the dip envelope
    center_wavelength: float = 710e-9
    filter_bandwidth: float = 10e-9

    def __post_init__(self):
        try:
            object.__setattr__(self, "detection_basis", Basis(self.detection_basis))
        except ValueError:
            raise ConfigError("detection_basis", f"expected LG or HG, got {self.detection_basis!r}") from None
        object.__setattr__(self, "delays", tuple(float(t) for t in self.delays))
        if not isinstance(self.max_index, int) or self.max_index < 0:
            raise ConfigError("max_index", "must be a non-negative integer")
        if self.interference not in INTERFERENCE_MODES:
            raise ConfigError("interference", f"must be one of {', '.join(INTERFERENCE_MODES)}")
        if self.interference == "delay_scan" and not self.delays:
            raise ConfigError("delays", "delay_scan needs a non-empty list of delays")
        for name in ("pair_rate", "integration_time", "center_wavelength", "filter_bandwidth"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(name, "must be a positive number")
        if not math.isfinite(self.dove_theta_degrees):
            raise ConfigError("dove_theta_degrees", "must be finite")

    @property
    def scale(self) -> float:
        return self.pair_rate * self.integration_time

    @property
    def coherence_time(self) -> float:
        return coherence_time_from_filter(self.center_wavelength, self.filter_bandwidth)


PRESETS: dict[str, RunConfig] = {
    "fig2": RunConfig(dove_theta_degrees=0.0, detection_basis=Basis.HG, max_index=4),
    "fig3": RunConfig(dove_theta_degrees=45.0, detection_basis=Basis.HG, max_index=4),
}


def _parse_spectrum(value: Any) -> SpdcSpectrum:
    if isinstance(value, str):
        if value == "demo":
            return DEMO_SPECTRUM
        raise ConfigError("spectrum", f"unknown spectrum preset {value!r}")
    if not isinstance(value, list) or not value:
        raise ConfigError("spectrum", "expected 'demo' or a non-empty list of entries")
    entries = []
    for item in value:
        try:
            if isinstance(item, Mapping):
                alpha = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
                entries.append((int(item["p"]), int(item["q"]), int(item["ell"]), alpha))
            else:
                p, q, ell, alpha = item
                entries.append((int(p), int(q), int(ell), complex(alpha)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("spectrum", f"bad entry {item!r}: {exc}") from None
    try:
        return SpdcSpectrum(tuple(entries))
    except ValueError as exc:
        raise ConfigError("spectrum", str(exc)) from None


def config_from_dict(doc: Mapping[str, Any]) -> RunConfig:
    """Build a RunConfig from a JSON-style mapping.

    An optional ``"preset"`` key selects a base config; other keys override it.
    """
    doc = dict(doc)
    preset = doc.pop("preset", None)
    if preset is None:
        base = RunConfig()
    elif preset in PRESETS:
        base = PRESETS[preset]
    else:
        raise ConfigError("preset", f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config field")
    if "spectrum" in doc:
        doc["spectrum"] = _parse_spectrum(doc["spectrum"])
    if "delays" in doc:
        if not isinstance(doc["delays"], list):
            raise ConfigError("delays", "must be a list of seconds")
        doc["delays"] = tuple(doc["delays"])
    if "max_index" in doc and not isinstance(doc["max_index"], int):
        raise ConfigError("max_index", "must be a non-negative integer")
    return replace(base, **doc)


def load_config(source: str) -> RunConfig:
    """Load a preset by name or a JSON config file by path."""
    if source in PRESETS and not os.path.exists(source):
        return PRESETS[source]
    try:
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {source}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{source} is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ConfigError("config", "top level must be a JSON object")
    return config_from_dict(doc)


def detection_modes(basis, max_index: int) -> list[Mode]:
    """All detection modes with indices bounded by ``max_index``, canonical order.

    HG: 0 <= m, n <= max_index. LG: 0 <= p <= max_index, |ell| <= max_index.
    """
    basis = Basis(basis)
    if basis is Basis.HG:
        modes: list[Mode] = [HGIndex(m, n) for m in range(max_index + 1) for n in range(max_index + 1)]
    else:
        modes = [LGIndex(p, ell) for p in range(max_index + 1) for ell in range(-max_index, max_index + 1)]
    return sorted(modes, key=canonical_key)


def prepare_state(config: RunConfig) -> TwoPhotonState:
    """SPDC state, Dove pair on path B, then expressed in the detection basis."""
    state = spdc_state(config.spectrum)
    state = apply_dove_pair(state, math.radians(config.dove_theta_degrees))
    return to_basis(state, config.detection_basis)


@dataclass(frozen=True)
class CoincidenceGrid:
    rows: tuple[Mode, ...]
    cols: tuple[Mode, ...]
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.shape != (len(self.rows), len(self.cols)):
            raise ValueError("count matrix does not match mode lists")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    def cell(self, u: Mode, v: Mode) -> float:
        return float(self.counts[self.rows.index(u), self.cols.index(v)])


def _amplitude_matrix(state: TwoPhotonState, modes: Sequence[Mode]) -> np.ndarray:
    index = {m: i for i, m in enumerate(modes)}
    C = np.zeros((len(modes), len(modes)), dtype=complex)
    for (a, b), v in state.amplitudes.items():
        if a in index and b in index:
            C[index[a], index[b]] = v
    return C


def scan_grid(config: RunConfig, interference: str | None = None) -> CoincidenceGrid:
    """Expected coincidence counts for every ordered pair of detection modes.

    ``interference`` overrides the config's setting ("interfering" or
    "distinguishable").
    """
    mode = interference or config.interference
    if mode not in ("interfering", "distinguishable"):
        raise ConfigError("interference", f"grid scans need 'interfering' or 'distinguishable', got {mode!r}")
    state = prepare_state(config)
    modes = detection_modes(config.detection_basis, config.max_index)
    C = _amplitude_matrix(state, modes)
    if mode == "interfering":
        prob = np.abs(C - C.T) ** 2 / 4
    else:
        prob = (np.abs(C) ** 2 + np.abs(C.T) ** 2) / 4
    return CoincidenceGrid(tuple(modes), tuple(modes), prob * config.scale)


@dataclass(frozen=True)
class DipTrace:
    mode_pair: tuple[Mode, Mode]
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        delays = [t for t, _ in self.points]
        if delays != sorted(delays):
            raise ValueError("dip trace points must be sorted by delay")


def scan_dip(config: RunConfig, u: Mode, v: Mode, delays: Sequence[float] | None = None) -> DipTrace:
    """Coincidence counts for the pair (u, v) across path delays."""
    delays = tuple(config.delays if delays is None else delays)
    if not delays:
        raise ConfigError("delays", "dip scan needs a non-empty list of delays")
    for mode in (u, v):
        if basis_of(mode) != config.detection_basis.value:
            raise ConfigError("detection_basis", f"{mode} is not a {config.detection_basis.value} mode")
    state = prepare_state(config)
    tau_c = config.coherence_time
    points = tuple(
        (tau, coincidence_with_delay(state, u, v, DelaySetting(tau, tau_c)).probability * config.scale)
        for tau in sorted(delays)
    )
    return DipTrace((u, v), points)


def with_shot_noise(grid: CoincidenceGrid, seed: int) -> CoincidenceGrid:
    """Poisson-sampled counts around the expected grid, reproducible per seed."""
    rng = np.random.default_rng(seed)
    return CoincidenceGrid(grid.rows, grid.cols, rng.poisson(grid.counts).astype(float))


def grid_cell_classes(
    interfering: CoincidenceGrid,
    distinguishable: CoincidenceGrid,
    zero_tol: float = 1e-12,
    rel_tol: float = 1e-9,
) -> dict[str, list[tuple[Mode, Mode]]]:
    """Sort cells with a nonzero distinguishable baseline into zero / doubled / other.

    The HOM prediction for a state made of Psi+ and Psi- blocks is that
    "other" is empty.
    """
    out: dict[str, list[tuple[Mode, Mode]]] = {"zero": [], "doubled": [], "other": []}
    for i, u in enumerate(interfering.rows):
        for j, v in enumerate(interfering.cols):
            base = distinguishable.counts[i, j]
            val = interfering.counts[i, j]
            if base <= zero_tol:
                if val > zero_tol:
                    out["other"].append((u, v))
                continue
            if val <= zero_tol:
                out["zero"].append((u, v))
            elif abs(val - 2 * base) <= rel_tol * 2 * base:
                out["doubled"].append((u, v))
            else:
                out["other"].append((u, v))
    return out


# Output ---------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value + 0.0:.12g}"


def grid_csv_text(grid: CoincidenceGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["modeC"] + [str(m) for m in grid.cols])
    for u, row in zip(grid.rows, grid.counts):
        writer.writerow([str(u)] + [_fmt(v) for v in row])
    return buf.getvalue()


def _write_text(text: str, path, what: str) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {what} {path}: {exc.strerror or exc}") from exc


def write_grid_csv(grid: CoincidenceGrid, path) -> None:
    """Header ``modeC,<detector-D modes>``; values to 12 significant digits."""
    _write_text(grid_csv_text(grid), path, "grid CSV")


def read_grid_csv(path) -> CoincidenceGrid:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[0] != "modeC":
        raise ValueError(f"{path}: first column must be modeC")
    cols = tuple(parse_mode(h) for h in header[1:])
    row_modes = tuple(parse_mode(r[0]) for r in body)
    counts = np.array([[float(x) for x in r[1:]] for r in body], dtype=float).reshape(len(body), len(cols))
    return CoincidenceGrid(row_modes, cols, counts)


def trace_csv_text(trace: DipTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delay_s", "counts"])
    for tau, counts in trace.points:
        writer.writerow([_fmt(tau), _fmt(counts)])
    return buf.getvalue()


def write_trace_csv(trace: DipTrace, path) -> None:
    _write_text(trace_csv_text(trace), path, "trace CSV")


def mode_field(mode: Mode, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Unnormalized complex field of a unit-waist mode at the waist plane."""
    r2 = x**2 + y**2
    envelope = np.exp(-r2)
    if isinstance(mode, HGIndex):
        return eval_hermite(mode.m, math.sqrt(2) * x) * eval_hermite(mode.n, math.sqrt(2) * y) * envelope
    a = abs(mode.ell)
    sign = 1 if mode.ell >= 0 else -1
    vortex = (math.sqrt(2) * (x + 1j * sign * y)) ** a
    return vortex * eval_genlaguerre(mode.p, a, 2 * r2) * envelope


def render_mode(mode: Mode, grid_size: int, extent: float = 3.0) -> np.ndarray:
    """Intensity image on [-extent, extent]^2 (waist units), peak scaled to 1."""
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    if not extent > 0:
        raise ValueError("extent must be positive")
    axis = np.linspace(-extent, extent, grid_size)
    X, Y = np.meshgrid(axis, axis, indexing="xy")
    # image row 0 is the top edge
    intensity = np.abs(mode_field(mode, X, Y[::-1])) ** 2
    return intensity / intensity.max()


def write_pgm(image: np.ndarray, path) -> None:
    """8-bit binary PGM (P5)."""
    pixels = np.clip(np.rint(np.asarray(image) * 255), 0, 255).astype(np.uint8)
    height, width = pixels.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc.strerror or exc}") from exc
