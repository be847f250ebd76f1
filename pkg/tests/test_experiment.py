import json
import math

import numpy as np
import pytest

from homsim.biphoton_state import Basis, SpdcSpectrum
from homsim.experiment import (
    PRESETS,
    CoincidenceGrid,
    ConfigError,
    DipTrace,
    RunConfig,
    config_from_dict,
    detection_modes,
    grid_cell_classes,
    grid_csv_text,
    load_config,
    prepare_state,
    read_grid_csv,
    render_mode,
    scan_dip,
    scan_grid,
    trace_csv_text,
    with_shot_noise,
    write_grid_csv,
    write_pgm,
    write_trace_csv,
)
from homsim.interferometer import coincidence_distinguishable, coincidence_interfering, total_coincidence_probability
from homsim.mode_index import HGIndex, LGIndex

H, L = HGIndex, LGIndex


def test_presets():
    fig2, fig3 = PRESETS["fig2"], PRESETS["fig3"]
    assert fig2.dove_theta_degrees == 0 and fig3.dove_theta_degrees == 45
    for cfg in (fig2, fig3):
        assert cfg.detection_basis is Basis.HG and cfg.max_index == 4 and cfg.scale == 1


def test_detection_modes():
    modes = detection_modes("HG", 4)
    assert len(modes) == 25
    assert modes[:3] == [H(0, 0), H(1, 0), H(0, 1)]
    assert modes[-1] == H(4, 4)
    lg = detection_modes("LG", 1)
    assert set(lg) == {L(p, e) for p in range(2) for e in (-1, 0, 1)}


def test_config_validation():
    with pytest.raises(ConfigError) as exc:
        RunConfig(interference="delay_scan")
    assert exc.value.field == "delays"
    with pytest.raises(ConfigError) as exc:
        RunConfig(max_index=-1)
    assert exc.value.field == "max_index"
    with pytest.raises(ConfigError) as exc:
        RunConfig(pair_rate=0)
    assert exc.value.field == "pair_rate"
    with pytest.raises(ConfigError) as exc:
        RunConfig(detection_basis="XY")
    assert exc.value.field == "detection_basis"
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"bogus": 1})
    assert exc.value.field == "bogus"
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"preset": "fig9"})
    assert exc.value.field == "preset"
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"spectrum": [[0, 0, -1, 1]]})
    assert exc.value.field == "spectrum"


def test_config_from_dict_overrides_preset():
    cfg = config_from_dict(
        {
            "preset": "fig3",
            "max_index": 2,
            "spectrum": [{"p": 0, "q": 0, "ell": 1, "re": 1.0}, [0, 0, 2, 0.5]],
            "interference": "delay_scan",
            "delays": [1e-13, 0.0],
        }
    )
    assert cfg.dove_theta_degrees == 45 and cfg.max_index == 2
    assert cfg.spectrum == SpdcSpectrum(((0, 0, 1, 1), (0, 0, 2, 0.5)))
    assert cfg.delays == (1e-13, 0.0)


def test_load_config_file_and_preset(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"preset": "fig2", "pair_rate": 1000, "integration_time": 2}))
    cfg = load_config(str(path))
    assert cfg.scale == 2000
    assert load_config("fig3") == PRESETS["fig3"]
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(OSError):
        load_config(str(tmp_path / "missing.json"))


def test_grid_cells_match_per_cell_functions():
    cfg = PRESETS["fig3"]
    state = prepare_state(cfg)
    for kind, fn in (("interfering", coincidence_interfering), ("distinguishable", coincidence_distinguishable)):
        grid = scan_grid(cfg, kind)
        for i, u in enumerate(grid.rows):
            for j, v in enumerate(grid.cols):
                assert grid.counts[i, j] == pytest.approx(fn(state, u, v).probability, abs=1e-15)


def test_fig2_grid_zero_and_baseline_nonzero():
    interf = scan_grid(PRESETS["fig2"])
    dist = scan_grid(PRESETS["fig2"], "distinguishable")
    assert np.all(interf.counts < 1e-12)
    assert dist.counts.sum() > 0.1


def test_fig3_zero_or_doubled():
    classes = grid_cell_classes(scan_grid(PRESETS["fig3"]), scan_grid(PRESETS["fig3"], "distinguishable"))
    assert classes["other"] == []
    assert classes["zero"] and classes["doubled"]
    assert {u.order % 2 for u, _ in classes["doubled"]} == {1}
    assert {u.order % 2 for u, _ in classes["zero"]} == {0}


def test_distinguishable_grid_transpose_symmetric():
    for name in ("fig2", "fig3"):
        counts = scan_grid(PRESETS[name], "distinguishable").counts
        np.testing.assert_allclose(counts, counts.T, rtol=1e-9, atol=1e-15)


def test_grid_total_matches_total_probability():
    cfg = config_from_dict({"preset": "fig3", "pair_rate": 500.0, "integration_time": 3.0})
    grid = scan_grid(cfg)
    expected = total_coincidence_probability(prepare_state(cfg)) * cfg.scale
    assert grid.counts.sum() == pytest.approx(expected, rel=1e-9)


def test_grid_rejects_delay_scan_mode():
    cfg = RunConfig(interference="delay_scan", delays=(0.0,))
    with pytest.raises(ConfigError):
        scan_grid(cfg)


def test_dip_traces():
    tau_c = PRESETS["fig2"].coherence_time
    delays = [tau_c * k for k in (3, -2, 0, 1, -1, 10, -10)]
    cfg = config_from_dict({"preset": "fig2", "interference": "delay_scan", "delays": delays})
    trace = scan_dip(cfg, H(2, 0), H(0, 2))
    assert [t for t, _ in trace.points] == sorted(delays)
    values = dict(trace.points)
    assert values[0.0] == pytest.approx(0, abs=1e-15)
    assert values[10 * tau_c] > 0
    assert values[10 * tau_c] == pytest.approx(values[-10 * tau_c])

    cfg3 = config_from_dict({"preset": "fig3", "delays": delays})
    peak = dict(scan_dip(cfg3, H(1, 0), H(0, 1)).points)
    assert peak[0.0] == pytest.approx(2 * peak[10 * tau_c], rel=1e-12)
    assert max(peak.values()) <= cfg3.scale


def test_dip_validation():
    with pytest.raises(ConfigError):
        scan_dip(PRESETS["fig2"], H(1, 0), H(0, 1))
    with pytest.raises(ConfigError):
        scan_dip(PRESETS["fig2"], L(0, 1), L(0, -1), [0.0])
    with pytest.raises(ValueError):
        DipTrace((H(0, 0), H(0, 0)), ((1.0, 0.0), (0.0, 0.0)))


def test_grid_csv_format(tmp_path):
    grid = CoincidenceGrid((H(0, 0),), (H(0, 0),), np.zeros((1, 1)))
    path = tmp_path / "g.csv"
    write_grid_csv(grid, path)
    assert path.read_text() == 'modeC,"HG(0,0)"\n"HG(0,0)",0\n'


def test_grid_csv_round_trip(tmp_path):
    grid = scan_grid(config_from_dict({"preset": "fig3", "pair_rate": 1234.5}), "distinguishable")
    path = tmp_path / "g.csv"
    write_grid_csv(grid, path)
    back = read_grid_csv(path)
    assert back.rows == grid.rows and back.cols == grid.cols
    np.testing.assert_allclose(back.counts, grid.counts, rtol=1e-9, atol=0)


def test_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_grid_csv(scan_grid(PRESETS["fig3"]), a)
    write_grid_csv(scan_grid(PRESETS["fig3"]), b)
    assert a.read_bytes() == b.read_bytes()


def test_trace_csv(tmp_path):
    trace = DipTrace((H(1, 0), H(0, 1)), ((0.0, 0.5), (1e-13, 0.123456789012345)))
    path = tmp_path / "t.csv"
    write_trace_csv(trace, path)
    assert path.read_text() == "delay_s,counts\n0,0.5\n1e-13,0.123456789012\n"
    assert trace_csv_text(trace) == path.read_text()


def test_write_failure_names_path(tmp_path):
    grid = CoincidenceGrid((H(0, 0),), (H(0, 0),), np.zeros((1, 1)))
    target = tmp_path / "missing" / "g.csv"
    with pytest.raises(OSError, match="missing"):
        write_grid_csv(grid, target)


def test_grid_invariants():
    with pytest.raises(ValueError):
        CoincidenceGrid((H(0, 0),), (H(0, 0),), np.array([[-1.0]]))
    with pytest.raises(ValueError):
        CoincidenceGrid((H(0, 0),), (H(0, 0), H(1, 0)), np.zeros((1, 1)))


def test_shot_noise_reproducible():
    grid = scan_grid(config_from_dict({"preset": "fig3", "pair_rate": 1e4}), "distinguishable")
    a = with_shot_noise(grid, 7)
    b = with_shot_noise(grid, 7)
    np.testing.assert_array_equal(a.counts, b.counts)
    assert grid_csv_text(a) == grid_csv_text(b)
    assert np.all(a.counts[grid.counts == 0] == 0)


def test_render_mode():
    img = render_mode(H(0, 0), 33, 3.0)
    assert img.shape == (33, 33)
    assert img.max() == pytest.approx(1)
    assert np.unravel_index(img.argmax(), img.shape) == (16, 16)
    ring = render_mode(L(0, 1), 33, 3.0)
    assert ring[16, 16] == 0
    assert ring.max() == pytest.approx(1)
    lobes = render_mode(H(1, 1), 33, 3.0)
    assert np.all(lobes[16, :] == 0) and np.all(lobes[:, 16] == 0)
    with pytest.raises(ValueError):
        render_mode(H(0, 0), 4)


def test_render_agrees_with_basis_conversion():
    """|LG(0,2)|^2 rendered directly equals |sum_hg c_hg HG|^2 built from conversion amplitudes."""
    from homsim.basis_conversion import lg_to_hg_coeffs
    from homsim.experiment import mode_field

    axis = np.linspace(-2.5, 2.5, 41)
    X, Y = np.meshgrid(axis, axis)
    for lg in (L(0, 2), L(1, -1), L(1, 2)):
        direct = mode_field(lg, X, Y)
        norm_hg = lambda h: mode_field(h, X, Y) / math.sqrt(2 ** h.order * math.factorial(h.m) * math.factorial(h.n))
        synth = sum(c * norm_hg(h) for h, c in lg_to_hg_coeffs(lg).items())
        ratio = direct[np.abs(synth) > 1e-3] / synth[np.abs(synth) > 1e-3]
        # equal up to one global complex constant
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


def test_write_pgm(tmp_path):
    path = tmp_path / "m.pgm"
    write_pgm(render_mode(L(0, 1), 16), path)
    data = path.read_bytes()
    assert data.startswith(b"P5\n16 16\n255\n")
    assert len(data) == len(b"P5\n16 16\n255\n") + 256
