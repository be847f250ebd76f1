"""Command-line entry point: ``homsim convert|grid|dip|render|classify``."""

from __future__ import annotations

import argparse
import json
import sys

from homsim import experiment
from homsim.basis_conversion import hg_to_lg_coeffs, lg_to_hg_coeffs
from homsim.biphoton_state import StateError, TwoPhotonState, symmetry_classify, to_basis
from homsim.interferometer import total_coincidence_probability
from homsim.mode_index import LGIndex, canonical_key, parse_mode


def _complex_str(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    return f"{re:.12g}{im:+.12g}i"


def expansion_document(text: str) -> dict:
    mode = parse_mode(text)
    if isinstance(mode, LGIndex):
        coeffs, basis = lg_to_hg_coeffs(mode), "HG"
    else:
        coeffs, basis = hg_to_lg_coeffs(mode), "LG"
    terms = [
        {"mode": str(m), "re": coeffs[m].real + 0.0, "im": coeffs[m].imag + 0.0}
        for m in sorted(coeffs, key=canonical_key)
    ]
    return {"input_mode": str(mode), "basis": basis, "terms": terms}


def cmd_convert(args) -> int:
    doc = expansion_document(args.mode)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for term in doc["terms"]:
            print(f"{term['mode']}: {_complex_str(complex(term['re'], term['im']))}")
    return 0


def cmd_grid(args) -> int:
    config = experiment.load_config(args.config)
    mode = "distinguishable" if args.distinguishable else None
    if mode is None and config.interference == "delay_scan":
        mode = "interfering"
    grid = experiment.scan_grid(config, mode)
    if args.poisson_seed is not None:
        grid = experiment.with_shot_noise(grid, args.poisson_seed)
    if args.out:
        experiment.write_grid_csv(grid, args.out)
    else:
        sys.stdout.write(experiment.grid_csv_text(grid))
    return 0


def cmd_dip(args) -> int:
    config = experiment.load_config(args.config)
    delays = config.delays
    if not delays:
        tau_c = config.coherence_time
        delays = tuple(tau_c * k / 10 for k in range(-50, 51))
    trace = experiment.scan_dip(config, parse_mode(args.modeC), parse_mode(args.modeD), delays)
    if args.out:
        experiment.write_trace_csv(trace, args.out)
    else:
        sys.stdout.write(experiment.trace_csv_text(trace))
    return 0


def cmd_render(args) -> int:
    image = experiment.render_mode(parse_mode(args.mode), args.size, args.extent)
    experiment.write_pgm(image, args.out)
    return 0


def cmd_classify(args) -> int:
    with open(args.state, encoding="utf-8") as fh:
        doc = json.load(fh)
    state = TwoPhotonState.from_document(doc, renormalize=args.renormalize)
    cls = symmetry_classify(state)
    result = {
        "basis": state.basis.value,
        "symmetry": cls.value.value,
        "deviation": cls.deviation,
        "total_coincidence_probability": total_coincidence_probability(state),
    }
    if args.to:
        result["converted"] = to_basis(state, args.to).to_document()
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homsim", description="HOM interference of LG/HG entangled photon pairs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="expand one mode in the other basis")
    p.add_argument("mode", help='e.g. "LG(0,-2)" or "HG(1,1)"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("grid", help="coincidence grid over detection-mode pairs")
    p.add_argument("--config", required=True, help="JSON config file or preset name (fig2, fig3)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--distinguishable", action="store_true", help="unequal path lengths: no two-photon interference")
    p.add_argument("--poisson-seed", type=int, default=None, help="add reproducible shot noise")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("dip", help="coincidences versus path delay for one mode pair")
    p.add_argument("--config", required=True)
    p.add_argument("--modeC", required=True)
    p.add_argument("--modeD", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dip)

    p = sub.add_parser("render", help="write a mode intensity image as PGM")
    p.add_argument("mode")
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--extent", type=float, default=3.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("classify", help="exchange symmetry of a serialized two-photon state")
    p.add_argument("state", help="state JSON file")
    p.add_argument("--renormalize", action="store_true")
    p.add_argument("--to", choices=["LG", "HG"], help="also emit the state in this basis")
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except experiment.ConfigError as exc:
        print(f"homsim: invalid config field {exc.field}: {exc}", file=sys.stderr)
        return 2
    except (StateError, ValueError, OSError) as exc:
        print(f"homsim: {exc}", file=sys.stderr)
        return 1
