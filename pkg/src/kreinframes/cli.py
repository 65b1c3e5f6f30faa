"""Command-line surface.

Exit codes are stable API: 0 pass, 1 generation failure, 2 not a J-frame,
3 theorem-check violation, 4 sign-partition mismatch, 5 spectral gate,
64 usage / malformed input.  Human-readable summaries go to stdout;
machine artifacts only ever go to --out/--report/--svg paths.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import (
    FrameFileError,
    GenerationError,
    KreinFrameError,
    SingularSError,
    SpectrumNotInRHPError,
)
from .fileio import (
    frame_to_doc,
    load_frame_file,
    load_operator_file,
    save_report,
)
from .frames import is_jframe
from .generate import GenConfig, random_jframe
from .report import (
    DEFAULT_TOLERANCES,
    STATUS_NOT_JFRAME,
    STATUS_OK,
    analyze_frame,
    region_to_json,
)
from .sqrtpolar import synthesize_from_operator
from .verify import PROPERTY_TOLS, run_suite

EXIT_OK = 0
EXIT_GENERATION = 1
EXIT_NOT_JFRAME = 2
EXIT_VIOLATION = 3
EXIT_SIGN_MISMATCH = 4
EXIT_SPECTRAL_GATE = 5
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_from_env(seed):
    """--seed wins; KREIN_FRAMES_SEED applies only when the flag is absent."""
    if seed is not None:
        return seed
    env = os.environ.get("KREIN_FRAMES_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise FrameFileError(f"KREIN_FRAMES_SEED: not an integer: {env!r}")
    return int(np.random.SeedSequence().entropy % (2**64))


def _parse_tol_overrides(pairs):
    overrides = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            known = ", ".join(sorted(DEFAULT_TOLERANCES))
            raise FrameFileError(
                f"--tol expects NAME=VALUE with NAME in {{{known}}}, got {item!r}")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise FrameFileError(f"--tol {name}: not a number: {value!r}")
    return overrides


def cmd_analyze(args) -> int:
    frame = load_frame_file(args.input)
    overrides = _parse_tol_overrides(args.tol)
    report, status = analyze_frame(frame, overrides)
    if args.report:
        save_report(report, args.report)
    print(f"space: p={report['space']['p']}, q={report['space']['q']}, "
          f"N={frame.size}")
    print(f"partition: I+ = {report['partition']['i_plus']}, "
          f"I- = {report['partition']['i_minus']}")
    print(f"is_jframe: {report['is_jframe']}")
    if status == STATUS_NOT_JFRAME:
        print(f"reason: {report['failure_reason']}")
        return EXIT_NOT_JFRAME
    b = report["bounds"]
    print("bounds: "
          f"alpha+={b['alpha_plus']:.6g} beta+={b['beta_plus']:.6g} "
          f"alpha-={b['alpha_minus']:.6g} beta-={b['beta_minus']:.6g}")
    print("dual:   "
          f"gamma+={b['gamma_plus']:.6g} delta+={b['delta_plus']:.6g} "
          f"gamma-={b['gamma_minus']:.6g} delta-={b['delta_minus']:.6g}")
    eigs = [complex(re, im) for re, im in report["spectrum"]["eigenvalues"]]
    print("spectrum:", ", ".join(f"{z:.6g}" for z in eigs))
    failed = [k for k, v in report["verdicts"].items() if not v["pass"]]
    for name, v in report["verdicts"].items():
        mark = "ok " if v["pass"] else "FAIL"
        print(f"  [{mark}] {name:<22} value={v['value']:.3e} tol={v['tol']:.1e}")
    if args.svg and report.get("bounds"):
        _render_svg_from_report(frame, args.svg)
        print(f"enclosure figure written to {args.svg}")
    if status != STATUS_OK:
        print("theorem-check violation:",
              report.get("violation", ", ".join(failed)))
        return EXIT_VIOLATION
    return EXIT_OK


def _render_svg_from_report(frame, path) -> None:
    from . import jframe as jf
    from . import spectral as sp
    from .plots import render_enclosure

    bundle = jf.jframe_operator(frame)
    rep_c = jf.block_rep_cork(bundle)
    rep_e = jf.block_rep_edinburgh(bundle)
    bounds = jf.jframe_bounds(rep_c, rep_e, frame)
    spec = sp.spectrum(bundle.S, frame.space.J)
    render_enclosure(path, bounds, spec)


def cmd_generate(args) -> int:
    seed = _seed_from_env(args.seed)
    cfg = GenConfig(p=args.p, q=args.q, n_plus=args.nplus, n_minus=args.nminus,
                    angular_norm_cap=args.cap, conditioning_cap=args.cond,
                    seed=seed)
    frame = random_jframe(cfg)
    doc = frame_to_doc(frame)
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"seed: {seed}")
    print(f"frame written to {args.out} "
          f"(p={args.p}, q={args.q}, N={frame.size})")
    return EXIT_OK


def cmd_enclosure(args) -> int:
    from . import jframe as jf
    from . import spectral as sp

    frame = load_frame_file(args.input)
    rep = is_jframe(frame)
    if not rep.is_jframe:
        print(f"not a J-frame: {rep.failure_reason}", file=sys.stderr)
        return EXIT_NOT_JFRAME
    bundle = jf.jframe_operator(frame)
    rep_c = jf.block_rep_cork(bundle)
    rep_e = jf.block_rep_edinburgh(bundle)
    bounds = jf.jframe_bounds(rep_c, rep_e, frame)
    spec = sp.spectrum(bundle.S, frame.space.J)
    if args.svg:
        from .plots import render_enclosure

        render_enclosure(args.svg, bounds, spec)
        print(f"enclosure figure written to {args.svg}")
        return EXIT_OK
    regions = [sp.enclosure_cork(rep_c), sp.enclosure_edinburgh(rep_e),
               sp.enclosure_imag_strip(rep_c), sp.enclosure_from_bounds(bounds)]
    doc = {
        "regions": [region_to_json(r, sp.check_membership(spec, r))
                    for r in regions],
        "spectrum": [[z.real, z.imag] for z in spec.eigenvalues],
    }
    json.dump(doc, sys.stdout, indent=2)
    print()
    return EXIT_OK


def cmd_synthesize(args) -> int:
    space, S = load_operator_file(args.operator)
    seed = _seed_from_env(args.seed)
    if args.nplus < space.p or args.nminus < space.q:
        raise FrameFileError(
            f"--nplus/--nminus must be at least (p, q) = ({space.p}, {space.q})")
    try:
        result = synthesize_from_operator(S, space, args.nplus, args.nminus,
                                          seed=seed)
    except SpectrumNotInRHPError as exc:
        print(f"spectral gate: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL_GATE
    except (ValueError, SingularSError) as exc:
        raise FrameFileError(f"operator: {exc}")
    doc = frame_to_doc(result.frame)
    if not result.partition_ok:
        doc["synthesis_diagnostics"] = {
            "sign_flips": list(result.sign_flips),
            "prescribed": {"n_plus": args.nplus, "n_minus": args.nminus},
            "realized": {"n_plus": result.frame.n_plus,
                         "n_minus": result.frame.n_minus},
        }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"seed: {seed}")
    print(f"operator residual ||TT+ - S||/||S|| = {result.operator_residual:.3e}")
    if not result.partition_ok:
        print(f"sign-partition mismatch at indices {list(result.sign_flips)} "
              f"(file written with diagnostics)")
        return EXIT_SIGN_MISMATCH
    return EXIT_OK


def _parse_sizes(text):
    sizes = []
    for part in text.split(","):
        p, sep, q = part.strip().partition("+")
        if not sep:
            raise FrameFileError(f"--sizes expects entries like 2+1, got {part!r}")
        try:
            sizes.append((int(p), int(q)))
        except ValueError:
            raise FrameFileError(f"--sizes: not integers: {part!r}")
    return sizes


def cmd_verify(args) -> int:
    sizes = _parse_sizes(args.sizes)
    results = run_suite(seeds=args.seeds, sizes=sizes, cap=args.cap,
                        base_seed=_seed_from_env(args.seed) if args.seed is not None
                        or os.environ.get("KREIN_FRAMES_SEED") else 0,
                        corrupt=args.corrupt)
    width = max(len(r.name) for r in results)
    failed = []
    for r in results:
        mark = "ok " if r.passed else "FAIL"
        print(f"[{mark}] {r.name:<{width}}  worst={r.worst:.3e}  "
              f"tol={r.tol:.1e}  instances={r.instances}")
        if not r.passed:
            failed.append(r.name)
    if failed:
        print(f"FAILED properties: {', '.join(failed)}")
        return EXIT_VIOLATION
    print(f"all {len(results)} properties passed on {results[0].instances} instances")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="kreinframes",
                     description="Analyze frames in finite-dimensional Krein spaces.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis of a frame file")
    p.add_argument("input", help="frame JSON file")
    p.add_argument("--report", help="write the analysis report JSON here")
    p.add_argument("--svg", help="write the enclosure figure here")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override a verdict tolerance (repeatable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="generate a random J-frame file")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--nplus", type=int, required=True)
    p.add_argument("--nminus", type=int, required=True)
    p.add_argument("--cap", type=float, default=0.5,
                   help="angular-operator norm cap in [0, 0.95]")
    p.add_argument("--cond", type=float, default=1e3,
                   help="coefficient conditioning cap")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: KREIN_FRAMES_SEED or fresh entropy)")
    p.add_argument("--out", required=True, help="output frame JSON path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("enclosure", help="spectral enclosure figure / parameters")
    p.add_argument("input", help="frame JSON file")
    p.add_argument("--svg", help="write the figure here (else JSON to stdout)")
    p.set_defaults(func=cmd_enclosure)

    p = sub.add_parser("synthesize",
                       help="build a J-frame with a prescribed operator")
    p.add_argument("--operator", required=True,
                   help='JSON file {"space": {"p", "q"}, "matrix": ...}')
    p.add_argument("--nplus", type=int, required=True)
    p.add_argument("--nminus", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output frame JSON path")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="run the randomized property suite")
    p.add_argument("--seeds", type=int, default=40,
                   help="number of instances (round-robin over --sizes)")
    p.add_argument("--sizes", default="1+1,2+1,3+2",
                   help='comma-separated signatures, e.g. "2+1,3+2,5+3"')
    p.add_argument("--cap", type=float, default=None,
                   help="fix the angular norm cap (default: cycle over a few)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--corrupt", choices=sorted(PROPERTY_TOLS),
                   help=argparse.SUPPRESS)  # harness self-test hook
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FrameFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except KreinFrameError as exc:
        print(f"theorem-check violation: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
