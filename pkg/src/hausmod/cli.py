"""Command-line front end.

Subcommands: ``check-condition``, ``norm``, ``apply``, ``verify``,
``corpus list``.  Exit codes form a stable contract:

- 0: success (for ``check-condition``: the sharp integral is finite)
- 1: usage or configuration error
- 2: kernel admissible but sharp-divergent
- 3: kernel inadmissible
- 4: a numeric guard tripped (spectral-tail violation)
- 5: ``verify`` ran to completion but at least one check failed

``HAUSMOD_REPORT_DIR`` overrides the output directory; no other behavior is
environment-dependent.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .corpus import CORPUS_NAMES, corpus_functions, nonneg_names
from .grid import GridFunction, GridSpec, lp_norm
from .hausdorff import (
    QuadratureSpec,
    RadialKernel,
    apply_hausdorff,
    apply_hausdorff_tilde,
    check_conditions,
    kernel_from_json,
    kernel_from_shorthand,
)
from .harness import (
    PRESET_KERNELS,
    SUITES,
    ExperimentConfig,
    preset_kernel,
    run_suite,
    write_report,
)
from .io import load_gridfunction, save_gridfunction
from .timefreq import (
    SpaceParams,
    SpectralTailError,
    build_decomposition,
    default_k_max,
    gaussian_window,
    modulation_norm_continuous,
    modulation_norm_discrete,
    wiener_norm,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIVERGENT = 2
EXIT_INADMISSIBLE = 3
EXIT_GUARD = 4
EXIT_CHECKS_FAILED = 5


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage exit code (1, not 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _resolve_kernel(args, n: int) -> RadialKernel:
    """Kernel from --preset, inline --kernel pieces, or a JSON file."""
    sources = [s for s in (args.preset, args.kernel, args.kernel_file) if s]
    if len(sources) != 1:
        raise ValueError("specify exactly one of --preset, --kernel, --kernel-file")
    if args.preset:
        return preset_kernel(args.preset, n)
    if args.kernel:
        return kernel_from_shorthand(args.kernel, n)
    return kernel_from_json(args.kernel_file, n)


def _add_kernel_args(sub) -> None:
    sub.add_argument("--preset", choices=sorted(PRESET_KERNELS),
                     help="named kernel preset")
    sub.add_argument("--kernel", action="append", metavar="SEG",
                     help="inline segment 'c*r^alpha@[lo,hi]' (repeatable)")
    sub.add_argument("--kernel-file", metavar="PATH",
                     help="kernel JSON file")


def _resolve_function(name: str, spec: GridSpec, seed: int) -> GridFunction:
    """A corpus member by name, or a saved sample file by stem/path."""
    if name in CORPUS_NAMES:
        return corpus_functions(spec, seed)[name]
    stem = name[:-5] if name.endswith(".json") else name
    if Path(stem + ".json").exists():
        return load_gridfunction(stem)
    raise ValueError(f"{name!r} is neither a corpus member nor a sample file "
                     f"(corpus: {', '.join(CORPUS_NAMES)})")


def _grid_args(sub) -> None:
    sub.add_argument("--n", type=int, default=1, help="dimension (default 1)")
    sub.add_argument("--n-grid", type=int, default=4096,
                     help="samples per axis (default 4096)")
    sub.add_argument("--half-extent", type=float, default=16.0,
                     help="box half-width (default 16)")
    sub.add_argument("--seed", type=int, default=17,
                     help="corpus seed (default 17)")


def _quad_args(sub) -> None:
    sub.add_argument("--panels", type=int, default=None,
                     help="radial quadrature panels")
    sub.add_argument("--nodes", type=int, default=None,
                     help="Gauss-Legendre nodes per panel")


def _make_quad(args) -> QuadratureSpec:
    quad = QuadratureSpec()
    updates = {}
    if args.panels is not None:
        updates["panels"] = args.panels
    if args.nodes is not None:
        updates["nodes"] = args.nodes
    if updates:
        from dataclasses import replace
        quad = replace(quad, **updates)
    return quad


def _cmd_check_condition(args) -> int:
    kernel = _resolve_kernel(args, args.n)
    params = SpaceParams(args.p, args.q, args.s)
    report = check_conditions(kernel, params)
    _print_json(report.to_dict())
    if not report.admissible:
        return EXIT_INADMISSIBLE
    return EXIT_OK if report.sharp_finite else EXIT_DIVERGENT


def _cmd_norm(args) -> int:
    spec = GridSpec(args.n, args.n_grid, args.half_extent)
    f = _resolve_function(args.function, spec, args.seed)
    params = SpaceParams(args.p, args.q, args.s,
                         space="wiener" if args.space == "wiener" else "modulation")
    record = {
        "function_id": args.function,
        "space": args.space,
        "p": args.p, "q": args.q, "s": args.s,
        "grid": {"n": f.spec.n, "n_grid": f.spec.n_grid,
                 "half_extent": f.spec.half_extent},
        "window": None,
        "family": None,
    }
    try:
        if args.space == "modulation":
            record["window"] = "gaussian"
            value = modulation_norm_continuous(f, params, gaussian_window(f.spec))
        elif args.space == "modulation-discrete":
            family = build_decomposition(f.spec)
            record["family"] = {"k_max": family.k_max}
            value = modulation_norm_discrete(f, params, family)
        elif args.space == "wiener":
            record["window"] = "gaussian"
            value = wiener_norm(f, params, gaussian_window(f.spec))
        else:  # lebesgue
            value = lp_norm(f, args.p)
    except SpectralTailError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    record["value"] = value
    _print_json(record)
    return EXIT_OK


def _cmd_apply(args) -> int:
    spec = GridSpec(args.n, args.n_grid, args.half_extent)
    kernel = _resolve_kernel(args, args.n)
    report = check_conditions(kernel, SpaceParams(2.0, 2.0))
    if not report.admissible:
        print("error: kernel is inadmissible (min-moment integral diverges); "
              "the averaging integral does not converge", file=sys.stderr)
        return EXIT_INADMISSIBLE
    f = _resolve_function(args.function, spec, args.seed)
    quad = _make_quad(args)
    op = apply_hausdorff_tilde if args.tilde else apply_hausdorff
    result = op(kernel, f, quad)
    json_path, csv_path = save_gridfunction(result, args.out)
    _print_json({
        "kernel": kernel.shorthand(),
        "companion": bool(args.tilde),
        "function_id": args.function,
        "files": [json_path, csv_path],
        "truncated_local_moment": result.meta["trunc_local_moment"],
        "truncated_tail_moment": result.meta["trunc_tail_moment"],
    })
    return EXIT_OK


def _parse_depths(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _cmd_verify(args) -> int:
    if args.config:
        config = ExperimentConfig.from_toml(args.config)
    else:
        config = ExperimentConfig()
    overrides = {
        "n_grid": args.n_grid,
        "half_extent": args.half_extent,
        "seed": args.seed,
        "workers": args.workers,
        "corpus_size": args.corpus_size,
        "duality_pairs": args.duality_pairs,
        "out_dir": args.out_dir,
        "kernels": tuple(args.kernels.split(",")) if args.kernels else None,
        "witness_depths": _parse_depths(args.witness_depths) if args.witness_depths else None,
        "integrity_depths": _parse_depths(args.integrity_depths) if args.integrity_depths else None,
    }
    config = config.override(**overrides)
    report, timings, artifacts = run_suite(config, args.suite)
    path = write_report(report, timings, artifacts, config.out_dir)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    for row in report["checks"]:
        status = "pass" if row["passed"] else "FAIL"
        print(f"[{status}] {row['suite']:12} {row['name']:30} "
              f"value={row['value']} bound={row['bound']} ({row['mode']})")
    print(f"report: {path}")
    if failed:
        print(f"FAILED checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECKS_FAILED
    print("all checks passed")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    if args.action != "list":
        raise ValueError(f"unknown corpus action {args.action!r}")
    nonneg = set(nonneg_names())
    for name in CORPUS_NAMES:
        tags = "nonneg" if name in nonneg else ""
        print(f"{name:18} {tags}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hausmod",
                     description="Hausdorff averaging operators on "
                                 "modulation and Wiener amalgam spaces")
    parser.add_argument("--version", action="version",
                        version=f"hausmod {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    cc = subs.add_parser("check-condition",
                         help="evaluate admissibility and the sharp integral")
    _add_kernel_args(cc)
    cc.add_argument("--n", type=int, default=1)
    cc.add_argument("-p", type=float, default=2.0)
    cc.add_argument("-q", type=float, default=2.0)
    cc.add_argument("-s", type=float, default=0.0)
    cc.set_defaults(func=_cmd_check_condition)

    nm = subs.add_parser("norm", help="compute a space norm of a function")
    nm.add_argument("function", help="corpus member name or sample file stem")
    nm.add_argument("--space", default="modulation",
                    choices=("modulation", "modulation-discrete",
                             "wiener", "lebesgue"))
    nm.add_argument("-p", type=float, default=2.0)
    nm.add_argument("-q", type=float, default=2.0)
    nm.add_argument("-s", type=float, default=0.0)
    _grid_args(nm)
    nm.set_defaults(func=_cmd_norm)

    ap = subs.add_parser("apply", help="apply the averaging operator, save the result")
    _add_kernel_args(ap)
    ap.add_argument("function", help="corpus member name or sample file stem")
    ap.add_argument("--tilde", action="store_true",
                    help="apply the companion operator instead")
    ap.add_argument("--out", default="hausdorff-image",
                    help="output file stem (default hausdorff-image)")
    _grid_args(ap)
    _quad_args(ap)
    ap.set_defaults(func=_cmd_apply)

    vf = subs.add_parser("verify", help="run a named check suite, write reports")
    vf.add_argument("--suite", default="all", choices=SUITES)
    vf.add_argument("--config", help="TOML config file")
    vf.add_argument("--n-grid", type=int)
    vf.add_argument("--half-extent", type=float)
    vf.add_argument("--seed", type=int)
    vf.add_argument("--workers", type=int)
    vf.add_argument("--corpus-size", type=int)
    vf.add_argument("--duality-pairs", type=int)
    vf.add_argument("--out-dir")
    vf.add_argument("--kernels", help="comma-separated preset names")
    vf.add_argument("--witness-depths", help="comma-separated depths, e.g. 8,12,16")
    vf.add_argument("--integrity-depths", help="comma-separated depths")
    vf.set_defaults(func=_cmd_verify)

    cp = subs.add_parser("corpus", help="corpus management")
    cp.add_argument("action", choices=("list",))
    cp.set_defaults(func=_cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
