"""Command line entry points: compute, serve, bench, synth.

Exit codes for ``compute``: 0 success, 2 invalid flags or analysis spec,
3 data errors, 4 compute errors.
"""

import argparse
import csv
import math
import resource
import socket
import sys
import time
from pathlib import Path

from . import engine, geodata
from .errors import (
    GwError,
    InvalidSpecError,
    SpecMismatchError,
)
from .synth import synth_dataset
from .weights import KERNELS

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_DATA = 3
EXIT_COMPUTE = 4

_DATA_ERROR_KINDS = {
    "MalformedInput", "MixedGeometry", "EmptyCollection",
    "FewerThanThreeFeatures", "MissingColumn", "NonNumericCoordinate",
    "TooFewComplete", "IndexMismatch",
}

_MODE_NAMES = {"corr": "correlation", "pcorr": "partial_correlation"}


def _fail(code: int, message: str) -> int:
    print(f"gwcorr: error: {message}", file=sys.stderr)
    return code


def _load_dataset(path: str, x_col, y_col, assume_planar: bool) -> geodata.Dataset:
    data = Path(path).read_bytes()
    if path.lower().endswith(".csv"):
        if not x_col or not y_col:
            raise InvalidSpecError("CSV input requires --x-col and --y-col")
        return geodata.parse_point_csv(data, x_col, y_col, assume_planar)
    return geodata.parse_geojson(data, assume_planar)


def _print_summary(summary: dict, alpha: float) -> None:
    spec = summary["spec"]
    pair = f"{spec['var_a']},{spec['var_b']}"
    controls = ",".join(spec["controls"]) or "-"
    print(f"mode={spec['mode']} method={spec['method']} pair={pair} "
          f"controls={controls} kernel={spec['kernel']} "
          f"bandwidth={spec['bandwidth_proportion']}")
    print(f"n_used={summary['n_used']} n_dropped={summary['n_dropped']}")
    if summary["coef_min"] is None:
        print("coef: no valid cells")
    else:
        print(f"coef min={summary['coef_min']:.6f} max={summary['coef_max']:.6f} "
              f"mean={summary['coef_mean']:.6f}")
    key = "significant_at_001" if alpha == 0.01 else "significant_at_005"
    print(f"significant at alpha={alpha}: {summary[key]} of {summary['n_used']}")
    print(f"significant_at_001={summary['significant_at_001']} "
          f"significant_at_005={summary['significant_at_005']} "
          f"clamp_excursions={summary['clamp_excursions']} "
          f"wall_ms={summary['wall_ms']:.1f}")


def cmd_compute(args) -> int:
    try:
        pair = args.pair.split(",")
        if len(pair) != 2 or not pair[0] or not pair[1]:
            return _fail(EXIT_FLAGS, f"--pair must be 'A,B', got {args.pair!r}")
        spec = engine.AnalysisSpec(
            mode=_MODE_NAMES[args.mode],
            method=args.method,
            var_a=pair[0],
            var_b=pair[1],
            controls=tuple(args.control),
            kernel=args.kernel,
            bandwidth_proportion=args.bandwidth,
        )
        spec.validate()
    except (InvalidSpecError, SpecMismatchError) as err:
        return _fail(EXIT_FLAGS, str(err))

    try:
        dataset = _load_dataset(args.input, args.x_col, args.y_col, args.assume_planar)
    except InvalidSpecError as err:
        return _fail(EXIT_FLAGS, str(err))
    except GwError as err:
        return _fail(EXIT_DATA, f"{err.kind}: {err}")
    except OSError as err:
        return _fail(EXIT_DATA, str(err))

    try:
        spec.validate(dataset.variable_names)
    except SpecMismatchError as err:
        return _fail(EXIT_FLAGS, str(err))

    try:
        dm, coords, kept = geodata.listwise_complete(dataset, spec.variable_set)
    except GwError as err:
        return _fail(EXIT_DATA, f"{err.kind}: {err}")

    try:
        t0 = time.perf_counter()
        surface = engine.compute_surface(dm, coords, spec)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        doc = geodata.serialize_result(dataset, surface, (spec.var_a, spec.var_b), kept)
    except GwError as err:
        kind_exit = EXIT_DATA if err.kind in _DATA_ERROR_KINDS else EXIT_COMPUTE
        return _fail(kind_exit, f"{err.kind}: {err}")

    try:
        Path(args.output).write_text(geodata.document_to_json(doc), encoding="utf-8")
    except OSError as err:
        return _fail(EXIT_DATA, str(err))

    summary = engine.surface_summary(surface, (spec.var_a, spec.var_b),
                                     n_dropped=dataset.n - len(surface), wall_ms=wall_ms)
    _print_summary(summary, args.alpha)
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    cfg = ServiceConfig.from_env()
    cfg.tiles_url = args.tiles_url if args.tiles_url is not None else cfg.tiles_url
    if args.size_limit_mb is not None:
        cfg.size_limit_bytes = int(args.size_limit_mb * 1024 * 1024)
    if args.timeout is not None:
        cfg.timeout_seconds = args.timeout
    if args.lru_capacity is not None:
        cfg.dataset_capacity = args.lru_capacity
    if args.ui_dir is not None:
        cfg.ui_dir = args.ui_dir
    elif cfg.ui_dir is None:
        bundled = Path(__file__).parent / "webui_static"
        if bundled.is_dir():
            cfg.ui_dir = str(bundled)

    # Probe the port up front so a bind failure maps to a clean exit code.
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
        probe.close()
    except OSError as err:
        return _fail(EXIT_DATA, f"cannot bind {args.host}:{args.port}: {err}")

    app = create_app(cfg)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def _rss_mb() -> float:
    # ru_maxrss is kilobytes on Linux; platform-approximate by design.
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def run_bench(sizes, n_vars: int = 3, kernel: str = "bisquare",
              proportion: float = 0.2, seed: int = 0, method: str = "pearson",
              repeats: int = 1, warmup: bool = True):
    """Time correlation surfaces over synthetic datasets of increasing size.

    For each size the engine computes one surface per variable pair; the
    reported wall time covers the surface computations only (data generation
    and serialization excluded). Memory is the max-RSS delta, approximate.
    """
    sizes = sorted(set(int(s) for s in sizes))
    if not sizes or any(s < 10 for s in sizes):
        raise ValueError("sizes must all be >= 10")
    if warmup:
        _bench_pass(synth_dataset(max(32, 10), n_vars, seed), kernel, proportion, method)
    rows = []
    for n in sizes:
        dataset = synth_dataset(n, n_vars, seed)
        before_mb = _rss_mb()
        best = math.inf
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter()
            _bench_pass(dataset, kernel, proportion, method)
            best = min(best, time.perf_counter() - t0)
        peak_mb = max(0.0, _rss_mb() - before_mb)
        rows.append({"n": n, "wall_s": best, "peak_mb": peak_mb})
    return rows


def _bench_pass(dataset, kernel, proportion, method):
    names = dataset.variable_names
    dm, coords, _ = geodata.listwise_complete(dataset, names)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            spec = engine.AnalysisSpec(
                mode="correlation", method=method, var_a=names[a], var_b=names[b],
                kernel=kernel, bandwidth_proportion=proportion)
            engine.compute_surface(dm, coords, spec)


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        return _fail(EXIT_FLAGS, f"--sizes must be comma-separated integers, got {args.sizes!r}")
    if not sizes or any(s < 10 for s in sizes):
        return _fail(EXIT_FLAGS, "--sizes values must all be >= 10")
    rows = run_bench(sizes, n_vars=args.vars, kernel=args.kernel,
                     proportion=args.bandwidth, seed=args.seed,
                     repeats=args.repeats)
    print(f"{'n':>8} {'wall_s':>10} {'peak_mb':>10}")
    for row in rows:
        print(f"{row['n']:>8} {row['wall_s']:>10.4f} {row['peak_mb']:>10.1f}")
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "wall_s", "peak_mb"])
        for row in rows:
            writer.writerow([row["n"], repr(row["wall_s"]), repr(row["peak_mb"])])
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        dataset = synth_dataset(args.n, args.vars, args.seed)
    except ValueError as err:
        return _fail(EXIT_FLAGS, str(err))
    doc = geodata.dataset_to_geojson(dataset)
    Path(args.output).write_text(geodata.document_to_json(doc), encoding="utf-8")
    print(f"wrote {args.output} (n={args.n}, vars={args.vars}, seed={args.seed})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwcorr",
        description="Geographically weighted correlation surfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="one-shot surface computation to GeoJSON")
    p.add_argument("--input", required=True, help="GeoJSON or CSV input path")
    p.add_argument("--pair", required=True, help="the two analysis variables, 'A,B'")
    p.add_argument("--control", action="append", default=[],
                   help="control variable (repeatable)")
    p.add_argument("--mode", choices=("corr", "pcorr"), default="corr")
    p.add_argument("--method", choices=("pearson", "spearman"), default="pearson")
    p.add_argument("--kernel", choices=KERNELS, default="bisquare")
    p.add_argument("--bandwidth", type=float, required=True,
                   help="adaptive bandwidth proportion in (0, 1]")
    p.add_argument("--alpha", type=float, choices=(0.01, 0.05), default=0.01)
    p.add_argument("--output", required=True, help="output GeoJSON path")
    p.add_argument("--x-col", help="x/longitude column (CSV input)")
    p.add_argument("--y-col", help="y/latitude column (CSV input)")
    p.add_argument("--assume-planar", action="store_true",
                   help="skip lon/lat detection and projection")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("serve", help="run the HTTP service and web UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8808)
    p.add_argument("--tiles-url", default=None,
                   help="base map tile URL template passed to the UI")
    p.add_argument("--size-limit-mb", type=float, default=None)
    p.add_argument("--timeout", type=float, default=None,
                   help="per-analysis timeout in seconds")
    p.add_argument("--lru-capacity", type=int, default=None,
                   help="datasets kept in memory")
    p.add_argument("--ui-dir", default=None, help="directory of built UI assets")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="benchmark surface computation on synthetic data")
    p.add_argument("--sizes", default="100,1000,10000",
                   help="comma-separated observation counts (each >= 10)")
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--kernel", choices=KERNELS, default="bisquare")
    p.add_argument("--bandwidth", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--output", default="gwcorr_bench.csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write a synthetic sample dataset as GeoJSON")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
