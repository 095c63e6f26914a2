"""Batch command line: fuse, evaluate, benchmark and ablate over datasets.

Subcommands
-----------
fuse    fuse every pair with the selected methods and write PNGs
eval    fuse in memory, run the metric suite, write per-pair and means CSVs
bench   model FLOPs, audited FLOPs and wall-clock throughput per method
ablate  parameter sweeps of the vector-scaling kernel (gamma, averaging)

Every flag can also be given in a flat ``key=value`` config file passed with
--config; explicit flags win over the file. Exit codes: 0 on success, 1 when
some pairs were skipped, 2 on fatal errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Callable, Sequence

from . import dataset as ds
from .baselines import (
    FcdFusion,
    FusionMethod,
    HsvAvg,
    fuse_image_with,
    method_name,
    parse_methods,
)
from .core import ImagePair, to_gray
from .flops import measured_flop_audit, total_flops
from .kernel import FcdParams
from .metrics import color_deviation, entropy, evaluate_all, std_deviation
from .reports import (
    ABLATION_HEADER,
    BENCH_HEADER,
    format_real,
    means_path_for,
    write_csv,
    write_eval_report,
    write_means_report,
)

__all__ = ["build_parser", "main", "EXIT_OK", "EXIT_PARTIAL", "EXIT_FATAL"]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2

DEFAULT_GAMMAS = "0.5,1,2,2.2"

_CONFIG_KEYS = (
    "input",
    "manifest",
    "out",
    "methods",
    "gamma",
    "no_averaging",
    "threads",
    "report",
    "kind",
    "gammas",
    "repeats",
)


def _parse_config_file(path: Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ds.DatasetError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {v!r}")


class _Settings:
    """Flag values merged over config-file values merged over defaults."""

    def __init__(self, args: argparse.Namespace):
        self._args = args
        self._cfg = _parse_config_file(args.config) if args.config else {}

    def get(self, name: str, default=None, cast: Callable | None = None):
        value = getattr(self._args, name, None)
        if value is None:
            value = self._cfg.get(name)
        if value is None:
            return default
        if cast is not None and isinstance(value, str):
            return cast(value)
        return value


def _resolve_threads(value) -> int:
    if value is None or str(value).strip().lower() == "auto":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise ValueError(f"threads must be positive, got {n}")
    return n


def _resolve_manifest(settings: _Settings) -> ds.DatasetManifest:
    manifest = settings.get("manifest")
    if manifest:
        return ds.read_manifest(Path(manifest))
    input_dir = settings.get("input")
    if input_dir:
        return ds.discover_pairs(Path(input_dir))
    raise ds.DatasetError("no input: pass --input DIR or --manifest FILE")


def _map_pairs(
    entries: Sequence[ds.PairEntry], threads: int, fn: Callable[[ds.PairEntry], object]
) -> tuple[dict, dict]:
    """Run fn over pairs on a worker pool; collect results and failures by id."""
    results: dict[str, object] = {}
    failures: dict[str, Exception] = {}
    if threads <= 1 or len(entries) <= 1:
        for entry in entries:
            try:
                results[entry.pair_id] = fn(entry)
            except Exception as exc:  # degrade per pair, never abort the batch
                failures[entry.pair_id] = exc
        return results, failures
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, entry): entry for entry in entries}
        for future in as_completed(futures):
            entry = futures[future]
            try:
                results[entry.pair_id] = future.result()
            except Exception as exc:
                failures[entry.pair_id] = exc
    return results, failures


def _log_failures(failures: dict) -> None:
    for pair_id in sorted(failures):
        log.warning("skipped pair %r: %s", pair_id, failures[pair_id])


def _exit_code(total: int, failed: int) -> int:
    if failed == 0:
        return EXIT_OK
    if failed >= total:
        return EXIT_FATAL
    return EXIT_PARTIAL


def _methods_from(settings: _Settings, default: str) -> tuple[FusionMethod, ...]:
    spec = settings.get("methods", default)
    gamma = settings.get("gamma", 2.0, float)
    averaging = not _as_bool(settings.get("no_averaging", False))
    return parse_methods(spec, gamma=gamma, averaging=averaging)


def cmd_fuse(args: argparse.Namespace) -> int:
    settings = _Settings(args)
    manifest = _resolve_manifest(settings)
    methods = _methods_from(settings, default="fcd")
    out = settings.get("out")
    if not out:
        raise ValueError("fuse needs --out DIR")
    out_dir = Path(out)
    threads = _resolve_threads(settings.get("threads"))

    def work(entry: ds.PairEntry):
        pair = ds.load_pair(entry)
        written = []
        for method in methods:
            fused = fuse_image_with(method, pair)
            path = out_dir / method_name(method) / f"{entry.pair_id}.png"
            ds.save_png(fused, path)
            written.append((method_name(method), str(path)))
        return written

    results, failures = _map_pairs(manifest.entries, threads, work)
    _log_failures(failures)

    report = settings.get("report")
    if report:
        rows = []
        for entry in manifest.entries:
            if entry.pair_id in results:
                for method, path in results[entry.pair_id]:
                    rows.append([entry.pair_id, method, path, "ok"])
            else:
                rows.append([entry.pair_id, "", "", f"skipped: {failures[entry.pair_id]}"])
        write_csv(Path(report), ("pair_id", "method", "output", "status"), rows)

    log.info("fused %d/%d pairs with %d method(s)", len(results), len(manifest), len(methods))
    return _exit_code(len(manifest), len(failures))


def cmd_eval(args: argparse.Namespace) -> int:
    settings = _Settings(args)
    manifest = _resolve_manifest(settings)
    methods = _methods_from(settings, default="fcd,rgb,yiq,hsv")
    threads = _resolve_threads(settings.get("threads"))
    report_path = Path(settings.get("report", "report.csv"))
    out = settings.get("out")
    out_dir = Path(out) if out else None

    def work(entry: ds.PairEntry):
        pair = ds.load_pair(entry)
        per_method = []
        for method in methods:
            fused = fuse_image_with(method, pair)
            if out_dir is not None:
                ds.save_png(fused, out_dir / method_name(method) / f"{entry.pair_id}.png")
            report = evaluate_all(pair, fused, method=method_name(method))
            for name, note in report.errors.items():
                log.warning("pair %r method %s: %s unavailable: %s",
                            entry.pair_id, report.method, name, note)
            flops = total_flops(method, pair.width, pair.height)
            per_method.append((method_name(method), report.values, flops))
        return per_method

    results, failures = _map_pairs(manifest.entries, threads, work)
    _log_failures(failures)
    if not results:
        raise ds.DatasetError("no pair could be evaluated")

    rows = []
    per_method_rows: dict[str, list] = {method_name(m): [] for m in methods}
    for entry in manifest.entries:
        if entry.pair_id not in results:
            continue
        for method, values, flops in results[entry.pair_id]:
            rows.append((entry.pair_id, method, values, flops))
            per_method_rows[method].append((values, flops))
    write_eval_report(report_path, rows)
    write_means_report(means_path_for(report_path), per_method_rows)

    log.info("evaluated %d/%d pairs; report at %s", len(results), len(manifest), report_path)
    return _exit_code(len(manifest), len(failures))


def cmd_bench(args: argparse.Namespace) -> int:
    settings = _Settings(args)
    manifest = _resolve_manifest(settings)
    methods = _methods_from(settings, default="fcd,rgb,yiq,hsv")
    repeats = max(5, settings.get("repeats", 5, int))
    report_path = Path(settings.get("report", "bench.csv"))

    pairs: list[ImagePair] = []
    failures = 0
    for entry in manifest.entries:
        try:
            pairs.append(ds.load_pair(entry))
        except Exception as exc:
            failures += 1
            log.warning("skipped pair %r: %s", entry.pair_id, exc)
    if not pairs:
        raise ds.DatasetError("no pair could be loaded for benchmarking")

    total_pixels = sum(p.width * p.height for p in pairs)
    rows = []
    for method in methods:
        model = sum(total_flops(method, p.width, p.height) for p in pairs)
        audit = sum(measured_flop_audit(method, p) for p in pairs)
        for p in pairs:  # warmup
            fuse_image_with(method, p)
        times = []
        for _ in range(repeats):
            begin = time.perf_counter_ns()
            for p in pairs:
                fuse_image_with(method, p)
            times.append(time.perf_counter_ns() - begin)
        median_ns = statistics.median(times)
        ns_per_pixel = median_ns / total_pixels
        mpixels_per_s = total_pixels / (median_ns / 1e9) / 1e6
        rows.append(
            [
                method_name(method),
                str(model),
                str(audit),
                format_real(ns_per_pixel),
                format_real(mpixels_per_s),
            ]
        )
    write_csv(report_path, BENCH_HEADER, rows)
    log.info("benchmarked %d method(s) over %d pair(s); report at %s",
             len(methods), len(pairs), report_path)
    return _exit_code(len(manifest), failures)


def _ablation_settings(settings: _Settings) -> list[tuple[str, FusionMethod]]:
    kind = settings.get("kind")
    if kind == "gamma":
        gammas = [float(g) for g in str(settings.get("gammas", DEFAULT_GAMMAS)).split(",") if g.strip()]
        if not gammas:
            raise ValueError("empty gamma list")
        return [(f"gamma_{g:g}", FcdFusion(FcdParams(gamma=g))) for g in gammas]
    if kind == "averaging":
        gamma = settings.get("gamma", 2.0, float)
        return [
            ("averaging", FcdFusion(FcdParams(gamma=gamma, averaging=True))),
            ("no_averaging", FcdFusion(FcdParams(gamma=gamma, averaging=False))),
        ]
    raise ValueError(f"unknown ablation kind {kind!r}, expected gamma or averaging")


def cmd_ablate(args: argparse.Namespace) -> int:
    settings = _Settings(args)
    manifest = _resolve_manifest(settings)
    variants = _ablation_settings(settings)
    threads = _resolve_threads(settings.get("threads"))
    report_path = Path(settings.get("report", "ablation.csv"))
    out = settings.get("out")
    out_dir = Path(out) if out else None
    # The value-averaging baseline rides along in the report as the reference
    # the gamma sweep is judged against.
    include_hsv_ref = settings.get("kind") == "gamma"

    def work(entry: ds.PairEntry):
        pair = ds.load_pair(entry)
        rows = []
        todo = list(variants) + ([("hsv_avg", HsvAvg())] if include_hsv_ref else [])
        for setting, method in todo:
            fused = fuse_image_with(method, pair)
            if out_dir is not None and not setting.startswith("hsv_avg"):
                ds.save_png(fused, out_dir / setting / f"{entry.pair_id}.png")
            fused_gray = to_gray(fused)
            rows.append(
                [
                    entry.pair_id,
                    setting,
                    format_real(color_deviation(pair.visible, fused)),
                    format_real(entropy(fused_gray)),
                    format_real(std_deviation(fused_gray)),
                ]
            )
        return rows

    results, failures = _map_pairs(manifest.entries, threads, work)
    _log_failures(failures)
    if not results:
        raise ds.DatasetError("no pair could be ablated")

    rows = []
    for entry in manifest.entries:
        rows.extend(results.get(entry.pair_id, []))
    write_csv(report_path, ABLATION_HEADER, rows)
    log.info("ablation over %d variant(s); report at %s", len(variants), report_path)
    return _exit_code(len(manifest), len(failures))


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="dataset directory (pairs named <id>_vi.<ext> / <id>_ir.<ext>)")
    p.add_argument("--manifest", help="explicit manifest.tsv (overrides --input discovery)")
    p.add_argument("--out", help="output directory for fused images")
    p.add_argument("--methods", help="comma-separated subset of: fcd, rgb, yiq, hsv")
    p.add_argument("--gamma", type=float, help="gamma for the fcd kernel (default 2)")
    p.add_argument("--no-averaging", dest="no_averaging", action="store_const", const=True,
                   help="disable brightness averaging in the fcd kernel")
    p.add_argument("--threads", help="worker threads, a number or 'auto' (default auto)")
    p.add_argument("--report", help="CSV report path")
    p.add_argument("--config", help="flat key=value config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcdfusion",
        description="Fuse and evaluate visible/infrared image pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fuse = sub.add_parser("fuse", help="fuse pairs and write PNG outputs")
    _add_common_flags(p_fuse)
    p_fuse.set_defaults(func=cmd_fuse)

    p_eval = sub.add_parser("eval", help="fuse and score pairs, write CSV reports")
    _add_common_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_bench = sub.add_parser("bench", help="cost model, FLOP audit and throughput")
    _add_common_flags(p_bench)
    p_bench.add_argument("--repeats", type=int, help="timing repetitions (default 5, minimum 5)")
    p_bench.set_defaults(func=cmd_bench)

    p_ablate = sub.add_parser("ablate", help="parameter sweeps of the fcd kernel")
    _add_common_flags(p_ablate)
    p_ablate.add_argument("--kind", choices=("gamma", "averaging"), help="which knob to sweep")
    p_ablate.add_argument("--gammas", help=f"gamma values for the sweep (default {DEFAULT_GAMMAS})")
    p_ablate.set_defaults(func=cmd_ablate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except (ds.DatasetError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
