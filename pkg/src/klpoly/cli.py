"""Command-line surface: tables, verification, cell catalogs, benchmarks.

Exit codes are a stable contract: 0 success, 1 mathematical validation
failure, 2 usage or configuration error.  Table and verify outputs are
deterministic byte for byte across runs and worker counts; wall-clock
timings go to stderr or to the bench report only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, cellwalk, deodhar
from .cache import TableCache
from .coxeter import (
    CartanDatum,
    Element,
    GroupTooLarge,
    NonFiniteType,
    WeylGroup,
    word_from_string,
)
from .klcore import (
    ALL_SUITES,
    DEFAULT_DIRECT_CAP,
    DEFAULT_WORD_CAP,
    IntervalTooLarge,
    KLEngine,
    ValidationFailure,
    cross_validate,
)
from .coxeter import DEFAULT_MAX_ORDER
from .laurent import HalfLaurent, poly_to_string

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

CSV_HEADER = ["type", "w", "v", "len_w", "len_v", "kind", "route", "poly"]


@dataclass
class RunConfig:
    command: str
    type_label: str | None = None
    cartan_file: str | None = None
    kind: str = "R"
    format: str = "csv"
    out: str | None = None
    route: str | None = None
    cache_dir: str | None = None
    max_order: int = DEFAULT_MAX_ORDER
    direct_cap: int = DEFAULT_DIRECT_CAP
    word_cap: int = DEFAULT_WORD_CAP
    q_values: tuple[int, ...] = (2, 3, 5, 7)
    workers: int = 1
    repeat: int = 1
    word: str | None = None
    dot: str | None = None
    suites: tuple[str, ...] = ()

    def validate(self):
        if self.type_label is None and self.cartan_file is None:
            raise ValueError("one of --type or --cartan-file is required")
        if self.type_label is not None and self.cartan_file is not None:
            raise ValueError("--type and --cartan-file are mutually exclusive")
        for name, value in (
            ("--max-order", self.max_order),
            ("--direct-cap", self.direct_cap),
            ("--word-cap", self.word_cap),
            ("--workers", self.workers),
            ("--repeat", self.repeat),
        ):
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if any(q < 2 for q in self.q_values):
            raise ValueError("every q value must be at least 2")


def _load_datum(cfg: RunConfig) -> CartanDatum:
    if cfg.type_label is not None:
        return CartanDatum.from_label(cfg.type_label)
    path = Path(cfg.cartan_file)
    payload = json.loads(path.read_text())
    if isinstance(payload, list):
        return CartanDatum.from_matrix(payload)
    return CartanDatum.from_matrix(payload["cartan"], label=payload.get("label"))


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _datum_name(datum: CartanDatum) -> str:
    return datum.label or "custom"


# -- table --------------------------------------------------------------------


def _compute_rows(cfg: RunConfig, datum: CartanDatum, route: str) -> list[dict]:
    group = WeylGroup(datum, max_order=cfg.max_order)
    engine = KLEngine(group)
    pairs = list(group.comparable_pairs())

    if cfg.kind == "R":
        compute = {
            "recursion": engine.r_poly_recursive,
            "hecke": engine.extract_R,
            "cells": engine.r_poly_from_cells,
        }[route]
        check = None
    else:
        compute = {
            "chain_dp": engine.p_poly_chain_dp,
            "recursion": engine.p_poly_recursive,
            "chain_direct": lambda v, w: engine.p_poly_chain_direct(v, w, cfg.direct_cap),
        }[route]
        # The default P route is cross-checked against the recursion;
        # an explicit --route skips that.
        check = engine.p_poly_recursive if cfg.route is None else None

    def one(pair: tuple[Element, Element]) -> tuple:
        v, w = pair
        poly = compute(v, w)
        if check is not None:
            expected = check(v, w)
            if poly != expected:
                raise ValidationFailure(
                    "table", group.word_string(v), group.word_string(w),
                    "route disagrees with the recursion cross-check",
                    {"route": str(poly), "recursion": str(expected)},
                )
        return (
            group.length(w), group.word_string(w),
            group.length(v), group.word_string(v),
            poly,
        )

    if cfg.workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(p) for p in pairs]

    results.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    return [
        {
            "w": w_word, "v": v_word, "len_w": lw, "len_v": lv,
            "poly": poly.to_pairs(),
        }
        for lw, w_word, lv, v_word, poly in results
    ]


def _render_table(cfg: RunConfig, datum: CartanDatum, route: str, rows: list[dict]) -> str:
    name = _datum_name(datum)
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            poly = HalfLaurent.from_pairs([(i, c) for i, c in row["poly"]])
            writer.writerow(
                [name, row["w"], row["v"], row["len_w"], row["len_v"],
                 cfg.kind, route, poly_to_string(poly)]
            )
        return buf.getvalue()
    payload = {
        "schema": "klpoly.table.v1",
        "type": name,
        "cartan": [list(r) for r in datum.cartan],
        "kind": cfg.kind,
        "route": route,
        "rows": rows,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_table(cfg: RunConfig) -> int:
    datum = _load_datum(cfg)
    route = cfg.route or ("chain_dp" if cfg.kind == "P" else "recursion")
    valid_routes = {
        "R": ("recursion", "hecke", "cells"),
        "P": ("chain_dp", "recursion", "chain_direct"),
    }[cfg.kind]
    if route not in valid_routes:
        raise ValueError(f"route {route!r} is not valid for kind {cfg.kind}")

    cache = TableCache(cfg.cache_dir) if cfg.cache_dir else None
    rows = cache.load(datum, cfg.kind, route) if cache else None
    if rows is None:
        rows = _compute_rows(cfg, datum, route)
        if cache:
            cache.store(datum, cfg.kind, route, rows)
    _emit(_render_table(cfg, datum, route, rows), cfg.out)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    datum = _load_datum(cfg)
    try:
        report = cross_validate(
            datum,
            suites=cfg.suites or None,
            q_values=cfg.q_values,
            direct_cap=cfg.direct_cap,
            word_cap=cfg.word_cap,
            max_order=cfg.max_order,
            workers=cfg.workers,
        )
    except ValidationFailure as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            _emit(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n", cfg.out)
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n", cfg.out)
    total = sum(report.timings.values())
    print(
        f"verified {report.label}: {report.comparable_pairs} comparable pairs, "
        f"{len(report.suites)} suites in {total:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK


# -- cells ----------------------------------------------------------------------


def _hasse_dot(group: WeylGroup, w: Element) -> str:
    interval = group.interval(group.identity, w)
    lines = ["digraph bruhat_interval {", "  rankdir=BT;"]
    for y in interval:
        lines.append(f'  "{group.word_string(y)}";')
    for a in interval:
        la = group.length(a)
        for b in interval:
            if group.length(b) == la + 1 and group.bruhat_leq(a, b):
                lines.append(
                    f'  "{group.word_string(a)}" -> "{group.word_string(b)}";'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_cells(cfg: RunConfig) -> int:
    datum = _load_datum(cfg)
    group = WeylGroup(datum, max_order=cfg.max_order)
    word = word_from_string(cfg.word or "")
    catalog = deodhar.cell_catalog(group, word=word)
    w = group.element_from_word(word)
    engine = KLEngine(group)

    records = []
    for c in catalog:
        records.append(
            {
                "mask": [bool(b) for b in c.gamma.mask],
                "endpoint": group.word_string(c.endpoint),
                "I": sorted(c.I),
                "J": sorted(c.J),
                "shape": None if c.is_empty else {
                    "affine_dim": c.shape.affine_dim,
                    "torus_dim": c.shape.torus_dim,
                },
            }
        )

    by_endpoint = []
    endpoints = sorted(
        {c.endpoint for c in catalog if not c.is_empty},
        key=lambda v: (group.length(v), group.reduced_word(v)),
    )
    for v in endpoints:
        poly = deodhar.r_poly_from_cells(group, v, w, word)
        by_endpoint.append(
            {
                "v": group.word_string(v),
                "cells": sum(
                    1 for c in catalog if not c.is_empty and c.endpoint == v
                ),
                "poly": poly.to_pairs(),
                "poly_str": poly_to_string(poly),
                "matches_r_table": poly == engine.r_poly_recursive(v, w),
            }
        )

    payload = {
        "schema": "klpoly.cells.v1",
        "type": _datum_name(datum),
        "word": ".".join(map(str, word)) if word else "e",
        "length": len(word),
        "masks": len(catalog),
        "empty_cells": sum(1 for c in catalog if c.is_empty),
        "records": records,
        "summary": by_endpoint,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.out)
    if cfg.dot:
        Path(cfg.dot).write_text(_hasse_dot(group, w))
    return EXIT_OK


# -- bench ------------------------------------------------------------------------


def _time_route(fn, repeat: int) -> list[float]:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(round(time.perf_counter() - t0, 6))
    return samples


def cmd_bench(cfg: RunConfig) -> int:
    datum = _load_datum(cfg)
    routes: dict[str, object] = {}

    def fresh_engine() -> KLEngine:
        return KLEngine(WeylGroup(datum, max_order=cfg.max_order))

    probe = fresh_engine()
    pairs = list(probe.group.comparable_pairs())

    for kind, route in (
        ("R", "hecke"), ("R", "recursion"), ("R", "cells"),
        ("P", "recursion"), ("P", "chain_dp"), ("P", "chain_direct"),
    ):
        name = f"{kind}.{route}"
        if route == "chain_direct":
            over_cap = any(
                v != w and len(probe.group.interval(v, w)) > cfg.direct_cap
                for v, w in pairs
            )
            if over_cap:
                routes[name] = {"skipped": True, "reason": "intervals beyond --direct-cap"}
                continue

        def run(kind=kind, route=route):
            engine = fresh_engine()
            table = engine.r_table(route) if kind == "R" else engine.p_table(route, cfg.direct_cap)
            return table

        samples = _time_route(run, cfg.repeat)
        routes[name] = {"samples_s": samples, "best_s": min(samples)}

    # Backend comparison on the longest element's word, the hot kernel.
    group = probe.group
    w0 = group.longest_element()
    word = group.reduced_word(w0)
    mult, sign = group.kernel_tables()
    word0 = np.asarray([i - 1 for i in word], dtype=np.int32)
    backends = {}
    for name in cellwalk.available_backends():
        walker = cellwalk.get_walker(name)
        samples = _time_route(lambda: walker(word0, mult, sign, 0), cfg.repeat)
        backends[name] = {"samples_s": samples, "best_s": min(samples)}

    # Warm-cache counters from one full double run on a shared engine.
    shared = fresh_engine()
    shared.r_table("recursion")
    shared.p_table("chain_dp")
    shared.p_table("chain_dp")

    payload = {
        "schema": "klpoly.bench.v1",
        "type": _datum_name(datum),
        "version": __version__,
        "repeat": cfg.repeat,
        "comparable_pairs": len(pairs),
        "routes": routes,
        "cell_kernel": {
            "word": ".".join(map(str, word)),
            "masks": 1 << len(word),
            "active_backend": cellwalk.BACKEND,
            "backends": backends,
        },
        "memo": {
            "engine": shared.stats,
            "bruhat": shared.group.bruhat_stats,
        },
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------------


def _add_datum_args(p: argparse.ArgumentParser):
    p.add_argument("--type", dest="type_label", help="Cartan type label, e.g. A3, B2, G2")
    p.add_argument("--cartan-file", help="JSON file with a Cartan matrix")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                   help="group enumeration cap (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klpoly",
        description="Exact Kazhdan-Lusztig R- and P-polynomial workbench for Weyl groups.",
    )
    parser.add_argument("--version", action="version", version=f"klpoly {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="write a full R- or P-table")
    p_table.add_argument("kind", choices=["R", "P"])
    _add_datum_args(p_table)
    p_table.add_argument("--format", choices=["csv", "json"], default="csv")
    p_table.add_argument("--out", help="output path (default stdout)")
    p_table.add_argument("--route", help="override the computation route")
    p_table.add_argument("--cache-dir", help="directory for the persistent table cache")
    p_table.add_argument("--direct-cap", type=int, default=DEFAULT_DIRECT_CAP)
    p_table.add_argument("--workers", type=int, default=1)

    p_verify = sub.add_parser("verify", help="cross-validate every route against the others")
    _add_datum_args(p_verify)
    p_verify.add_argument("--q", default="2,3,5,7",
                          help="comma-separated field sizes for point-count checks")
    p_verify.add_argument("--suite", action="append", choices=list(ALL_SUITES),
                          help="run only the named suite (repeatable)")
    p_verify.add_argument("--direct-cap", type=int, default=DEFAULT_DIRECT_CAP)
    p_verify.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP)
    p_verify.add_argument("--workers", type=int, default=1)
    p_verify.add_argument("--out", help="report path (default stdout)")

    p_cells = sub.add_parser("cells", help="emit the mask catalog of a reduced word")
    _add_datum_args(p_cells)
    p_cells.add_argument("--word", required=True, help="reduced word, e.g. 1.2.1")
    p_cells.add_argument("--out", help="output path (default stdout)")
    p_cells.add_argument("--dot", help="also write the interval Hasse diagram as DOT")

    p_bench = sub.add_parser("bench", help="time every route and both kernel backends")
    _add_datum_args(p_bench)
    p_bench.add_argument("--repeat", type=int, default=1)
    p_bench.add_argument("--direct-cap", type=int, default=DEFAULT_DIRECT_CAP)
    p_bench.add_argument("--out", help="output path (default stdout)")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in (
        "type_label", "cartan_file", "kind", "format", "out", "route",
        "cache_dir", "max_order", "direct_cap", "word_cap", "workers",
        "repeat", "word", "dot",
    ):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "q", None):
        try:
            cfg.q_values = tuple(int(part) for part in args.q.split(","))
        except ValueError:
            raise ValueError(f"cannot parse --q value {args.q!r}") from None
    if getattr(args, "suite", None):
        cfg.suites = tuple(args.suite)
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        handler = {
            "table": cmd_table,
            "verify": cmd_verify,
            "cells": cmd_cells,
            "bench": cmd_bench,
        }[cfg.command]
        return handler(cfg)
    except ValidationFailure as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (
        ValueError,
        GroupTooLarge,
        NonFiniteType,
        IntervalTooLarge,
        deodhar.NotReduced,
        OSError,
        KeyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
